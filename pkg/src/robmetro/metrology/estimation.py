# this_file: src/robmetro/metrology/estimation.py

"""
Recover theta from a measured trajectory.

The oscillation frequency sqrt(Q_pure) theta is read off the Fourier peak of
the signal, refined by a grid search over theta and finished by a bounded
least-squares fit of the damped cosine over (theta, gamma), optionally also
over the amplitude and offset.
"""

import math
import warnings
from collections.abc import Callable

import numpy as np
from loguru import logger
from scipy import fft
from scipy.optimize import OptimizeWarning, curve_fit

from robmetro.errors import DomainError, EstimationFailed
from robmetro.types import FloatArray, ThetaEstimate, Trajectory

MIN_SAMPLES = 20
ZERO_PADDING = 16
PEAK_TO_MEDIAN = 5.0
MIN_SIGNAL_STD = 1e-9
GRID_POINTS = 401
GRID_SPAN = 0.5
CI_Z = 1.96


def _uniform_signal(times: FloatArray, values: FloatArray) -> tuple[FloatArray, float]:
    """Resample onto a uniform grid when the input spacing is irregular."""
    steps = np.diff(times)
    if np.allclose(steps, steps[0], rtol=1e-6, atol=0):
        return values, float(steps[0])
    grid = np.linspace(times[0], times[-1], times.size)
    logger.debug("Resampled irregular trajectory onto a uniform grid for the spectrum")
    return np.interp(grid, times, values), float(grid[1] - grid[0])


def spectral_peak(times: FloatArray, values: FloatArray) -> float:
    """
    Angular frequency of the strongest nonzero Fourier component.

    Raises:
        EstimationFailed: Flat signal, or no peak standing 5x above the median magnitude
    """
    signal, spacing = _uniform_signal(times, values)
    signal = signal - signal.mean()
    if float(signal.std()) < MIN_SIGNAL_STD:
        msg = "Signal is constant; there is no oscillation to estimate"
        raise EstimationFailed(msg)
    size = fft.next_fast_len(ZERO_PADDING * signal.size)
    magnitude = np.abs(fft.rfft(signal, n=size))[1:]
    freqs = fft.rfftfreq(size, d=spacing)[1:]
    peak = int(np.argmax(magnitude))
    floor = float(np.median(magnitude))
    if magnitude[peak] < PEAK_TO_MEDIAN * floor:
        msg = f"No spectral peak above the noise floor (peak {magnitude[peak]:.3g}, median {floor:.3g})"
        raise EstimationFailed(msg)
    return 2 * math.pi * float(freqs[peak])


def _damped_cosine(root_q: float) -> Callable[..., FloatArray]:
    def model(t: FloatArray, theta: float, gamma: float, amplitude: float = 0.5, offset: float = 0.5) -> FloatArray:
        return amplitude * np.exp(-gamma * t) * np.cos(root_q * theta * t) + offset

    return model


def estimate_theta(trajectory: Trajectory, q_pure: float, *, free_amplitude: bool = False) -> ThetaEstimate:
    """
    Fit A e^{-gamma t} cos(sqrt(Q_pure) theta t) + B to a trajectory.

    Args:
        trajectory: At least 20 samples spanning one oscillation period
        q_pure: Pure-probe QFI fixing the frequency scale
        free_amplitude: Fit A and B as well instead of fixing them at 1/2

    Returns:
        Estimates, RMS residual and a 95% interval half-width for theta taken
        from the fit covariance

    Raises:
        DomainError: q_pure is not positive
        EstimationFailed: Too few samples, no spectral peak, less than one
            period observed or a fit that did not converge
    """
    if not q_pure > 0:
        msg = f"q_pure must be positive, got {q_pure}"
        raise DomainError(msg)
    n_params = 4 if free_amplitude else 2
    times = np.asarray(trajectory.times, dtype=np.float64)
    values = np.asarray(trajectory.probabilities, dtype=np.float64)
    if times.size < max(MIN_SAMPLES, n_params + 1):
        msg = f"Need at least {max(MIN_SAMPLES, n_params + 1)} samples, got {times.size}"
        raise EstimationFailed(msg)

    root_q = math.sqrt(q_pure)
    omega = spectral_peak(times, values)
    span = float(times[-1] - times[0])
    if omega * span < 2 * math.pi:
        msg = f"Window of length {span:.4g} covers less than one period at the spectral peak"
        raise EstimationFailed(msg)

    model = _damped_cosine(root_q)
    theta0 = omega / root_q
    grid = theta0 * np.linspace(1 - GRID_SPAN, 1 + GRID_SPAN, GRID_POINTS)
    errors = [float(np.sum((model(times, th, 0.0) - values) ** 2)) for th in grid]
    theta_start = float(grid[int(np.argmin(errors))])
    gamma_start = 0.1 / span
    logger.debug(f"Spectral theta {theta0:.6g}, grid refined to {theta_start:.6g}")

    if free_amplitude:
        p0 = [theta_start, gamma_start, 0.5, 0.5]
        bounds = ([0.0, 0.0, 0.0, 0.0], [np.inf, np.inf, 1.0, 1.0])
    else:
        p0 = [theta_start, gamma_start]
        bounds = ([0.0, 0.0], [np.inf, np.inf])
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, pcov = curve_fit(model, times, values, p0=p0, bounds=bounds, x_scale="jac", max_nfev=20000)
    except (RuntimeError, ValueError) as e:
        msg = f"Damped-cosine fit did not converge: {e}"
        raise EstimationFailed(msg) from e

    residual = float(np.sqrt(np.mean((model(times, *popt) - values) ** 2)))
    variance = float(pcov[0, 0])
    ci = CI_Z * math.sqrt(variance) if math.isfinite(variance) and variance >= 0 else math.inf
    amplitude, offset = (float(popt[2]), float(popt[3])) if free_amplitude else (0.5, 0.5)
    estimate = ThetaEstimate(
        theta_hat=float(popt[0]),
        gamma_hat=float(popt[1]),
        residual=residual,
        ci_heuristic=ci,
        amplitude=amplitude,
        offset=offset,
    )
    logger.info(f"theta_hat={estimate.theta_hat:.6g}, gamma_hat={estimate.gamma_hat:.3g}, rms={residual:.2e}")
    return estimate

# this_file: src/robmetro/metrology/precision.py

"""
Cramer-Rao precision curves from simulated or modelled signals.
"""

import math

import numpy as np
import numpy.typing as npt
from loguru import logger

from robmetro.errors import DomainError
from robmetro.metrology.fisher import cfi_from_probabilities
from robmetro.runner import ParallelRunner
from robmetro.types import BoolArray, FloatArray, GammaParams, PrecisionCurve, SimulationConfig, Trajectory

# Phase offset between the two shifted runs above which central differences stop resolving the slope.
COARSE_STEP_PHASE = 0.1


def precision_from_trajectories(
    minus: Trajectory, plus: Trajectory, delta: float, label: str = ""
) -> PrecisionCurve:
    """
    delta_theta(t) = 1/sqrt(F(t)) from two runs at theta - delta and theta + delta.

    Samples with F = 0 get delta_theta = inf; near-deterministic samples are
    marked unreliable.
    """
    if minus.times.shape != plus.times.shape or not np.allclose(minus.times, plus.times, rtol=0, atol=1e-12):
        msg = "Shifted trajectories are sampled on different grids"
        raise DomainError(msg)
    fisher, reliable = cfi_from_probabilities(minus.probabilities, plus.probabilities, delta)
    with np.errstate(divide="ignore"):
        delta_theta = np.where(fisher > 0, 1 / np.sqrt(fisher), np.inf)
    unreliable = int(np.count_nonzero(~reliable))
    if unreliable:
        logger.warning(f"{unreliable} of {len(reliable)} CFI samples are unreliable for {label or 'curve'}")
    return PrecisionCurve(minus.times, delta_theta, reliable, label)


def cramer_rao_curve(
    config: SimulationConfig, delta: float | None = None, runner: ParallelRunner | None = None
) -> PrecisionCurve:
    """
    Precision bound of the stabilizer measurement over the configured window.

    Integrates the master equation at theta - delta and theta + delta (in
    parallel if the runner has workers) and differentiates the two signals.

    Args:
        config: Run at the true theta
        delta: Finite-difference step, theta/100 by default
        runner: Executes the two runs; sequential by default

    Raises:
        DomainError: delta is not in (0, theta)
    """
    theta = config.channel.theta
    step = theta / 100 if delta is None else delta
    if not 0 < step < theta:
        msg = f"Finite-difference step {step} must lie in (0, theta={theta})"
        raise DomainError(msg)
    phase = 2 * step * 2 * config.code.n * config.t_max
    if phase > COARSE_STEP_PHASE:
        logger.warning(
            f"fd step {step:.3g} shifts the signal phase by up to {phase:.2f} rad over t_max={config.t_max}; "
            "use a smaller step for long windows"
        )
    runner = runner or ParallelRunner(num_workers=1)
    minus, plus = runner.run([config.with_theta(theta - step), config.with_theta(theta + step)])
    label = f"{config.code.name}/{config.channel.label}"
    logger.debug(f"Differentiated {len(minus)} samples for {label} with step {step:.3g}")
    return precision_from_trajectories(minus, plus, step, label)


def analytic_precision(times: npt.ArrayLike, theta: float, params: GammaParams) -> tuple[FloatArray, BoolArray]:
    """
    Closed-form 1/F of the damped cosine (A = B = 1/2) with theta-independent damping.

    1/F = (e^{2 gamma t} - cos^2(w t)) / (t^2 Q sin^2(w t)), w = sqrt(Q) theta.
    Returns (delta_theta, valid) where valid excludes sin^2 below 1e-4.
    """
    grid = np.asarray(times, dtype=np.float64)
    omega = math.sqrt(params.q_pure) * theta
    sin2 = np.sin(omega * grid) ** 2
    valid = (sin2 > 1e-4) & (grid > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        inverse = (np.exp(2 * params.gamma * grid) - np.cos(omega * grid) ** 2) / (grid**2 * params.q_pure * sin2)
    delta_theta = np.where(valid, np.sqrt(np.abs(inverse)), np.inf)
    return delta_theta, valid

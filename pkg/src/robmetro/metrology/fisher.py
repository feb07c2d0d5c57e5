# this_file: src/robmetro/metrology/fisher.py

"""
Quantum and classical Fisher information.

The quantum side works on dense matrices (QFI from an eigendecomposition,
the variance bound from traces) and on weight enumerators (Q_pure). The
classical side differentiates a measured probability by central
differences.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from loguru import logger

from robmetro.codes.enumerator import dual_weight_enumerator
from robmetro.codes.linear_code import BinaryCode
from robmetro.errors import DimensionError, DomainError
from robmetro.quantum.operators import HERMITIAN_ATOL, DensityMatrix, qubits_of
from robmetro.types import BoolArray, ComplexArray, FloatArray

QFI_CUTOFF = 1e-12
TRACELESS_ATOL = 1e-8
PROBABILITY_CLAMP = 1e-12
RELIABILITY_FLOOR = 1e-9


def _matrix(rho: DensityMatrix | npt.ArrayLike) -> ComplexArray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    matrix = np.asarray(rho, dtype=np.complex128)
    qubits_of(matrix)
    return matrix


def _check_hermitian(matrix: ComplexArray, name: str) -> None:
    defect = float(np.max(np.abs(matrix - matrix.conj().T)))
    if defect > HERMITIAN_ATOL:
        msg = f"{name} is not Hermitian (defect {defect:.3e})"
        raise DomainError(msg)


def qfi(rho: DensityMatrix | npt.ArrayLike, drho: npt.ArrayLike, cutoff: float = QFI_CUTOFF) -> float:
    """
    Quantum Fisher information 2 sum_{kl} (l_k - l_l)^2 / (l_k + l_l) |<k|drho|l>|^2.

    Args:
        rho: State, in its eigenbasis decomposition
        drho: Derivative of the state with respect to the parameter
        cutoff: Eigen-pairs with l_k + l_l below this are dropped

    Raises:
        DimensionError: Shapes differ
        DomainError: Non-Hermitian input, a trace-carrying drho or a negative cutoff
    """
    if cutoff < 0:
        msg = f"cutoff must be >= 0, got {cutoff}"
        raise DomainError(msg)
    state = _matrix(rho)
    derivative = np.asarray(drho, dtype=np.complex128)
    if derivative.shape != state.shape:
        msg = f"drho shape {derivative.shape} does not match rho shape {state.shape}"
        raise DimensionError(msg)
    _check_hermitian(state, "rho")
    _check_hermitian(derivative, "drho")
    trace = abs(complex(np.trace(derivative)))
    if trace > TRACELESS_ATOL:
        msg = f"drho must be traceless, trace is {trace:.3e}"
        raise DomainError(msg)

    eigenvalues, vectors = np.linalg.eigh(state)
    rotated = vectors.conj().T @ derivative @ vectors
    total = eigenvalues[:, None] + eigenvalues[None, :]
    keep = total >= max(cutoff, np.finfo(np.float64).tiny)
    diff = (eigenvalues[:, None] - eigenvalues[None, :]) ** 2
    terms = np.where(keep, diff / np.where(keep, total, 1.0), 0.0) * np.abs(rotated) ** 2
    return max(2.0 * float(terms.sum()), 0.0)


def unitary_derivative(rho: DensityMatrix | npt.ArrayLike, h: npt.ArrayLike, t: float = 1.0) -> ComplexArray:
    """d/dtheta of exp(-i theta t H) rho exp(i theta t H), i.e. -i t [H, rho]."""
    state = _matrix(rho)
    generator = np.asarray(h, dtype=np.complex128)
    if generator.shape != state.shape:
        msg = f"H shape {generator.shape} does not match rho shape {state.shape}"
        raise DimensionError(msg)
    return -1j * t * (generator @ state - state @ generator)


def variance_bound(rho: DensityMatrix | npt.ArrayLike, h: npt.ArrayLike) -> float:
    """4 (Tr(rho H^2) - Tr(rho H)^2), the QFI ceiling for generator H."""
    state = _matrix(rho)
    generator = np.asarray(h, dtype=np.complex128)
    if generator.shape != state.shape:
        msg = f"H shape {generator.shape} does not match rho shape {state.shape}"
        raise DimensionError(msg)
    _check_hermitian(generator, "H")
    mean = float(np.sum(state * generator.T).real)
    second = float(np.sum(state * (generator @ generator).T).real)
    return max(4.0 * (second - mean**2), 0.0)


def is_degenerate(code: BinaryCode) -> bool:
    """True if some coordinate is zero in every codeword (a weight-1 dual codeword exists)."""
    return dual_weight_enumerator(code)[1] > 0


def q_pure(code: BinaryCode) -> float:
    """
    Pure-probe QFI bound 4(2 W_perp,2 + N).

    Degenerate codes are accepted with a warning; for them the bound exceeds
    the true variance by 4 W_perp,1^2.
    """
    w_dual = dual_weight_enumerator(code)
    if w_dual[1] > 0:
        logger.warning(f"Code {code.name} is degenerate: {w_dual[1]} weight-1 dual codewords")
    w2 = w_dual[2] if code.n >= 2 else 0
    return 4.0 * (2 * w2 + code.n)


def variance_from_enumerator(code: BinaryCode) -> float:
    """Exact variance bound of the pure probe, 4(2 W_perp,2 + N) - 4 W_perp,1^2."""
    w_dual = dual_weight_enumerator(code)
    w2 = w_dual[2] if code.n >= 2 else 0
    return 4.0 * (2 * w2 + code.n) - 4.0 * w_dual[1] ** 2


@dataclass(frozen=True)
class FisherInformation:
    """A classical Fisher information value and whether it can be trusted."""

    value: float
    reliable: bool
    derivative: float
    probability: float

    @property
    def delta_theta(self) -> float:
        return 1 / math.sqrt(self.value) if self.value > 0 else math.inf


def cfi_from_probabilities(
    p_minus: npt.ArrayLike, p_plus: npt.ArrayLike, delta: float, p_center: npt.ArrayLike | None = None
) -> tuple[FloatArray, BoolArray]:
    """
    Vectorized CFI (dp/dtheta)^2 / (p (1 - p)) from central differences.

    Without ``p_center`` the probability at theta is the average of the two
    shifted values, which agrees to second order in delta.

    Returns:
        (F, reliable) arrays
    """
    if not delta > 0:
        msg = f"Finite-difference step must be positive, got {delta}"
        raise DomainError(msg)
    lower = np.asarray(p_minus, dtype=np.float64)
    upper = np.asarray(p_plus, dtype=np.float64)
    center = (lower + upper) / 2 if p_center is None else np.asarray(p_center, dtype=np.float64)
    slope = (upper - lower) / (2 * delta)
    clamped = np.clip(center, PROBABILITY_CLAMP, 1 - PROBABILITY_CLAMP)
    fisher = slope**2 / (clamped * (1 - clamped))
    reliable = (np.minimum(center, 1 - center) >= RELIABILITY_FLOOR) & (fisher > 0)
    return fisher, reliable


def cfi(p_of_theta: Callable[[float], float], theta: float, delta: float | None = None) -> FisherInformation:
    """
    Classical Fisher information of a two-outcome measurement at ``theta``.

    Args:
        p_of_theta: Probability of the +1 outcome as a function of theta
        theta: Point of evaluation
        delta: Central-difference step, theta/100 by default
    """
    step = theta / 100 if delta is None else delta
    center = float(p_of_theta(theta))
    lower, upper = float(p_of_theta(theta - step)), float(p_of_theta(theta + step))
    fisher, reliable = cfi_from_probabilities(lower, upper, step, center)
    slope = (upper - lower) / (2 * step)
    return FisherInformation(float(fisher), bool(reliable), slope, center)

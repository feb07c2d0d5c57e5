# this_file: src/robmetro/types.py

"""
Core data types and structures for robmetro.

This module holds the value objects passed between the code, channel,
metrology and oracle layers. Everything here is immutable after
construction; array-valued fields are frozen with ``writeable=False``.
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import TYPE_CHECKING, Any

import numpy as np
import numpy.typing as npt

from robmetro.errors import ChannelKindError, DomainError

if TYPE_CHECKING:
    from robmetro.codes.linear_code import BinaryCode

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]
BoolArray = npt.NDArray[np.bool_]


def _frozen(array: npt.ArrayLike, dtype: Any) -> Any:
    out = np.array(array, dtype=dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class BitVector:
    """
    A binary vector of length N, qubit 1 first.

    Attributes:
        bits: The binary symbols, each 0 or 1
        weight: Hamming weight, computed on construction
    """

    bits: tuple[int, ...]
    weight: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.bits) < 1:
            msg = "BitVector needs at least one bit"
            raise ValueError(msg)
        if any(b not in (0, 1) for b in self.bits):
            msg = f"BitVector entries must be 0 or 1, got {self.bits}"
            raise ValueError(msg)
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        object.__setattr__(self, "weight", sum(self.bits))

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        """Parse a string of '0'/'1' characters."""
        if not text or set(text) - {"0", "1"}:
            msg = f"Not a bit string: {text!r}"
            raise ValueError(msg)
        return cls(tuple(int(c) for c in text))

    @classmethod
    def from_index(cls, index: int, n: int) -> "BitVector":
        """Inverse of :meth:`to_index`."""
        if not 0 <= index < 2**n:
            msg = f"Index {index} out of range for {n} bits"
            raise ValueError(msg)
        return cls(tuple((index >> (n - 1 - i)) & 1 for i in range(n)))

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls((0,) * n)

    @property
    def n(self) -> int:
        return len(self.bits)

    def to_index(self) -> int:
        """Computational-basis index; qubit 1 is the most significant bit."""
        index = 0
        for b in self.bits:
            index = (index << 1) | b
        return index

    def to_array(self) -> npt.NDArray[np.uint8]:
        return np.array(self.bits, dtype=np.uint8)

    def dot(self, other: "BitVector") -> int:
        """Inner product over GF(2)."""
        self._check_length(other)
        return sum(a & b for a, b in zip(self.bits, other.bits, strict=True)) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        self._check_length(other)
        return BitVector(tuple(a ^ b for a, b in zip(self.bits, other.bits, strict=True)))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    def _check_length(self, other: "BitVector") -> None:
        if other.n != self.n:
            msg = f"Length mismatch: {self.n} vs {other.n}"
            raise ValueError(msg)


class ChannelKind(Enum):
    """Noise models acting on the probe."""

    DEPHASING = "dephasing"
    BITFLIP = "bitflip"
    MIXED = "mixed"
    MIXTURE = "mixture"
    FIXED_WEIGHT_Z = "fixed_weight_z"

    @property
    def needs_phi(self) -> bool:
        return self in (ChannelKind.MIXED, ChannelKind.MIXTURE)

    @property
    def is_generator(self) -> bool:
        """True for the continuous-time channels that can be integrated."""
        return self is not ChannelKind.FIXED_WEIGHT_Z


@dataclass(frozen=True)
class ChannelSpec:
    """
    A noise model together with its rate parameters.

    The noise rate seen by the probe is ``p * theta``; it must stay below 1.

    Attributes:
        kind: Which channel
        p: Noise slope, dimensionless and nonnegative
        theta: Signal parameter, dimensionless and nonnegative
        phi: Rotation angle of the mixed channels, in [0, pi]
        w: Number of Z errors of the fixed-weight channel
    """

    kind: ChannelKind
    p: float
    theta: float
    phi: float | None = None
    w: int | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.p) and math.isfinite(self.theta)):
            msg = f"Channel rates must be finite (p={self.p}, theta={self.theta})"
            raise DomainError(msg)
        if self.p < 0 or self.theta < 0:
            msg = f"Channel rates must be nonnegative (p={self.p}, theta={self.theta})"
            raise DomainError(msg)
        if self.p * self.theta >= 1:
            msg = f"Noise rate p*theta={self.p * self.theta} must be < 1"
            raise DomainError(msg)
        if self.kind.needs_phi:
            if self.phi is None:
                msg = f"Channel '{self.kind.value}' requires phi"
                raise DomainError(msg)
            if not 0 <= self.phi <= math.pi:
                msg = f"phi={self.phi} outside [0, pi]"
                raise DomainError(msg)
        elif self.phi is not None:
            msg = f"phi is only meaningful for mixed channels, not '{self.kind.value}'"
            raise DomainError(msg)
        if self.kind is ChannelKind.FIXED_WEIGHT_Z:
            if self.w is None or self.w < 0:
                msg = f"Fixed-weight channel needs w >= 0, got {self.w}"
                raise DomainError(msg)
        elif self.w is not None:
            msg = f"w is only meaningful for the fixed-weight channel, not '{self.kind.value}'"
            raise DomainError(msg)

    @property
    def noise_rate(self) -> float:
        return self.p * self.theta

    def with_theta(self, theta: float) -> "ChannelSpec":
        return replace(self, theta=theta)

    @property
    def label(self) -> str:
        if self.kind.needs_phi:
            return f"{self.kind.value}(phi={self.phi:.6g})"
        if self.kind is ChannelKind.FIXED_WEIGHT_Z:
            return f"{self.kind.value}(w={self.w})"
        return self.kind.value

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "p": self.p, "theta": self.theta, "phi": self.phi, "w": self.w}


@dataclass(frozen=True)
class SimulationConfig:
    """
    One integration run: probe code, channel and time grid.

    Attributes:
        code: Code whose codeword superposition is the probe
        channel: Continuous-time noise channel
        t_max: Final time (hbar = 1)
        dt: Fixed RK4 step
        sample_every: Record every n-th step (t = 0 is always recorded)
        check_positivity: Compute the minimum eigenvalue at each sample
    """

    code: "BinaryCode"
    channel: ChannelSpec
    t_max: float
    dt: float = 0.1
    sample_every: int = 1
    check_positivity: bool = True

    def __post_init__(self) -> None:
        if not self.dt > 0:
            msg = f"dt must be positive, got {self.dt}"
            raise DomainError(msg)
        if self.t_max < self.dt:
            msg = f"t_max={self.t_max} must be at least dt={self.dt}"
            raise DomainError(msg)
        if self.sample_every < 1:
            msg = f"sample_every must be >= 1, got {self.sample_every}"
            raise DomainError(msg)
        if not self.channel.kind.is_generator:
            msg = f"Channel '{self.channel.kind.value}' is a one-shot map and cannot be integrated"
            raise ChannelKindError(msg)

    @property
    def n_steps(self) -> int:
        return round(self.t_max / self.dt)

    def with_theta(self, theta: float) -> "SimulationConfig":
        return replace(self, channel=self.channel.with_theta(theta))

    def to_dict(self) -> dict[str, Any]:
        return {
            "code": self.code.name,
            "generators": [str(g) for g in self.code.generator_vectors],
            "n": self.code.n,
            "channel": self.channel.to_dict(),
            "t_max": self.t_max,
            "dt": self.dt,
            "sample_every": self.sample_every,
        }


class TrajectorySource(Enum):
    """Provenance of a trajectory."""

    INTEGRATED = "integrated"
    ANALYTIC = "analytic"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class IntegratorDiagnostics:
    """Worst-case hygiene figures observed over one integration."""

    steps: int
    max_trace_drift: float
    max_hermiticity_defect: float
    min_eigenvalue: float | None


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Measurement probability p(Pi=+1) sampled on a time grid.

    Attributes:
        times: Sorted sample times
        probabilities: p(Pi=+1) at each time, in [0, 1]
        source: Where the numbers came from
        diagnostics: Integrator figures for integrated runs
    """

    times: FloatArray
    probabilities: FloatArray
    source: TrajectorySource
    diagnostics: IntegratorDiagnostics | None = None

    def __post_init__(self) -> None:
        times = _frozen(self.times, np.float64)
        probs = _frozen(self.probabilities, np.float64)
        if times.ndim != 1 or times.shape != probs.shape:
            msg = f"times {times.shape} and probabilities {probs.shape} must be equal-length vectors"
            raise ValueError(msg)
        if times.size > 1 and np.any(np.diff(times) < 0):
            msg = "Trajectory times must be sorted"
            raise ValueError(msg)
        if np.any((probs < 0) | (probs > 1)):
            msg = "Trajectory probabilities must lie in [0, 1]"
            raise ValueError(msg)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "probabilities", probs)

    def __len__(self) -> int:
        return int(self.times.size)


@dataclass(frozen=True, eq=False)
class PrecisionCurve:
    """
    Cramer-Rao precision bound over time.

    Attributes:
        times: Sample times
        delta_theta: 1/sqrt(F) per sample; inf where F vanishes
        reliable: False where the finite-difference CFI is ill-conditioned
        label: Channel and probe descriptor
    """

    times: FloatArray
    delta_theta: FloatArray
    reliable: BoolArray
    label: str

    def __post_init__(self) -> None:
        times = _frozen(self.times, np.float64)
        delta = _frozen(self.delta_theta, np.float64)
        reliable = _frozen(self.reliable, np.bool_)
        if not (times.shape == delta.shape == reliable.shape):
            msg = "PrecisionCurve fields must have equal lengths"
            raise ValueError(msg)
        if np.any(~(delta > 0)):
            msg = "delta_theta must be positive"
            raise ValueError(msg)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "delta_theta", delta)
        object.__setattr__(self, "reliable", reliable)


@dataclass(frozen=True)
class GammaParams:
    """
    Parameters of the damped-cosine signal model A e^{-gamma t} cos(sqrt(q_pure) theta t) + B.
    """

    gamma: float
    q_pure: float
    amplitude: float = 0.5
    offset: float = 0.5

    def __post_init__(self) -> None:
        if self.gamma < 0:
            msg = f"gamma must be >= 0, got {self.gamma}"
            raise DomainError(msg)
        if self.q_pure < 0:
            msg = f"q_pure must be >= 0, got {self.q_pure}"
            raise DomainError(msg)


@dataclass(frozen=True)
class ThetaEstimate:
    """Result of fitting a damped cosine to a trajectory."""

    theta_hat: float
    gamma_hat: float
    residual: float
    ci_heuristic: float
    amplitude: float = 0.5
    offset: float = 0.5

    def to_dict(self) -> dict[str, float]:
        return {
            "theta_hat": self.theta_hat,
            "gamma_hat": self.gamma_hat,
            "residual": self.residual,
            "ci_heuristic": self.ci_heuristic,
            "amplitude": self.amplitude,
            "offset": self.offset,
        }


@dataclass(frozen=True)
class OracleReport:
    """
    Outcome of one brute-force check of a closed-form claim.

    ``passed`` is true exactly when ``abs_error <= tolerance``. A claim that
    does not apply to the instance is still evaluated and marked
    ``applicable=False``; callers count only applicable failures.
    """

    claim_id: str
    lhs: float
    rhs: float
    abs_error: float
    tolerance: float
    passed: bool
    applicable: bool = True
    details: dict[str, Any] = field(default_factory=dict, compare=False)

    @classmethod
    def compare(
        cls,
        claim_id: str,
        lhs: float,
        rhs: float,
        tolerance: float,
        *,
        applicable: bool = True,
        details: dict[str, Any] | None = None,
    ) -> "OracleReport":
        abs_error = abs(lhs - rhs)
        return cls(
            claim_id=claim_id,
            lhs=float(lhs),
            rhs=float(rhs),
            abs_error=float(abs_error),
            tolerance=tolerance,
            passed=bool(abs_error <= tolerance),
            applicable=applicable,
            details=details or {},
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "claim_id": self.claim_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_error": self.abs_error,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "applicable": self.applicable,
            "details": self.details,
        }

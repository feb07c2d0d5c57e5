# this_file: src/robmetro/channels/generators.py

"""
Lindblad generators of the Pauli noise channels.

Every channel has the form

    d rho/dt = -i theta [H, rho] - rho + sum_j (1-q)^(N-|j|) q^|j| U^j rho U^j

with q = p*theta, j running over all length-N binary vectors and U^j the
product of a single-qubit unitary U on the support of j. The weights
factorize over qubits, so the sum equals the sequential map
rho -> (1-q) rho + q U_i rho U_i applied for i = 1..N. That is how the
generators here evaluate it, with X_i acting as a precomputed index
permutation and Z_i as a precomputed sign vector. The explicit list of
2^N terms from :func:`pauli_conjugation_terms` is kept for brute-force
comparison on small N.

U is Z for dephasing, X for bit flips and cos(phi/2) Z + sin(phi/2) X for
the mixed channel. The mixture channel is the convex combination
cos^2(phi/2) D_Z + sin^2(phi/2) D_X of the two dissipators.
"""

import math
from functools import lru_cache, reduce

import numpy as np
import numpy.typing as npt
from loguru import logger

from robmetro.errors import ChannelKindError, DimensionError, SizeCapError
from robmetro.quantum.operators import DensityMatrix, check_qubits, hamiltonian_diagonal, popcount, xor_distance
from robmetro.types import ChannelKind, ChannelSpec, ComplexArray, FloatArray

# Largest N for which the explicit 2^N-term conjugation list is built.
MAX_EXPLICIT_QUBITS = 6

_I2 = np.eye(2, dtype=np.complex128)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def rotation_unitary(phi: float) -> ComplexArray:
    """U(phi) = cos(phi/2) Z + sin(phi/2) X. Real, symmetric, squares to I."""
    return math.cos(phi / 2) * _Z + math.sin(phi / 2) * _X


def _local_unitary(kind: ChannelKind, phi: float | None) -> ComplexArray:
    if kind is ChannelKind.DEPHASING:
        return _Z
    if kind is ChannelKind.BITFLIP:
        return _X
    if kind is ChannelKind.MIXED and phi is not None:
        return rotation_unitary(phi)
    msg = f"No single jump unitary for channel '{kind.value}'"
    raise ChannelKindError(msg)


def flip_permutations(n: int) -> list[npt.NDArray[np.int64]]:
    """Index permutation of X_i for each 0-based qubit i; qubit 0 is the most significant bit."""
    index = np.arange(2**n)
    return [index ^ (1 << (n - 1 - i)) for i in range(n)]


def z_signs(n: int) -> list[FloatArray]:
    """Diagonal of Z_i for each 0-based qubit i."""
    index = np.arange(2**n)
    return [1.0 - 2.0 * ((index >> (n - 1 - i)) & 1) for i in range(n)]


class LindbladGenerator:
    """
    Right-hand side of the master equation for one channel on N qubits.

    Everything that depends only on (channel, N) is computed once in the
    constructor; calling the instance evaluates d rho/dt.
    """

    def __init__(self, spec: ChannelSpec, n: int):
        if not spec.kind.is_generator:
            msg = f"Channel '{spec.kind.value}' has no generator"
            raise ChannelKindError(msg)
        self.spec = spec
        self.n = check_qubits(n)
        self.dim = 2**n
        self.q = spec.noise_rate
        h = hamiltonian_diagonal(n)
        self._commutator = -1j * spec.theta * (h[:, None] - h[None, :])
        self._dephasing_mask: FloatArray | None = None
        self._elementwise: ComplexArray | None = None
        self._flips: list[npt.NDArray[np.int64]] = []
        self._signs: list[FloatArray] = []
        if spec.kind in (ChannelKind.DEPHASING, ChannelKind.MIXTURE):
            distance = popcount(xor_distance(n), n)
            self._dephasing_mask = (1 - 2 * self.q) ** distance - 1.0
        if spec.kind is ChannelKind.DEPHASING and self._dephasing_mask is not None:
            self._elementwise = self._commutator + self._dephasing_mask
        else:
            self._flips = flip_permutations(n)
        if spec.kind is ChannelKind.MIXED:
            self._signs = z_signs(n)
        logger.debug(f"Built generator {spec.label} on {n} qubits (q={self.q:.3g})")

    def __call__(self, rho: ComplexArray) -> ComplexArray:
        if self._elementwise is not None:
            return self._elementwise * rho
        return self._commutator * rho + self.dissipator(rho)

    def commutator(self, rho: ComplexArray) -> ComplexArray:
        """-i theta [H, rho]."""
        return self._commutator * rho

    def dissipator(self, rho: ComplexArray) -> ComplexArray:
        """Noise part of the generator, without the signal commutator."""
        kind = self.spec.kind
        if kind is ChannelKind.DEPHASING:
            return self._dephasing_dissipator(rho)
        if kind is ChannelKind.BITFLIP:
            return self._bitflip_dissipator(rho)
        if kind is ChannelKind.MIXED:
            return self._rotated_dissipator(rho)
        phi = self.spec.phi or 0.0
        dephased = self._dephasing_dissipator(rho)
        flipped = self._bitflip_dissipator(rho)
        return math.cos(phi / 2) ** 2 * dephased + math.sin(phi / 2) ** 2 * flipped

    def _dephasing_dissipator(self, rho: ComplexArray) -> ComplexArray:
        if self._dephasing_mask is None:
            distance = popcount(xor_distance(self.n), self.n)
            self._dephasing_mask = (1 - 2 * self.q) ** distance - 1.0
        return self._dephasing_mask * rho

    def _bitflip_dissipator(self, rho: ComplexArray) -> ComplexArray:
        q = self.q
        acc = rho
        for perm in self._flips:
            acc = (1 - q) * acc + q * acc[perm][:, perm]
        return acc - rho

    def _rotated_dissipator(self, rho: ComplexArray) -> ComplexArray:
        # U_i rho U_i = c^2 Z rho Z + s^2 X rho X + cs (Z rho X + X rho Z) on qubit i
        q, phi = self.q, self.spec.phi or 0.0
        c, s = math.cos(phi / 2), math.sin(phi / 2)
        acc = rho
        for perm, z in zip(self._flips, self._signs, strict=True):
            rows = acc[perm]
            cols = acc[:, perm]
            signed = z[:, None] * (c * c * acc * z[None, :] + c * s * cols)
            conjugated = signed + s * s * rows[:, perm] + c * s * rows * z[None, :]
            acc = (1 - q) * acc + q * conjugated
        return acc - rho


@lru_cache(maxsize=32)
def build_generator(spec: ChannelSpec, n: int) -> LindbladGenerator:
    """Cached :class:`LindbladGenerator` for (channel, N)."""
    return LindbladGenerator(spec, n)


def _as_matrix(rho: DensityMatrix | ComplexArray, n: int) -> ComplexArray:
    matrix = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=np.complex128)
    if matrix.shape != (2**n, 2**n):
        msg = f"State of shape {matrix.shape} does not describe {n} qubits"
        raise DimensionError(msg)
    return matrix


def _require(spec: ChannelSpec, kind: ChannelKind) -> None:
    if spec.kind is not kind:
        msg = f"Expected a '{kind.value}' channel, got '{spec.kind.value}'"
        raise ChannelKindError(msg)


def dephasing_generator(rho: DensityMatrix | ComplexArray, spec: ChannelSpec, n: int) -> ComplexArray:
    """d rho/dt under Z noise; entry (x, y) is [-i theta (h_x - h_y) + (1-2q)^|x^y| - 1] rho_xy."""
    _require(spec, ChannelKind.DEPHASING)
    return build_generator(spec, n)(_as_matrix(rho, n))


def bitflip_generator(rho: DensityMatrix | ComplexArray, spec: ChannelSpec, n: int) -> ComplexArray:
    """d rho/dt under X noise."""
    _require(spec, ChannelKind.BITFLIP)
    return build_generator(spec, n)(_as_matrix(rho, n))


def mixed_generator(rho: DensityMatrix | ComplexArray, spec: ChannelSpec, n: int) -> ComplexArray:
    """d rho/dt under coherent U(phi) noise."""
    _require(spec, ChannelKind.MIXED)
    return build_generator(spec, n)(_as_matrix(rho, n))


def mixture_generator(rho: DensityMatrix | ComplexArray, spec: ChannelSpec, n: int) -> ComplexArray:
    """d rho/dt under the convex mixture cos^2(phi/2) Z-noise + sin^2(phi/2) X-noise."""
    _require(spec, ChannelKind.MIXTURE)
    return build_generator(spec, n)(_as_matrix(rho, n))


def pauli_conjugation_terms(
    kind: ChannelKind, q: float, n: int, phi: float | None = None
) -> list[tuple[float, ComplexArray]]:
    """
    Explicit (weight, U^j) pairs of the jump sum, one per j in {0,1}^N.

    The weight of j is (1-q)^(N-|j|) q^|j|; the weights sum to 1.
    """
    if n > MAX_EXPLICIT_QUBITS:
        msg = f"Explicit conjugation list is capped at {MAX_EXPLICIT_QUBITS} qubits, got {n}"
        raise SizeCapError(msg)
    unitary = _local_unitary(kind, phi)
    terms = []
    for j in range(2**n):
        bits = [(j >> (n - 1 - i)) & 1 for i in range(n)]
        weight = sum(bits)
        matrix = reduce(np.kron, [unitary if b else _I2 for b in bits])
        terms.append(((1 - q) ** (n - weight) * q**weight, matrix))
    return terms


def explicit_generator(rho: ComplexArray, spec: ChannelSpec, n: int) -> ComplexArray:
    """Reference generator summing every conjugation term explicitly."""
    matrix = _as_matrix(rho, n)
    h = hamiltonian_diagonal(n)
    out = -1j * spec.theta * (h[:, None] - h[None, :]) * matrix

    def jump_sum(kind: ChannelKind) -> ComplexArray:
        terms = pauli_conjugation_terms(kind, spec.noise_rate, n, spec.phi)
        return sum((c * m @ matrix @ m.conj().T for c, m in terms), np.zeros_like(matrix)) - matrix

    if spec.kind is ChannelKind.MIXTURE:
        phi = spec.phi or 0.0
        c2, s2 = math.cos(phi / 2) ** 2, math.sin(phi / 2) ** 2
        return out + c2 * jump_sum(ChannelKind.DEPHASING) + s2 * jump_sum(ChannelKind.BITFLIP)
    return out + jump_sum(spec.kind)

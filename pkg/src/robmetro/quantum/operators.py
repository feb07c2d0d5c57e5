# this_file: src/robmetro/quantum/operators.py

"""
Dense N-qubit operators: Pauli products, probe states, the sensing
Hamiltonian and the X-stabilizer projector.

Basis ordering: the basis index of |x_1 x_2 ... x_N> is the integer whose
binary digits are x_1 ... x_N, so qubit 1 is the most significant bit and
Kronecker products run from qubit 1 to qubit N.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np
import numpy.typing as npt
from loguru import logger

from robmetro.codes.linear_code import BinaryCode
from robmetro.errors import DimensionError, InvariantViolation, SizeCapError
from robmetro.types import BitVector, ComplexArray, FloatArray

MAX_QUBITS = 12

HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-10
EIGENVALUE_FLOOR = -1e-8
PROBABILITY_SLACK = 1e-9

_I2 = np.eye(2, dtype=np.complex128)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def check_qubits(n: int) -> int:
    """Validate a qubit count against the dense-simulation cap."""
    if n < 1:
        msg = f"Qubit count must be positive, got {n}"
        raise SizeCapError(msg)
    if n > MAX_QUBITS:
        msg = f"{n} qubits exceed the dense cap of {MAX_QUBITS}"
        raise SizeCapError(msg)
    return n


def qubits_of(matrix: npt.NDArray[np.generic]) -> int:
    """Qubit count of a square 2^N x 2^N matrix."""
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        msg = f"Expected a square matrix, got shape {matrix.shape}"
        raise DimensionError(msg)
    dim = matrix.shape[0]
    if dim < 2 or dim & (dim - 1):
        msg = f"Dimension {dim} is not a power of two"
        raise DimensionError(msg)
    return dim.bit_length() - 1


def popcount(values: npt.NDArray[np.int64], n: int) -> npt.NDArray[np.int64]:
    """Hamming weight of each integer, reading n bits."""
    out = np.zeros_like(values)
    for shift in range(n):
        out += (values >> shift) & 1
    return out


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    A state of N qubits.

    Construction copies and freezes the array; use :meth:`from_array` to also
    check Hermiticity, unit trace and positivity.
    """

    matrix: ComplexArray
    n_qubits: int

    def __post_init__(self) -> None:
        check_qubits(self.n_qubits)
        matrix = np.array(self.matrix, dtype=np.complex128)
        if matrix.shape != (2**self.n_qubits, 2**self.n_qubits):
            msg = f"Matrix of shape {matrix.shape} does not describe {self.n_qubits} qubits"
            raise DimensionError(msg)
        if not np.all(np.isfinite(matrix)):
            msg = "Density matrix has non-finite entries"
            raise InvariantViolation(msg)
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_array(cls, matrix: npt.ArrayLike, *, check: bool = True) -> "DensityMatrix":
        array = np.asarray(matrix, dtype=np.complex128)
        rho = cls(array, qubits_of(array))
        if check:
            rho.validate()
        return rho

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def purity(self) -> float:
        return float(np.vdot(self.matrix, self.matrix).real)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def validate(self) -> None:
        """
        Raises:
            InvariantViolation: Not Hermitian to 1e-10, trace off by more
                than 1e-10, or an eigenvalue below -1e-8
        """
        defect = self.hermiticity_defect()
        if defect > HERMITIAN_ATOL:
            msg = f"Density matrix not Hermitian (defect {defect:.3e})"
            raise InvariantViolation(msg)
        if abs(self.trace - 1) > TRACE_ATOL:
            msg = f"Density matrix trace {self.trace!r} differs from 1"
            raise InvariantViolation(msg)
        lowest = self.min_eigenvalue()
        if lowest < EIGENVALUE_FLOOR:
            msg = f"Density matrix has eigenvalue {lowest:.3e} < {EIGENVALUE_FLOOR}"
            raise InvariantViolation(msg)

    def expectation(self, operator: ComplexArray) -> complex:
        """Tr(rho A)."""
        if operator.shape != self.matrix.shape:
            msg = f"Operator shape {operator.shape} does not match state shape {self.matrix.shape}"
            raise DimensionError(msg)
        return complex(np.sum(self.matrix * operator.T))


@dataclass(frozen=True)
class PauliLabel:
    """Label (a, b) of the Pauli product E(a, b) = prod_j i^{a_j b_j} X^{a_j} Z^{b_j}."""

    a: BitVector
    b: BitVector

    def __post_init__(self) -> None:
        if self.a.n != self.b.n:
            msg = f"X part has length {self.a.n}, Z part {self.b.n}"
            raise DimensionError(msg)

    @classmethod
    def from_strings(cls, a: str, b: str) -> "PauliLabel":
        return cls(BitVector.from_string(a), BitVector.from_string(b))

    @classmethod
    def x_type(cls, a: BitVector) -> "PauliLabel":
        return cls(a, BitVector.zeros(a.n))

    @classmethod
    def z_type(cls, b: BitVector) -> "PauliLabel":
        return cls(BitVector.zeros(b.n), b)

    @property
    def n(self) -> int:
        return self.a.n


def pauli_factor(a: int, b: int) -> ComplexArray:
    """Single-qubit factor i^{ab} X^a Z^b; (1, 1) gives Y."""
    x = _X if a else _I2
    z = _Z if b else _I2
    return (1j ** (a * b)) * (x @ z)


def pauli_operator(label: PauliLabel) -> ComplexArray:
    """Dense matrix of E(a, b). Hermitian, unitary and involutory."""
    check_qubits(label.n)
    factors = [pauli_factor(a, b) for a, b in zip(label.a.bits, label.b.bits, strict=True)]
    return reduce(np.kron, factors)


def hamiltonian_diagonal(n: int) -> FloatArray:
    """Diagonal of H = sum_j Z_j: entry N - 2 weight(x) for basis state x."""
    check_qubits(n)
    weights = popcount(np.arange(2**n, dtype=np.int64), n)
    return (n - 2 * weights).astype(np.float64)


def hamiltonian(n: int) -> ComplexArray:
    """The sensing Hamiltonian H = sum_j Z_j as a dense diagonal matrix."""
    return np.diag(hamiltonian_diagonal(n)).astype(np.complex128)


def probe_state(code: BinaryCode) -> DensityMatrix:
    """
    Pure probe state: the uniform superposition of codewords.

    Entry (x, y) is 1/|C| when both x and y are codewords, zero otherwise.
    """
    n = check_qubits(code.n)
    vector = np.zeros(2**n, dtype=np.complex128)
    vector[code.indices] = 1.0
    matrix = np.outer(vector, vector) / code.size
    logger.debug(f"Probe state for {code.name}: {code.size} codewords on {n} qubits")
    return DensityMatrix(matrix, n)


def xor_distance(n: int) -> npt.NDArray[np.int64]:
    """Matrix of x XOR y over all pairs of basis indices."""
    idx = np.arange(2**n, dtype=np.int64)
    return np.bitwise_xor.outer(idx, idx)


def stabilizer_projector(code: BinaryCode) -> ComplexArray:
    """
    Projector onto the +1 eigenspace of every X-stabilizer of the code.

    Pi = (1/|C|) sum_{s in C} E(s, 0). Since E(s, 0)|y> = |y XOR s>, entry
    (x, y) is 1/|C| exactly when x XOR y is a codeword.
    """
    n = check_qubits(code.n)
    members = np.zeros(2**n, dtype=bool)
    members[code.indices] = True
    return members[xor_distance(n)].astype(np.complex128) / code.size


def measure_plus_probability(rho: DensityMatrix | ComplexArray, projector: ComplexArray) -> float:
    """
    Probability Tr(rho Pi) of the all-plus stabilizer outcome.

    Raises:
        DimensionError: rho and projector differ in shape
        InvariantViolation: The raw value leaves [-1e-9, 1 + 1e-9]
    """
    matrix = rho.matrix if isinstance(rho, DensityMatrix) else rho
    if matrix.shape != projector.shape:
        msg = f"State shape {matrix.shape} does not match projector shape {projector.shape}"
        raise DimensionError(msg)
    value = float(np.sum(matrix * projector.T).real)
    if not -PROBABILITY_SLACK <= value <= 1 + PROBABILITY_SLACK:
        msg = f"Measurement probability {value!r} outside [0, 1]"
        raise InvariantViolation(msg)
    return min(max(value, 0.0), 1.0)

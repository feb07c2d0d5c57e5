# this_file: src/robmetro/codes/linear_code.py

"""
Binary linear codes over GF(2).

A BinaryCode keeps its generator matrix in reduced row-echelon form together
with the full list of codewords. Codewords are stored as a ``uint8`` array of
shape ``(2**k, n)``; row ``m`` is the codeword of message ``m`` read with its
first bit most significant, so row 0 is always the zero word.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import galois
import numpy as np
import numpy.typing as npt
from loguru import logger

from robmetro.errors import CodeError, RankDeficiencyError, SizeCapError
from robmetro.types import BitVector

GF2 = galois.GF(2)

# Largest length whose codewords we are willing to list explicitly.
MAX_CODE_LENGTH = 20

BitMatrix = npt.NDArray[np.uint8]
GeneratorRow = BitVector | str | Sequence[int]


def gf2_rank(rows: BitMatrix) -> int:
    """Rank of a binary matrix over GF(2)."""
    if rows.shape[0] == 0:
        return 0
    return int(np.linalg.matrix_rank(GF2(rows)))


def gf2_row_reduce(rows: BitMatrix) -> BitMatrix:
    """Reduced row-echelon form over GF(2), zero rows dropped."""
    if rows.shape[0] == 0:
        return rows.copy()
    reduced = GF2(rows).row_reduce().view(np.ndarray).astype(np.uint8)
    return reduced[np.any(reduced != 0, axis=1)]


def gf2_null_space(rows: BitMatrix, n: int) -> BitMatrix:
    """Basis (as rows) of all length-n vectors orthogonal to every row."""
    if rows.shape[0] == 0:
        return np.eye(n, dtype=np.uint8)
    if gf2_rank(rows) == n:
        return np.zeros((0, n), dtype=np.uint8)
    return GF2(rows).null_space().view(np.ndarray).astype(np.uint8)


def span(generators: BitMatrix, n: int) -> BitMatrix:
    """All 2**k GF(2) combinations of the generator rows, message order."""
    k = generators.shape[0]
    if k == 0:
        return np.zeros((1, n), dtype=np.uint8)
    messages = (np.arange(2**k, dtype=np.int64)[:, None] >> np.arange(k - 1, -1, -1, dtype=np.int64)) & 1
    return ((messages @ generators.astype(np.int64)) % 2).astype(np.uint8)


def rows_to_indices(rows: BitMatrix) -> npt.NDArray[np.int64]:
    """Basis index of each row, first column most significant."""
    n = rows.shape[1]
    place = np.left_shift(np.int64(1), np.arange(n - 1, -1, -1, dtype=np.int64))
    return rows.astype(np.int64) @ place


def _as_row(row: GeneratorRow) -> tuple[int, ...]:
    if isinstance(row, BitVector):
        return row.bits
    try:
        if isinstance(row, str):
            return BitVector.from_string(row).bits
        return BitVector(tuple(int(b) for b in row)).bits
    except ValueError as e:
        raise CodeError(str(e)) from e


@dataclass(frozen=True, eq=False)
class BinaryCode:
    """
    An [n, k] binary linear code.

    Construction row-reduces the generators and enumerates the span, so
    every instance satisfies: codewords are closed under XOR, the zero word
    is present and ``len(codewords) == 2**k``.

    Attributes:
        n: Code length
        generators: k x n reduced generator matrix
        name: Free-form label used in reports
        codewords: 2**k x n array of all codewords
    """

    n: int
    generators: BitMatrix
    name: str = ""
    codewords: BitMatrix = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            msg = f"Code length must be positive, got {self.n}"
            raise CodeError(msg)
        if self.n > MAX_CODE_LENGTH:
            msg = f"Code length {self.n} exceeds the enumeration cap of {MAX_CODE_LENGTH}"
            raise SizeCapError(msg)
        rows = np.asarray(self.generators, dtype=np.uint8)
        if rows.size == 0:
            rows = np.zeros((0, self.n), dtype=np.uint8)
        if rows.ndim != 2 or rows.shape[1] != self.n:
            msg = f"Generator matrix of shape {rows.shape} does not have {self.n} columns"
            raise CodeError(msg)
        if rows.shape[0] > self.n:
            msg = f"k={rows.shape[0]} generators exceed the length n={self.n}"
            raise CodeError(msg)
        if np.any(rows > 1):
            msg = "Generator entries must be 0 or 1"
            raise CodeError(msg)
        rank = gf2_rank(rows)
        if rank < rows.shape[0]:
            msg = f"Generator rows are linearly dependent: rank {rank} < {rows.shape[0]} rows"
            raise RankDeficiencyError(msg)
        reduced = gf2_row_reduce(rows)
        reduced.flags.writeable = False
        words = span(reduced, self.n)
        words.flags.writeable = False
        object.__setattr__(self, "generators", reduced)
        object.__setattr__(self, "codewords", words)
        if not self.name:
            object.__setattr__(self, "name", f"[{self.n},{self.k}]")

    @property
    def k(self) -> int:
        return int(self.generators.shape[0])

    @property
    def size(self) -> int:
        return 2**self.k

    @cached_property
    def indices(self) -> npt.NDArray[np.int64]:
        """Sorted basis indices of the codewords."""
        out = np.sort(rows_to_indices(self.codewords))
        out.flags.writeable = False
        return out

    @cached_property
    def weights(self) -> npt.NDArray[np.int64]:
        return self.codewords.sum(axis=1, dtype=np.int64)

    @property
    def generator_vectors(self) -> list[BitVector]:
        return [BitVector(tuple(int(b) for b in row)) for row in self.generators]

    @property
    def codeword_vectors(self) -> list[BitVector]:
        return [BitVector(tuple(int(b) for b in row)) for row in self.codewords]

    @property
    def is_trivial(self) -> bool:
        return self.k == 0

    def __contains__(self, item: object) -> bool:
        if not isinstance(item, BitVector) or item.n != self.n:
            return False
        return bool(np.isin(item.to_index(), self.indices))

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryCode):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.indices, other.indices)

    def __hash__(self) -> int:
        return hash((self.n, self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"BinaryCode(name={self.name!r}, n={self.n}, k={self.k})"


def enumerate_codewords(generators: Iterable[GeneratorRow], n: int, name: str = "") -> BinaryCode:
    """
    Build the code spanned by ``generators``.

    Args:
        generators: Rows as BitVectors, '0'/'1' strings or integer sequences
        n: Code length every row must have
        name: Optional label

    Returns:
        The code holding exactly the 2**k XOR-span of the rows

    Raises:
        CodeError: A row has the wrong length, or k > n
        RankDeficiencyError: Rows are dependent (duplicates included)
    """
    rows = [_as_row(g) for g in generators]
    for i, row in enumerate(rows):
        if len(row) != n:
            msg = f"Generator {i} has length {len(row)}, expected {n}"
            raise CodeError(msg)
    matrix = np.array(rows, dtype=np.uint8).reshape(len(rows), n)
    code = BinaryCode(n=n, generators=matrix, name=name)
    logger.debug(f"Enumerated {code.size} codewords for {code.name}")
    return code


def dual_code(code: BinaryCode) -> BinaryCode:
    """
    The dual code: every length-n vector orthogonal to all codewords.

    It has dimension n - k.
    """
    basis = gf2_null_space(code.generators, code.n)
    return BinaryCode(n=code.n, generators=basis, name=f"dual({code.name})")


def zero_coordinates(code: BinaryCode) -> list[int]:
    """
    1-based coordinates that are zero in every codeword.

    Each such coordinate contributes one weight-1 dual codeword.
    """
    return [i + 1 for i in range(code.n) if not np.any(code.generators[:, i])]

# this_file: src/robmetro/codes/builtin.py

"""
Named codes shipped with robmetro, and random codes for property checks.

Names understood by :func:`get_code`:

- ``ghzN`` / ``repN``: repetition code [N, 1]; its probe is the N-qubit GHZ state
- ``trivialN``: trivial code [N, 0] containing only the zero word
- ``evenN``: even-weight code [N, N-1]
- ``steane``: Steane X-stabilizer code [7, 3]
- ``hamming7``: Hamming code [7, 4]
"""

import re

import numpy as np
from loguru import logger

from robmetro.codes.linear_code import BinaryCode, dual_code, enumerate_codewords, gf2_rank
from robmetro.errors import CodeError

STEANE_GENERATORS = ("1110100", "0111010", "0011101")

_NAME_PATTERN = re.compile(r"^(ghz|rep|trivial|even)(\d+)$")


def repetition_code(n: int) -> BinaryCode:
    return enumerate_codewords(["1" * n], n, name=f"rep{n}")


def trivial_code(n: int) -> BinaryCode:
    return enumerate_codewords([], n, name=f"trivial{n}")


def even_weight_code(n: int) -> BinaryCode:
    code = dual_code(repetition_code(n))
    return BinaryCode(n=n, generators=code.generators, name=f"even{n}")


def steane_code() -> BinaryCode:
    return enumerate_codewords(STEANE_GENERATORS, 7, name="steane")


def hamming7_code() -> BinaryCode:
    return BinaryCode(n=7, generators=dual_code(steane_code()).generators, name="hamming7")


def get_code(name: str) -> BinaryCode:
    """
    Look up a built-in code by name.

    Raises:
        CodeError: Unknown name
    """
    key = name.strip().lower()
    if key == "steane":
        return steane_code()
    if key == "hamming7":
        return hamming7_code()
    match = _NAME_PATTERN.match(key)
    if match is None:
        msg = f"Unknown code name '{name}'"
        raise CodeError(msg)
    family, n = match.group(1), int(match.group(2))
    if family in ("ghz", "rep"):
        return repetition_code(n)
    if family == "trivial":
        return trivial_code(n)
    return even_weight_code(n)


def is_builtin_name(name: str) -> bool:
    key = name.strip().lower()
    return key in ("steane", "hamming7") or _NAME_PATTERN.match(key) is not None


def fixture_codes(max_n: int = 7) -> list[BinaryCode]:
    """Repetition codes for N = 2..max_n plus Steane when it fits."""
    codes = [repetition_code(n) for n in range(2, max_n + 1)]
    if max_n >= 7:
        codes.append(steane_code())
    return codes


def random_code(n: int, k: int, rng: np.random.Generator, max_tries: int = 1000) -> BinaryCode:
    """Draw an [n, k] code with a uniformly random full-rank generator matrix."""
    if not 0 <= k <= n:
        msg = f"Need 0 <= k <= n, got k={k}, n={n}"
        raise CodeError(msg)
    for _ in range(max_tries):
        rows = rng.integers(0, 2, size=(k, n), dtype=np.uint8)
        if gf2_rank(rows) == k:
            return BinaryCode(n=n, generators=rows, name=f"random[{n},{k}]")
    logger.warning(f"No full-rank [{n},{k}] generator found in {max_tries} draws")
    msg = f"Could not draw a full-rank [{n},{k}] generator matrix"
    raise CodeError(msg)

# this_file: src/robmetro/codes/enumerator.py

"""
Weight enumerators, the MacWilliams transform and code robustness.

Enumerator coefficients are Python integers throughout; the MacWilliams
transform expands (1 - z)^k (1 + z)^(N - k) term by term with exact integer
arithmetic so its validity checks are exact.
"""

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from robmetro.codes.linear_code import BinaryCode
from robmetro.errors import DomainError, EnumeratorError, InvariantViolation

# Agreement required between the two closed forms of the robustness.
ROBUSTNESS_FORM_RTOL = 1e-12


@dataclass(frozen=True)
class WeightEnumerator:
    """
    Coefficients W_0..W_N of a weight enumerator.

    W_k counts codewords of Hamming weight k. A valid enumerator of a linear
    code has W_0 = 1, 0 <= W_k <= C(N, k) and a power-of-two total.
    """

    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        coefficients = tuple(int(c) for c in self.coefficients)
        if any(c != orig for c, orig in zip(coefficients, self.coefficients, strict=True)):
            msg = f"Enumerator coefficients must be integers, got {self.coefficients}"
            raise EnumeratorError(msg)
        object.__setattr__(self, "coefficients", coefficients)
        n = len(coefficients) - 1
        if n < 1:
            msg = "An enumerator needs at least two coefficients"
            raise EnumeratorError(msg)
        if coefficients[0] != 1:
            msg = f"W_0 must be 1 for a linear code, got {coefficients[0]}"
            raise EnumeratorError(msg)
        for k, c in enumerate(coefficients):
            if not 0 <= c <= math.comb(n, k):
                msg = f"W_{k}={c} outside [0, C({n},{k})={math.comb(n, k)}]"
                raise EnumeratorError(msg)
        total = sum(coefficients)
        if total & (total - 1):
            msg = f"Codeword count {total} is not a power of two"
            raise EnumeratorError(msg)

    @property
    def n(self) -> int:
        return len(self.coefficients) - 1

    @property
    def size(self) -> int:
        return sum(self.coefficients)

    def __getitem__(self, k: int) -> int:
        return self.coefficients[k]

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self) -> Iterator[int]:
        return iter(self.coefficients)

    def evaluate(self, z: float) -> float:
        """W(z) = sum_k W_k z^k."""
        return math.fsum(c * z**k for k, c in enumerate(self.coefficients))

    def tail(self, z: float) -> float:
        """W(z) - 1 evaluated without the cancellation of subtracting W_0."""
        return math.fsum(c * z**k for k, c in enumerate(self.coefficients) if k > 0)

    def as_list(self) -> list[int]:
        return list(self.coefficients)


def weight_enumerator(code: BinaryCode) -> WeightEnumerator:
    """Tally the codewords of ``code`` by Hamming weight."""
    counts = np.bincount(code.weights, minlength=code.n + 1)
    return WeightEnumerator(tuple(int(c) for c in counts))


def macwilliams_transform(w: WeightEnumerator | Sequence[int], n: int, code_size: int) -> WeightEnumerator:
    """
    Enumerator of the dual code from the enumerator of the code.

    Uses W_perp(z) = (1/|C|) sum_k W_k (1 - z)^k (1 + z)^(N - k), expanded
    with exact integers.

    Args:
        w: Enumerator of a code of length n
        n: Code length
        code_size: Number of codewords |C|

    Returns:
        The dual enumerator, summing to 2**n / |C|

    Raises:
        EnumeratorError: The input is inconsistent, or the transform produced
            a non-integer or negative coefficient
    """
    coefficients = [int(c) for c in w]
    if len(coefficients) != n + 1:
        msg = f"Enumerator has {len(coefficients)} coefficients, expected {n + 1}"
        raise EnumeratorError(msg)
    if sum(coefficients) != code_size:
        msg = f"Enumerator sums to {sum(coefficients)}, not the code size {code_size}"
        raise EnumeratorError(msg)

    raw = [0] * (n + 1)
    for k, wk in enumerate(coefficients):
        if wk == 0:
            continue
        # coefficient of z^j in (1 - z)^k (1 + z)^(n - k)
        for j in range(n + 1):
            lo, hi = max(0, j - (n - k)), min(j, k)
            krawtchouk = sum((-1) ** m * math.comb(k, m) * math.comb(n - k, j - m) for m in range(lo, hi + 1))
            raw[j] += wk * krawtchouk

    dual = []
    for j, value in enumerate(raw):
        quotient, remainder = divmod(value, code_size)
        if remainder or quotient < 0:
            msg = f"MacWilliams coefficient {j} is {value}/{code_size}; input is not a linear-code enumerator"
            raise EnumeratorError(msg)
        dual.append(quotient)
    if sum(dual) * code_size != 2**n:
        msg = f"Dual enumerator sums to {sum(dual)}, expected 2^{n}/{code_size}"
        raise EnumeratorError(msg)
    return WeightEnumerator(tuple(dual))


def dual_weight_enumerator(code: BinaryCode) -> WeightEnumerator:
    """Enumerator of the dual code via the MacWilliams transform."""
    return macwilliams_transform(weight_enumerator(code), code.n, code.size)


def noise_rate(w_dual: WeightEnumerator, p: float, theta: float, n: int) -> float:
    """q = p*theta after checking the enumerator length and the parameter domain."""
    if w_dual.n != n:
        msg = f"Enumerator length {w_dual.n} does not match n={n}"
        raise EnumeratorError(msg)
    if p < 0 or theta < 0:
        msg = f"Noise slope and signal must be nonnegative (p={p}, theta={theta})"
        raise DomainError(msg)
    rate = p * theta
    if rate >= 1:
        msg = f"p*theta={rate} must be < 1"
        raise DomainError(msg)
    return rate


def robustness(w_dual: WeightEnumerator, p: float, theta: float, n: int) -> float:
    """
    Noise-weighted count of nonzero dual codewords.

    Returns sum_{k>0} (1 - q)^(N-k) q^k W_k with q = p*theta. The factored
    form (1 - q)^N [W(q/(1-q)) - 1] is computed alongside and must agree.

    Raises:
        DomainError: p*theta >= 1
        InvariantViolation: The two forms disagree beyond 1e-12 relative
    """
    q = noise_rate(w_dual, p, theta, n)
    direct = math.fsum((1 - q) ** (n - k) * q**k * wk for k, wk in enumerate(w_dual) if k > 0)
    factored = (1 - q) ** n * w_dual.tail(q / (1 - q))
    scale = max(abs(direct), abs(factored))
    if abs(direct - factored) > ROBUSTNESS_FORM_RTOL * scale:
        msg = f"Robustness forms disagree: {direct!r} vs {factored!r}"
        raise InvariantViolation(msg)
    return direct


def robustness_bound_slack(w_dual: WeightEnumerator, p: float, theta: float, n: int) -> float:
    """
    Distance of a code from saturating the robustness bound.

    Equal to [1 - (1 - q)^N] - robustness. It is summed as
    sum_{k>0} (C(N,k) - W_k) q^k (1 - q)^(N-k), which makes nonnegativity
    exact and vanishes only when every W_k equals C(N,k).
    """
    q = noise_rate(w_dual, p, theta, n)
    return math.fsum((math.comb(n, k) - wk) * q**k * (1 - q) ** (n - k) for k, wk in enumerate(w_dual) if k > 0)

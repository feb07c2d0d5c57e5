# this_file: src/robmetro/metrology/damping.py

"""
Damping rates of the stabilizer signal and the damped-cosine model.

With q = p*theta the measured probability behaves as

    p(t) = A exp(-gamma t) cos(sqrt(Q_pure) theta t) + B,   A = B = 1/2,

where gamma depends on the channel and on the dual weight enumerator of the
probe code through its robustness.
"""

import math
from collections import Counter

import numpy as np
import numpy.typing as npt

from robmetro.codes.enumerator import (
    WeightEnumerator,
    dual_weight_enumerator,
    noise_rate,
    robustness,
    robustness_bound_slack,
)
from robmetro.codes.linear_code import BinaryCode, dual_code
from robmetro.errors import DomainError
from robmetro.quantum.operators import check_qubits
from robmetro.types import ChannelKind, ChannelSpec, FloatArray, GammaParams, Trajectory, TrajectorySource


def _check_phi(phi: float) -> None:
    if not 0 <= phi <= math.pi:
        msg = f"phi={phi} outside [0, pi]"
        raise DomainError(msg)


def _one_minus_power(q: float, n: int) -> float:
    """1 - (1 - q)^n without cancellation at small q."""
    return -math.expm1(n * math.log1p(-q))


def gamma_dephasing(code: BinaryCode, p: float, theta: float) -> float:
    """
    Damping rate under dephasing, 2 - 2 (1-q)^N W_perp(q/(1-q)).

    This equals 2[1 - ((1-q)^N + robustness)] = 2 * bound slack, so it lies in
    [0, 2] and vanishes only for q = 0 or the trivial code. GHZ gives
    1 - (1 - 2q)^N.
    """
    w_dual = dual_weight_enumerator(code)
    return 2 * robustness_bound_slack(w_dual, p, theta, code.n)


def gamma_mixed(code: BinaryCode, p: float, theta: float, phi: float) -> float:
    """
    Damping rate when the noise axis is tilted by phi from Z towards X.

    (1 - (1-q)^N) - (1 - (1-q)^N)(sin^2(phi/2) - cos^2(phi/2)) - 2 cos^2(phi/2) W~.
    Reduces to :func:`gamma_dephasing` at phi = 0 and to 0 at phi = pi.
    The sum collapses to 2 cos^2(phi/2) times the bound slack, which is how
    it is evaluated.
    """
    _check_phi(phi)
    w_dual = dual_weight_enumerator(code)
    return 2 * math.cos(phi / 2) ** 2 * robustness_bound_slack(w_dual, p, theta, code.n)


def _mixed_sums(w_dual: WeightEnumerator, q: float, n: int, phi: float) -> tuple[float, float]:
    """
    The two double sums of the exact mixed rate.

    Returns (S, W') with
    S  = sum_{k>0} q_k sum_{l<=k} c^{2(k-l)} s^{2l} C(N,l) C(N,k-l),
    W' = sum_{k>0} q_k sum_{l<=k} c^{2(k-l)} s^{2l} C(N,l) W_perp,{k-l},
    q_k = (1-q)^(N-k) q^k, c = cos(phi/2), s = sin(phi/2).
    """
    s2, c2 = math.sin(phi / 2) ** 2, math.cos(phi / 2) ** 2
    s_terms, w_terms = [], []
    for k in range(1, n + 1):
        qk = (1 - q) ** (n - k) * q**k
        for m in range(k + 1):
            weight = qk * c2 ** (k - m) * s2**m * math.comb(n, m)
            s_terms.append(weight * math.comb(n, k - m))
            w_terms.append(weight * w_dual[k - m])
    return math.fsum(s_terms), math.fsum(w_terms)


def gamma_exact_mixed(code: BinaryCode, p: float, theta: float, phi: float) -> float:
    """
    Exact damping rate of the coherent U(phi) channel before rescaling.

    1 - (1-q)^N + S - 2 W' with the double sums of :func:`_mixed_sums`.
    Meaningful for 0 < phi < pi; the endpoints are accepted for continuity
    checks.
    """
    _check_phi(phi)
    w_dual = dual_weight_enumerator(code)
    q = noise_rate(w_dual, p, theta, code.n)
    s_sum, w_prime = _mixed_sums(w_dual, q, code.n, phi)
    return _one_minus_power(q, code.n) + s_sum - 2 * w_prime


def gamma_exact_mixed_rescaled(code: BinaryCode, p: float, theta: float, phi: float) -> float:
    """
    Exact mixed rate after the same rescaling that makes the dephasing rate
    nonnegative: adds sum_{k>0} q_k (-W_perp,k + inner sum of W').
    """
    w_dual = dual_weight_enumerator(code)
    w_tilde = robustness(w_dual, p, theta, code.n)
    _, w_prime = _mixed_sums(w_dual, p * theta, code.n, phi)
    return gamma_exact_mixed(code, p, theta, phi) - w_tilde + w_prime


def mixed_gamma_correction(code: BinaryCode, p: float, theta: float, phi: float) -> float:
    """Gap between the rescaled exact mixed rate and :func:`gamma_mixed`; zero for the trivial code."""
    return gamma_exact_mixed_rescaled(code, p, theta, phi) - gamma_mixed(code, p, theta, phi)


def gamma_for_channel(code: BinaryCode, spec: ChannelSpec) -> float:
    """
    Model damping rate for a continuous channel.

    Bit flips do not damp the signal at first order in t, so their model rate
    is 0; the slower envelope they do produce is given by
    :func:`bitflip_probability`. Both mixed channels use the tilted rate,
    which is exact at first order for each.
    """
    if spec.kind is ChannelKind.DEPHASING:
        return gamma_dephasing(code, spec.p, spec.theta)
    if spec.kind is ChannelKind.BITFLIP:
        return 0.0
    if spec.kind.needs_phi and spec.phi is not None:
        return gamma_mixed(code, spec.p, spec.theta, spec.phi)
    msg = f"No damping model for channel '{spec.kind.value}'"
    raise DomainError(msg)


def bitflip_pair_counts(code: BinaryCode) -> dict[tuple[int, int], int]:
    """
    Count pairs (s, T) with s a codeword and T a dual codeword inside supp(s).

    Keys are (|s|, |T|). |T| is always even because T is orthogonal to its
    own superset s.
    """
    check_qubits(code.n)
    members = np.zeros(2**code.n, dtype=bool)
    members[dual_code(code).indices] = True
    counts: Counter[tuple[int, int]] = Counter()
    for s in code.indices.tolist():
        subset = s
        while True:
            if members[subset]:
                counts[s.bit_count(), subset.bit_count()] += 1
            if subset == 0:
                break
            subset = (subset - 1) & s
    return dict(counts)


def bitflip_probability(code: BinaryCode, times: npt.ArrayLike, p: float, theta: float) -> FloatArray:
    """
    p(+1) under bit flips with the dissipator taken to first order in q = p*theta.

    In the Heisenberg picture each qubit of a stabilizer X^s turns into
    c_x X + c_y Y with

        c_x = e^(-qt) (cos wt + q sin(wt)/w),   c_y = -2 theta e^(-qt) sin(wt)/w,

    w = sqrt(4 theta^2 - q^2), and averaging over the codewords gives

        p(t) = |C|^-1 sum_(s, T) (-1)^(|T|/2) c_x^(|s|-|T|) c_y^|T|

    over the pairs of :func:`bitflip_pair_counts`. For GHZ this is
    (1 + Re z^N)/2 with z = c_x + i c_y. The dropped terms are O(N^2 q^2 t).
    Values are clipped to [0, 1].

    Raises:
        DomainError: Negative times, or p and theta outside their domain
    """
    grid = np.asarray(times, dtype=np.float64)
    if np.any(grid < 0):
        msg = "Times must be nonnegative"
        raise DomainError(msg)
    q = noise_rate(dual_weight_enumerator(code), p, theta, code.n)
    omega = math.sqrt(max(4 * theta**2 - q**2, 0.0))
    sin_over_omega = grid * np.sinc(omega * grid / math.pi)
    decay = np.exp(-q * grid)
    c_x = decay * (np.cos(omega * grid) + q * sin_over_omega)
    c_y = -2 * theta * decay * sin_over_omega
    total = np.zeros_like(grid)
    for (weight, inner), count in sorted(bitflip_pair_counts(code).items()):
        total += count * (-1) ** (inner // 2) * c_x ** (weight - inner) * c_y**inner
    return np.clip(total / code.size, 0.0, 1.0)


def bitflip_envelope_rate(code: BinaryCode, p: float, theta: float) -> float:
    """Decay rate of the slowest oscillating term of :func:`bitflip_probability`: q times the minimum distance."""
    q = noise_rate(dual_weight_enumerator(code), p, theta, code.n)
    nonzero = code.weights[code.weights > 0]
    return q * int(nonzero.min()) if nonzero.size else 0.0


def analytic_probability(
    t: float | npt.ArrayLike, theta: float, params: GammaParams
) -> float | FloatArray:
    """
    A exp(-gamma t) cos(sqrt(Q_pure) theta t) + B, clipped to [0, 1].

    Accepts a scalar or an array of times.
    """
    times = np.asarray(t, dtype=np.float64)
    if np.any(times < 0):
        msg = "Times must be nonnegative"
        raise DomainError(msg)
    omega = math.sqrt(params.q_pure) * theta
    value = params.amplitude * np.exp(-params.gamma * times) * np.cos(omega * times) + params.offset
    value = np.clip(value, 0.0, 1.0)
    if value.ndim == 0:
        return float(value)
    return value


def analytic_trajectory(times: npt.ArrayLike, theta: float, params: GammaParams) -> Trajectory:
    """The damped-cosine model sampled on ``times``."""
    grid = np.asarray(times, dtype=np.float64)
    values = np.atleast_1d(analytic_probability(grid, theta, params))
    return Trajectory(grid, values, TrajectorySource.ANALYTIC)

# this_file: src/robmetro/channels/fixed_weight.py

"""
One-shot channel that applies Z errors to exactly w qubits, all supports
equally likely.

Averaging (-1)^<x^y, i> over the C(N, w) supports of weight w gives the
Krawtchouk value K_w(d) / C(N, w) with d = |x ^ y|, so the map is an
elementwise mask on rho.
"""

import math

import numpy as np

from robmetro.errors import DomainError
from robmetro.quantum.operators import DensityMatrix, popcount, xor_distance
from robmetro.types import FloatArray


def krawtchouk(w: int, d: int, n: int) -> int:
    """K_w(d) = sum_l (-1)^l C(d, l) C(n - d, w - l)."""
    return sum((-1) ** m * math.comb(d, m) * math.comb(n - d, w - m) for m in range(max(0, w - (n - d)), min(w, d) + 1))


def fixed_weight_mask(n: int, w: int) -> FloatArray:
    """Elementwise factor multiplying rho_xy."""
    if not 0 <= w <= n:
        msg = f"Error weight w={w} outside [0, {n}]"
        raise DomainError(msg)
    per_distance = np.array([krawtchouk(w, d, n) / math.comb(n, w) for d in range(n + 1)])
    return per_distance[popcount(xor_distance(n), n)]


def fixed_weight_z_map(rho: DensityMatrix, w: int) -> DensityMatrix:
    """
    Apply C(N, w)^-1 sum_{|i| = w} E(0, i) rho E(0, i).

    Trace-preserving and unital; the diagonal of rho is unchanged.

    Raises:
        DomainError: w outside [0, N]
    """
    mask = fixed_weight_mask(rho.n_qubits, w)
    return DensityMatrix(mask * rho.matrix, rho.n_qubits)

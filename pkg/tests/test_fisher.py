# this_file: tests/test_fisher.py

"""
Tests for quantum and classical Fisher information.
"""

import math

import numpy as np
import pytest

from robmetro.codes.builtin import fixture_codes, get_code
from robmetro.codes.linear_code import enumerate_codewords
from robmetro.errors import DimensionError, DomainError
from robmetro.metrology.damping import analytic_probability
from robmetro.metrology.fisher import (
    cfi,
    cfi_from_probabilities,
    is_degenerate,
    q_pure,
    qfi,
    unitary_derivative,
    variance_bound,
    variance_from_enumerator,
)
from robmetro.metrology.precision import analytic_precision
from robmetro.quantum.operators import hamiltonian, probe_state
from robmetro.types import GammaParams


class TestQuantumFisher:
    """QFI, the variance bound and Q_pure."""

    @pytest.mark.parametrize(("name", "expected"), [("ghz3", 36.0), ("ghz7", 196.0), ("steane", 28.0)])
    def test_pure_probe_qfi(self, name, expected):
        """For a pure probe the QFI equals 4 Var(H) and Q_pure."""
        code = get_code(name)
        rho = probe_state(code)
        h = hamiltonian(code.n)
        assert qfi(rho, unitary_derivative(rho, h)) == pytest.approx(expected, rel=1e-9)
        assert variance_bound(rho, h) == pytest.approx(expected, rel=1e-12)
        assert q_pure(code) == expected

    def test_qfi_scales_with_time(self, ghz3):
        """The derivative of exp(-i theta t H) carries a factor t, the QFI t^2."""
        rho = probe_state(ghz3)
        h = hamiltonian(3)
        assert qfi(rho, unitary_derivative(rho, h, t=10.0)) == pytest.approx(3600.0, rel=1e-9)

    def test_enumerator_variance_matches_dense(self):
        """The enumerator formula agrees with the dense variance on every fixture code."""
        for code in fixture_codes(7):
            rho = probe_state(code)
            assert variance_from_enumerator(code) == pytest.approx(variance_bound(rho, hamiltonian(code.n)))

    def test_degenerate_code(self):
        """{000, 110}: Q_pure = 20 overstates the variance bound 16 by 4 W_perp,1^2."""
        code = enumerate_codewords(["110"], 3)
        assert is_degenerate(code)
        assert q_pure(code) == 20.0
        assert variance_from_enumerator(code) == 16.0
        assert variance_bound(probe_state(code), hamiltonian(3)) == pytest.approx(16.0)
        assert not is_degenerate(get_code("steane"))

    def test_mixed_state_qfi_below_variance(self, ghz3):
        """Mixing the probe with white noise lowers the QFI under the variance bound."""
        pure = probe_state(ghz3).matrix
        rho = 0.8 * pure + 0.2 * np.eye(8) / 8
        h = hamiltonian(3)
        value = qfi(rho, unitary_derivative(rho, h))
        assert 0 < value < variance_bound(rho, h)

    def test_errors(self, ghz3):
        """Shape mismatch, non-Hermitian or trace-carrying drho and a negative cutoff."""
        rho = probe_state(ghz3)
        with pytest.raises(DimensionError):
            qfi(rho, np.zeros((4, 4)))
        with pytest.raises(DomainError, match="traceless"):
            qfi(rho, np.eye(8))
        drho = np.zeros((8, 8), dtype=complex)
        drho[0, 1] = 1.0
        with pytest.raises(DomainError, match="Hermitian"):
            qfi(rho, drho)
        with pytest.raises(DomainError, match="cutoff"):
            qfi(rho, np.zeros((8, 8)), cutoff=-1.0)
        with pytest.raises(DimensionError):
            variance_bound(rho, np.eye(4))


class TestClassicalFisher:
    """Finite-difference CFI."""

    def test_closed_form(self):
        """p = (1 + cos(14 theta t))/2 has F = 196 t^2 for every theta with sin != 0."""
        t, theta = 100.0, 1e-3
        info = cfi(lambda th: 0.5 * (1 + math.cos(14 * th * t)), theta, delta=theta * 1e-4)
        assert info.reliable
        assert info.value == pytest.approx(196 * t**2, rel=1e-6)
        assert info.delta_theta == pytest.approx(1 / (14 * t), rel=1e-6)

    def test_matches_analytic_precision(self):
        """The closed-form 1/F of the damped cosine equals the numerical CFI at fixed gamma."""
        theta = 1e-3
        params = GammaParams(gamma=1e-3, q_pure=196.0)
        times = np.array([50.0, 100.0, 150.0, 400.0])
        expected, valid = analytic_precision(times, theta, params)
        assert valid.all()
        for t, reference in zip(times, expected, strict=True):
            info = cfi(lambda th, t=t: analytic_probability(t, th, params), theta, delta=theta * 1e-4)
            assert info.delta_theta == pytest.approx(reference, rel=1e-6)

    def test_deterministic_outcome_is_unreliable(self):
        """At p = 1 the measurement carries no usable information."""
        info = cfi(lambda th: 1.0, 1e-3)
        assert not info.reliable
        assert info.value == 0.0
        assert info.delta_theta == math.inf

    def test_vectorized(self):
        """Array inputs give one value per sample."""
        fisher, reliable = cfi_from_probabilities([0.4, 0.5], [0.6, 0.5], 0.1)
        assert fisher[0] == pytest.approx(1.0 / 0.25)
        assert fisher[1] == 0.0
        assert reliable.tolist() == [True, False]

    def test_step_must_be_positive(self):
        with pytest.raises(DomainError):
            cfi_from_probabilities([0.5], [0.5], 0.0)

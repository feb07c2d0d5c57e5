# this_file: tests/test_oracle.py

"""
Tests for the brute-force oracle.
"""

import pytest

from robmetro.codes.builtin import even_weight_code, repetition_code
from robmetro.metrology.damping import gamma_dephasing
from robmetro.errors import DomainError, SizeCapError
from robmetro.oracle import (
    dual_weight_count,
    run_oracle_suite,
    short_time_coefficients,
    is_repetition,
    verify_bitflip_first_order,
    verify_bitflip_undamped,
    verify_first_order_vanishing,
    verify_second_order_curvature,
    verify_second_order_expansion,
    verify_toy_variance,
)
from robmetro.types import ChannelKind, ChannelSpec

P, THETA = 0.05, 1e-3


def test_dual_weight_count(ghz7, steane, trivial3):
    """Counts from explicit inner products."""
    assert dual_weight_count(ghz7, 2) == 21
    assert dual_weight_count(steane, 2) == 0
    assert dual_weight_count(steane, 3) == 7
    assert dual_weight_count(trivial3, 1) == 3


class TestToyVariance:
    """Variance of H after w random Z errors."""

    @pytest.mark.parametrize("w", range(4))
    def test_repetition(self, ghz3, w):
        report = verify_toy_variance(ghz3, w)
        assert report.applicable
        assert report.passed
        assert report.rhs == 36.0

    @pytest.mark.parametrize("w", range(4))
    def test_even_weight(self, w):
        """Even3 has W_perp,2 = 0: 12 on both sides."""
        report = verify_toy_variance(even_weight_code(3), w)
        assert report.passed
        assert report.lhs == pytest.approx(12.0)

    def test_trivial_is_inapplicable(self, trivial3):
        """|000> has no variance while the formula gives 36."""
        report = verify_toy_variance(trivial3, 1)
        assert not report.applicable
        assert not report.passed
        assert report.lhs == pytest.approx(0.0, abs=1e-12)
        assert report.rhs == 36.0
        assert report.details["weight1_dual"] == 3

    def test_limits(self, ghz3, ghz7):
        with pytest.raises(SizeCapError):
            verify_toy_variance(ghz7, 1)
        with pytest.raises(DomainError):
            verify_toy_variance(ghz3, 4)
        with pytest.raises(SizeCapError):
            verify_first_order_vanishing(repetition_code(8))


@pytest.mark.parametrize("name", ["ghz3", "ghz7", "steane"])
def test_first_order_vanishes(name, request):
    assert verify_first_order_vanishing(request.getfixturevalue(name)).passed


class TestShortTime:
    """Short-time expansion of the stabilizer signal."""

    @pytest.mark.parametrize("name", ["ghz3", "ghz7", "steane"])
    def test_linear_coefficient_is_minus_gamma(self, name, request):
        report = verify_second_order_expansion(request.getfixturevalue(name), P, THETA)
        assert report.passed, report.to_dict()
        assert report.rhs < 0
        assert report.details["quadratic_taylor_error"] < report.details["quadratic_literal_error"]

    @pytest.mark.parametrize("name", ["ghz3", "ghz7", "steane"])
    def test_quadratic_coefficient(self, name, request):
        """Once the noise curvature is removed the signal curvature is -theta^2 Q_pure/2 to 0.1%."""
        report = verify_second_order_curvature(request.getfixturevalue(name), P, THETA)
        assert report.passed, report.to_dict()
        assert report.abs_error <= 1e-3 * abs(report.rhs)

    def test_damped_cosine_curvature_gap(self, ghz7, steane):
        """
        gamma^2/2 is the exact noise curvature for GHZ only.

        Steane pairs sit at distance 0 or 4, so the noise curvature is
        7/8 d^2 against (7/4 d)^2/2 in the model, d = (1 - 2q)^4 - 1.
        """
        ghz = verify_second_order_curvature(ghz7, P, THETA).details
        assert ghz["taylor_error"] <= 1e-4 * abs(ghz["taylor"])
        q = P * THETA
        d = (1 - 2 * q) ** 4 - 1
        gap = (7 / 4 * d) ** 2 / 2 - 7 / 8 * d**2
        details = verify_second_order_curvature(steane, P, THETA).details
        assert details["taylor_error"] == pytest.approx(gap, rel=1e-2)
        assert details["taylor_error"] / abs(details["taylor"]) == pytest.approx(0.0076, abs=5e-4)

    def test_noise_only_fit(self, ghz3):
        """Without the commutator the dephasing signal is e^{dt d} with d = (1 - 2q)^3 - 1."""
        spec = ChannelSpec(ChannelKind.DEPHASING, P, THETA)
        d = (1 - 2 * P * THETA) ** 3 - 1
        coefficients = short_time_coefficients(ghz3, spec, noise_only=True)
        assert coefficients[1] == pytest.approx(d, rel=1e-6)
        assert coefficients[0] == pytest.approx(d**2 / 2, rel=1e-2)

    def test_fit_shape(self, ghz3):
        """c0 = 1 because the probe starts in the +1 eigenspace."""
        coefficients = short_time_coefficients(ghz3, ChannelSpec(ChannelKind.DEPHASING, P, THETA))
        assert coefficients.shape == (3,)
        assert coefficients[2] == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("name", ["ghz3", "steane"])
    def test_bitflip_first_order_is_undamped(self, name, request):
        """At first order in t bit flips leave the signal undamped and only the frequency is set."""
        report = verify_bitflip_first_order(request.getfixturevalue(name), P, THETA)
        assert report.claim_id == "bitflip_first_order"
        assert report.passed
        assert report.details["frequency_ok"]


class TestBitflipLongWindow:
    """Damping fitted over several periods under bit flips."""

    def test_repetition_detection(self, ghz3, steane, trivial3):
        assert is_repetition(ghz3)
        assert not is_repetition(steane)
        assert not is_repetition(trivial3)
        assert not is_repetition(even_weight_code(3))

    @pytest.mark.parametrize("n", [3, pytest.param(7, marks=pytest.mark.slow)])
    def test_fit_matches_closed_form(self, n):
        """
        The fitted rate agrees with the closed form and sits near N q.

        It is far above 1e-6, and below the dephasing rate of the same probe.
        """
        code = repetition_code(n)
        report = verify_bitflip_undamped(code, P, THETA)
        assert report.passed, report.to_dict()
        details = report.details
        assert not details["zero_damping"]
        assert report.lhs > 1e-6
        assert report.lhs == pytest.approx(n * P * THETA, rel=0.25)
        assert details["envelope_rate"] == pytest.approx(n * P * THETA)
        assert report.lhs < gamma_dephasing(code, P, THETA)
        assert details["closed_form_deviation"] <= 1e-3
        assert details["theta_hat"] == pytest.approx(THETA, rel=0.05)

    def test_needs_repetition_code(self, steane):
        with pytest.raises(DomainError, match="repetition"):
            verify_bitflip_undamped(steane, P, THETA)

    def test_needs_signal(self, ghz3):
        with pytest.raises(DomainError):
            verify_bitflip_undamped(ghz3, P, 0.0)


def test_suite_on_one_code(ghz3):
    """Four toy checks, first order, two second-order checks and both bit-flip checks."""
    reports = run_oracle_suite([ghz3])
    assert len(reports) == 9
    assert [r.claim_id for r in reports][-2:] == ["bitflip_first_order", "bitflip_undamped"]
    assert all(r.passed for r in reports)


@pytest.mark.integration
def test_default_suite():
    """Every applicable claim holds on the fixture codes; the trivial toy checks are inapplicable."""
    reports = run_oracle_suite()
    assert [r.to_dict() for r in reports if r.applicable and not r.passed] == []
    inapplicable = [r for r in reports if not r.applicable]
    assert {r.details["code"] for r in inapplicable} == {"trivial3"}

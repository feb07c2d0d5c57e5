# this_file: tests/test_integrator.py

"""
Tests for the RK4 integrator and its hygiene checks.
"""

import math

import numpy as np
import pytest

from robmetro.channels.integrator import evolve, rk4_step
from robmetro.errors import StepSizeError
from robmetro.types import ChannelKind, ChannelSpec, SimulationConfig, TrajectorySource

THETA, P = 1e-3, 0.05


def test_rk4_exponential():
    """One RK4 step of dy/dt = -y matches exp(-dt) to fifth order."""
    y = np.array([[1.0 + 0j]])
    out = rk4_step(lambda r: -r, y, 0.1)
    assert out[0, 0].real == pytest.approx(math.exp(-0.1), abs=1e-7)


def test_starts_at_one(ghz3):
    """The probe is a +1 eigenstate, so p(0) = 1."""
    config = SimulationConfig(ghz3, ChannelSpec(ChannelKind.DEPHASING, P, THETA), t_max=10.0, dt=0.5, sample_every=4)
    trajectory = evolve(config)
    assert trajectory.source is TrajectorySource.INTEGRATED
    assert trajectory.probabilities[0] == pytest.approx(1.0)
    np.testing.assert_allclose(trajectory.times, [0, 2, 4, 6, 8, 10])


@pytest.mark.parametrize(
    "spec",
    [
        ChannelSpec(ChannelKind.DEPHASING, P, THETA),
        ChannelSpec(ChannelKind.BITFLIP, P, THETA),
        ChannelSpec(ChannelKind.MIXED, P, THETA, phi=math.pi / 2),
        ChannelSpec(ChannelKind.MIXTURE, P, THETA, phi=math.pi / 2),
    ],
    ids=lambda s: s.label,
)
def test_hygiene(steane, spec):
    """Trace, Hermiticity and positivity stay within tolerance."""
    config = SimulationConfig(steane, spec, t_max=200.0, dt=0.5, sample_every=40)
    diagnostics = evolve(config).diagnostics
    assert diagnostics is not None
    assert diagnostics.steps == 400
    assert diagnostics.max_trace_drift <= 1e-8
    assert diagnostics.max_hermiticity_defect <= 1e-10
    assert diagnostics.min_eigenvalue is not None
    assert diagnostics.min_eigenvalue >= -1e-8


def test_positivity_check_can_be_skipped(ghz3):
    """Without the positivity check no eigenvalue is recorded."""
    config = SimulationConfig(
        ghz3, ChannelSpec(ChannelKind.BITFLIP, P, THETA), t_max=5.0, dt=0.5, check_positivity=False
    )
    diagnostics = evolve(config).diagnostics
    assert diagnostics is not None
    assert diagnostics.min_eigenvalue is None


def test_step_too_large(ghz3):
    """A step that moves rho by 0.1 or more is refused."""
    config = SimulationConfig(ghz3, ChannelSpec(ChannelKind.DEPHASING, P, THETA), t_max=100.0, dt=50.0)
    with pytest.raises(StepSizeError):
        evolve(config)


@pytest.mark.parametrize("kind", [ChannelKind.BITFLIP, ChannelKind.MIXED])
def test_halving_dt(ghz3, kind):
    """Halving dt changes the sampled probabilities by at most 1e-6."""
    spec = ChannelSpec(kind, P, THETA, phi=math.pi / 2 if kind is ChannelKind.MIXED else None)
    coarse = evolve(SimulationConfig(ghz3, spec, t_max=400.0, dt=1.0, sample_every=20))
    fine = evolve(SimulationConfig(ghz3, spec, t_max=400.0, dt=0.5, sample_every=40))
    np.testing.assert_allclose(coarse.times, fine.times)
    np.testing.assert_allclose(coarse.probabilities, fine.probabilities, rtol=0, atol=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize("code_name", ["ghz7", "steane"])
@pytest.mark.parametrize("kind", [ChannelKind.DEPHASING, ChannelKind.BITFLIP, ChannelKind.MIXED])
def test_halving_dt_on_seven_qubits(request, code_name, kind):
    """The 1e-6 dt-halving agreement also holds for the seven-qubit fixtures."""
    code = request.getfixturevalue(code_name)
    spec = ChannelSpec(kind, P, THETA, phi=math.pi / 2 if kind is ChannelKind.MIXED else None)
    coarse = evolve(SimulationConfig(code, spec, t_max=300.0, dt=1.0, sample_every=25, check_positivity=False))
    fine = evolve(SimulationConfig(code, spec, t_max=300.0, dt=0.5, sample_every=50, check_positivity=False))
    np.testing.assert_allclose(coarse.times, fine.times)
    np.testing.assert_allclose(coarse.probabilities, fine.probabilities, rtol=0, atol=1e-6)


@pytest.mark.integration
def test_ghz7_dephasing_closed_form(ghz7):
    """
    GHZ7 under dephasing follows 1/2 (e^{-gamma t} cos(14 theta t) + 1) exactly,
    with gamma = 1 - (1 - 2 p theta)^7, over t in [0, 3/gamma].
    """
    gamma = 1 - (1 - 2 * P * THETA) ** 7
    dt, sample_every = 0.5, 20
    stride = dt * sample_every
    t_max = stride * math.ceil(3 / gamma / stride)
    config = SimulationConfig(
        ghz7, ChannelSpec(ChannelKind.DEPHASING, P, THETA), t_max=t_max, dt=dt, sample_every=sample_every
    )
    trajectory = evolve(config)
    expected = 0.5 * (np.exp(-gamma * trajectory.times) * np.cos(14 * THETA * trajectory.times) + 1)
    assert trajectory.times[-1] >= 3 / gamma
    np.testing.assert_allclose(trajectory.probabilities, expected, rtol=0, atol=1e-3)
    diagnostics = trajectory.diagnostics
    assert diagnostics is not None
    assert diagnostics.max_trace_drift <= 1e-8
    assert diagnostics.min_eigenvalue is not None
    assert diagnostics.min_eigenvalue >= -1e-8

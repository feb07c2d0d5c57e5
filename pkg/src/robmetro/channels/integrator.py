# this_file: src/robmetro/channels/integrator.py

"""
Fixed-step RK4 integration of the master equation from the probe state.

After every step the state is checked and re-Hermitized:

- the Frobenius norm of the step must stay below 0.1
- the Hermiticity defect before symmetrizing must stay below 1e-10
- |Tr rho - 1| must stay below 1e-8

At sample times the stabilizer probability is recorded and, unless
disabled, the smallest eigenvalue is checked against -1e-8.
"""

from collections.abc import Callable

import numpy as np
from loguru import logger

from robmetro.channels.generators import build_generator
from robmetro.errors import InvariantViolation, StepSizeError
from robmetro.quantum.operators import (
    EIGENVALUE_FLOOR,
    check_qubits,
    measure_plus_probability,
    probe_state,
    stabilizer_projector,
)
from robmetro.types import ComplexArray, IntegratorDiagnostics, SimulationConfig, Trajectory, TrajectorySource

MAX_STEP_NORM = 0.1
HERMITICITY_TOL = 1e-10
TRACE_DRIFT_TOL = 1e-8

Rhs = Callable[[ComplexArray], ComplexArray]


def rk4_step(rhs: Rhs, rho: ComplexArray, dt: float) -> ComplexArray:
    """One classical fourth-order Runge-Kutta step of d rho/dt = rhs(rho)."""
    k1 = rhs(rho)
    k2 = rhs(rho + (dt / 2) * k1)
    k3 = rhs(rho + (dt / 2) * k2)
    k4 = rhs(rho + dt * k3)
    return rho + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def hermitize(rho: ComplexArray) -> tuple[ComplexArray, float]:
    """Return (rho + rho^dagger)/2 and the defect max|rho - rho^dagger|."""
    adjoint = rho.conj().T
    defect = float(np.max(np.abs(rho - adjoint)))
    return (rho + adjoint) / 2, defect


def evolve(config: SimulationConfig) -> Trajectory:
    """
    Integrate the probe under the configured channel and record p(Pi=+1).

    Args:
        config: Code, channel and time grid

    Returns:
        Integrated trajectory sampled every ``sample_every`` steps, t = 0 included

    Raises:
        StepSizeError: A step moved rho by 0.1 or more, or the trace drifted
        InvariantViolation: Hermiticity or positivity out of tolerance
    """
    code, spec = config.code, config.channel
    n = check_qubits(code.n)
    rhs = build_generator(spec, n)
    projector = stabilizer_projector(code)
    rho = np.array(probe_state(code).matrix)
    dt, n_steps = config.dt, config.n_steps
    logger.debug(f"Evolving {code.name} under {spec.label}: {n_steps} steps of dt={dt}")

    times = [0.0]
    probabilities = [measure_plus_probability(rho, projector)]
    min_eigenvalue = float(np.linalg.eigvalsh(rho)[0]) if config.check_positivity else None
    max_drift = 0.0
    max_defect = 0.0

    for step in range(1, n_steps + 1):
        updated = rk4_step(rhs, rho, dt)
        step_norm = float(np.linalg.norm(updated - rho))
        if step_norm >= MAX_STEP_NORM:
            msg = f"Step {step} changed rho by {step_norm:.3g} >= {MAX_STEP_NORM}; reduce dt={dt}"
            raise StepSizeError(msg)
        rho, defect = hermitize(updated)
        if defect > HERMITICITY_TOL:
            msg = f"Hermiticity defect {defect:.3e} at step {step} exceeds {HERMITICITY_TOL}"
            raise InvariantViolation(msg)
        drift = abs(float(np.trace(rho).real) - 1.0)
        if drift > TRACE_DRIFT_TOL:
            msg = f"Trace drifted by {drift:.3e} at step {step}; reduce dt={dt}"
            raise StepSizeError(msg)
        max_drift = max(max_drift, drift)
        max_defect = max(max_defect, defect)

        if step % config.sample_every == 0:
            times.append(step * dt)
            probabilities.append(measure_plus_probability(rho, projector))
            if min_eigenvalue is not None:
                lowest = float(np.linalg.eigvalsh(rho)[0])
                if lowest < EIGENVALUE_FLOOR:
                    msg = f"Eigenvalue {lowest:.3e} below {EIGENVALUE_FLOOR} at t={step * dt}"
                    raise InvariantViolation(msg)
                min_eigenvalue = min(min_eigenvalue, lowest)

    diagnostics = IntegratorDiagnostics(
        steps=n_steps,
        max_trace_drift=max_drift,
        max_hermiticity_defect=max_defect,
        min_eigenvalue=min_eigenvalue,
    )
    logger.debug(f"Finished {n_steps} steps; max trace drift {max_drift:.2e}")
    return Trajectory(np.array(times), np.array(probabilities), TrajectorySource.INTEGRATED, diagnostics)

# this_file: src/robmetro/pipeline.py

"""
Core pipeline for robmetro commands.

Each function here runs one command end to end on already-validated inputs
and returns data; the CLI only parses flags, prints and maps errors to exit
codes.
"""

from collections.abc import Sequence
from pathlib import Path
from typing import Any

from loguru import logger

from robmetro.channels.integrator import evolve
from robmetro.channels.sampling import sample_copies
from robmetro.codes.enumerator import dual_weight_enumerator, robustness, robustness_bound_slack, weight_enumerator
from robmetro.codes.linear_code import BinaryCode, zero_coordinates
from robmetro.config import RobmetroSettings, RunManifest, SimulationFile, build_config, manifest_path_for
from robmetro.errors import DataFileError
from robmetro.io import atomic_write_text, write_precision_csv, write_sweep_csv, write_trajectory_csv
from robmetro.metrology.damping import analytic_trajectory, gamma_dephasing, gamma_for_channel, gamma_mixed
from robmetro.metrology.fisher import is_degenerate, q_pure
from robmetro.metrology.precision import cramer_rao_curve
from robmetro.runner import Evolver, ParallelRunner
from robmetro.types import GammaParams, PrecisionCurve, SimulationConfig, Trajectory


def analyze_code(code: BinaryCode, p: float, theta: float, phi: float | None = None) -> dict[str, Any]:
    """
    Enumerator-based report for one code at one noise point.

    Returns a JSON-ready dict with the code block (n, k, size, W_C, W_dual,
    W2, q_pure, degenerate, zero_coordinates) and the damping figures.
    """
    logger.info(f"Analyzing {code.name}")
    w = weight_enumerator(code)
    w_dual = dual_weight_enumerator(code)
    degenerate = is_degenerate(code)
    report: dict[str, Any] = {
        "code": {
            "name": code.name,
            "n": code.n,
            "k": code.k,
            "size": code.size,
            "W_C": w.as_list(),
            "W_dual": w_dual.as_list(),
            "W2": w_dual[2] if code.n >= 2 else 0,
            "q_pure": q_pure(code),
            "degenerate": degenerate,
            "zero_coordinates": zero_coordinates(code),
        },
        "channel": {"p": p, "theta": theta, "phi": phi},
        "gamma": gamma_dephasing(code, p, theta),
        "robustness": robustness(w_dual, p, theta, code.n),
        "bound_slack": robustness_bound_slack(w_dual, p, theta, code.n),
    }
    if phi is not None:
        report["gamma_mixed"] = gamma_mixed(code, p, theta, phi)
    return report


def model_params(config: SimulationConfig) -> GammaParams:
    """Damped-cosine parameters predicted for a run."""
    return GammaParams(gamma=gamma_for_channel(config.code, config.channel), q_pure=q_pure(config.code))


def simulate(
    config: SimulationConfig,
    *,
    copies: int = 0,
    seed: int | None = None,
    analytic: bool = False,
    evolver: Evolver = evolve,
) -> tuple[Trajectory, Trajectory | None]:
    """
    Integrate one run, optionally sample finite copies and evaluate the model.

    Returns:
        (trajectory, model trajectory or None)
    """
    logger.info(f"Simulating {config.code.name} under {config.channel.label} to t={config.t_max}")
    trajectory = evolver(config)
    if copies > 0:
        logger.info(f"Sampling {copies} copies per time point (seed={seed})")
        trajectory = sample_copies(trajectory, copies, seed)
    model = analytic_trajectory(trajectory.times, config.channel.theta, model_params(config)) if analytic else None
    return trajectory, model


def crb(config: SimulationConfig, fd_step: float | None = None, runner: ParallelRunner | None = None) -> PrecisionCurve:
    """Cramer-Rao curve of one configuration."""
    logger.info(f"Computing precision curve for {config.code.name} under {config.channel.label}")
    return cramer_rao_curve(config, fd_step, runner)


def sweep_theta(
    config: SimulationConfig, thetas: Sequence[float], runner: ParallelRunner | None = None
) -> list[tuple[float, Trajectory]]:
    """One trajectory per theta, integrated in parallel when the runner allows."""
    runner = runner or ParallelRunner(num_workers=1)
    logger.info(f"Sweeping {len(thetas)} theta values for {config.code.name} under {config.channel.label}")
    trajectories = runner.run([config.with_theta(float(theta)) for theta in thetas])
    return list(zip((float(t) for t in thetas), trajectories, strict=True))


def write_manifest(
    command: str,
    config: SimulationConfig,
    code_ref: str,
    output: Path,
    options: dict[str, Any] | None = None,
    seed: int | None = None,
) -> Path:
    """
    Write the run manifest next to ``output``.

    A code given as a file and the output are recorded as absolute paths so
    the manifest replays from any working directory.
    """
    if Path(code_ref).is_file():
        code_ref = str(Path(code_ref).resolve())
    manifest = RunManifest(
        command=command,
        config=SimulationFile.from_config(config, code_ref),
        options=options or {},
        seed=seed,
        outputs=[str(Path(output).resolve())],
    )
    return atomic_write_text(manifest_path_for(output), manifest.to_json())


def run_command(
    command: str,
    config: SimulationConfig,
    output: Path,
    options: dict[str, Any],
    seed: int | None = None,
    runner: ParallelRunner | None = None,
) -> Path:
    """
    Execute simulate, crb or sweep and write its CSV.

    Shared by the CLI commands and by :func:`replay`, which is what makes a
    replayed manifest produce the same bytes.
    """
    runner = runner or ParallelRunner(num_workers=1)
    if command == "simulate":
        trajectory, model = simulate(
            config,
            copies=int(options.get("copies", 0)),
            seed=seed,
            analytic=bool(options.get("analytic", False)),
            evolver=runner.evolver,
        )
        return write_trajectory_csv(output, trajectory, model)
    if command == "crb":
        return write_precision_csv(output, crb(config, options.get("fd_step"), runner))
    if command == "sweep":
        thetas = [float(t) for t in options.get("thetas", [])]
        return write_sweep_csv(output, sweep_theta(config, thetas, runner))
    msg = f"Cannot run command '{command}'"
    raise DataFileError(msg)


def replay(
    manifest_path: Path,
    out: Path | None = None,
    settings: RobmetroSettings | None = None,
    runner: ParallelRunner | None = None,
) -> Path:
    """
    Re-run the command recorded in a manifest.

    Args:
        manifest_path: Manifest JSON
        out: Output path; defaults to the first output recorded in the manifest
        settings: Fallbacks for fields the manifest leaves unset
        runner: Executes the integrations
    """
    manifest = RunManifest.load(manifest_path)
    if out is None:
        if not manifest.outputs:
            msg = f"{manifest_path}: manifest lists no outputs and no --out was given"
            raise DataFileError(msg)
        out = Path(manifest.outputs[0])
    config, _ = build_config(settings or RobmetroSettings(), manifest.config)
    logger.info(f"Replaying '{manifest.command}' from {manifest_path} (recorded with {manifest.tool_version})")
    return run_command(manifest.command, config, out, manifest.options, manifest.seed, runner)

# this_file: src/robmetro/cli.py

"""
Command-line interface for robmetro using Typer.

Commands: analyze, simulate, crb, estimate, oracle, sweep, replay and cache.
Settings come from ``ROBMETRO_*`` environment variables or a .env file;
command flags override a JSON run file, which overrides the settings.

Exit codes: 0 success, 2 usage errors, 3 numerical invariant violations or
failed oracle claims, 4 estimation failures.
"""

import json
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Any

import typer
from loguru import logger
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from robmetro.cache import CachedEvolver
from robmetro.codes.builtin import fixture_codes, trivial_code
from robmetro.codes.code_file import resolve_code
from robmetro.config import RobmetroSettings, SimulationFile, build_config
from robmetro.errors import USAGE_ERRORS, EstimationFailed, InvariantViolation
from robmetro.io import precision_csv, read_trajectory_csv, trajectory_csv, write_json
from robmetro.metrology.estimation import estimate_theta
from robmetro.metrology.fisher import q_pure
from robmetro.oracle import ORACLE_MAX_QUBITS, run_oracle_suite
from robmetro.pipeline import analyze_code, crb, replay, run_command, simulate, write_manifest
from robmetro.runner import ParallelRunner
from robmetro.types import ChannelKind, SimulationConfig

EXIT_USAGE = 2
EXIT_INVARIANT = 3
EXIT_ESTIMATION = 4

app = typer.Typer(
    name="robmetro",
    help="Simulate stabilizer-code probes under Pauli noise and bound their phase-estimation precision.",
    rich_markup_mode="markdown",
    context_settings={"help_option_names": ["-h", "--help"]},
)
console = Console()


class Channel(str, Enum):
    """Channels that can be integrated in time."""

    dephasing = "dephasing"
    bitflip = "bitflip"
    mixed = "mixed"
    mixture = "mixture"


def setup_logging(log_level: str, verbose: bool) -> None:
    """Configures Loguru logger based on verbosity and level."""
    final_log_level = "DEBUG" if verbose and log_level.upper() == "INFO" else log_level.upper()

    logger.remove()
    logger.add(
        sys.stderr,
        level=final_log_level,
        format=(
            "<level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:"
            "<cyan>{line}</cyan> - <level>{message}</level>"
        ),
    )
    logger.debug(f"Logging initialized at level: {final_log_level}")


def get_settings(config_file: Path | None = None) -> RobmetroSettings:
    """Loads settings, optionally from a specified .env file."""
    env_file_path = config_file if config_file else RobmetroSettings.model_config.get("env_file")
    try:
        # pydantic-settings accepts _env_file at init time but it is not in BaseSettings' typed signature.
        return RobmetroSettings(_env_file=env_file_path)  # type: ignore[call-arg]
    except ValidationError as e:
        console.print("[bold red]Error loading configuration:[/bold red]")
        console.print(e)
        raise typer.Exit(code=EXIT_USAGE) from e


@contextmanager
def exit_codes() -> Iterator[None]:
    """Map library exceptions onto the documented exit codes."""
    try:
        yield
    except USAGE_ERRORS as e:
        console.print(f"[bold red]Error:[/bold red] {e}")
        raise typer.Exit(code=EXIT_USAGE) from e
    except InvariantViolation as e:
        console.print(f"[bold red]Numerical invariant violated:[/bold red] {e}")
        raise typer.Exit(code=EXIT_INVARIANT) from e
    except EstimationFailed as e:
        console.print(f"[bold red]Estimation failed:[/bold red] {e}")
        raise typer.Exit(code=EXIT_ESTIMATION) from e


def _runner(settings: RobmetroSettings) -> ParallelRunner:
    if settings.use_cache:
        return ParallelRunner(settings.num_workers, CachedEvolver(settings.cache_dir))
    return ParallelRunner(settings.num_workers)


def _resolve(
    settings: RobmetroSettings,
    run_file: Path | None,
    **flags: Any,
) -> tuple[SimulationConfig, str]:
    file = SimulationFile.load(run_file) if run_file else None
    if isinstance(flags.get("channel"), Channel):
        flags["channel"] = ChannelKind(flags["channel"].value)
    return build_config(settings, file, **flags)


@app.callback()
def main_callback(
    ctx: typer.Context,
    config: Path | None = typer.Option(
        None,
        "--config",
        "-c",
        help="Path to a custom .env configuration file.",
        exists=True,
        dir_okay=False,
        resolve_path=True,
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable verbose DEBUG logging."),
    log_level: str = typer.Option(
        "INFO", "--log-level", help="Set logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)."
    ),
    workers: int | None = typer.Option(None, "--workers", "-w", help="Worker processes for independent runs."),
    use_cache: bool | None = typer.Option(
        None, "--use-cache/--no-cache", help="Reuse integrated trajectories from the disk cache."
    ),
) -> None:
    """
    robmetro: robust phase estimation with stabilizer-code probes.
    """
    settings = get_settings(config_file=config)
    if verbose:
        settings.verbose = True
    if log_level and log_level != "INFO":
        settings.log_level = log_level
    if workers is not None:
        settings.num_workers = workers
    if use_cache is not None:
        settings.use_cache = use_cache

    setup_logging(settings.log_level, settings.verbose)
    ctx.meta["settings"] = settings


CODE_HELP = "Code name (ghz7, rep5, steane, hamming7, even4, trivial3) or path to a code file."


@app.command()
def analyze(
    ctx: typer.Context,
    code: str = typer.Argument(..., help=CODE_HELP),
    p: float | None = typer.Option(None, "--p", help="Noise slope p (default from settings)."),
    theta: float | None = typer.Option(None, "--theta", help="Signal theta (default from settings)."),
    phi: float | None = typer.Option(None, "--phi", help="Also report the tilted-noise damping at this angle."),
    as_json: bool = typer.Option(False, "--json", help="Print the report as JSON instead of a table."),
    out: Path | None = typer.Option(None, "--out", "-o", help="Also write the JSON report here."),
) -> None:
    """
    Weight enumerators, **Q_pure**, robustness and bound slack of a code.
    """
    settings: RobmetroSettings = ctx.meta["settings"]
    with exit_codes():
        report = analyze_code(
            resolve_code(code),
            p if p is not None else settings.p,
            theta if theta is not None else settings.theta,
            phi,
        )
        if out is not None:
            write_json(out, report)

    if as_json:
        typer.echo(json.dumps(report, indent=2))
        return

    info = report["code"]
    table = Table(title=f"Code {info['name']}")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", justify="right")
    table.add_row("n", str(info["n"]))
    table.add_row("k", str(info["k"]))
    table.add_row("|C|", str(info["size"]))
    table.add_row("W_C", " ".join(map(str, info["W_C"])))
    table.add_row("W_dual", " ".join(map(str, info["W_dual"])))
    table.add_row("W_dual,2", str(info["W2"]))
    table.add_row("Q_pure", f"{info['q_pure']:g}")
    table.add_row("robustness", f"{report['robustness']:.6e}")
    table.add_row("bound slack", f"{report['bound_slack']:.6e}")
    table.add_row("gamma (dephasing)", f"{report['gamma']:.6e}")
    if "gamma_mixed" in report:
        table.add_row("gamma (mixed)", f"{report['gamma_mixed']:.6e}")
    console.print(table)
    if info["degenerate"]:
        console.print(
            f"[yellow]Warning:[/yellow] degenerate code, coordinates {info['zero_coordinates']} are zero "
            "in every codeword; Q_pure overstates the probe variance."
        )


@app.command("simulate")
def simulate_command(
    ctx: typer.Context,
    code: str | None = typer.Option(None, "--code", help=CODE_HELP),
    channel: Channel | None = typer.Option(None, "--channel", help="Noise channel."),
    phi: float | None = typer.Option(None, "--phi", help="Noise-axis angle for mixed/mixture channels."),
    theta: float | None = typer.Option(None, "--theta", help="Signal theta."),
    p: float | None = typer.Option(None, "--p", help="Noise slope p."),
    t_max: float | None = typer.Option(None, "--t-max", help="Final time."),
    dt: float | None = typer.Option(None, "--dt", help="RK4 step."),
    sample_every: int | None = typer.Option(None, "--sample-every", help="Record every n-th step."),
    copies: int = typer.Option(0, "--copies", help="Binomial sampling over this many copies (0 = exact)."),
    seed: int | None = typer.Option(None, "--seed", help="Seed for copy sampling."),
    analytic: bool = typer.Option(False, "--analytic", help="Add the damped-cosine model column."),
    run_file: Path | None = typer.Option(None, "--run-file", "-f", help="JSON run configuration.", exists=True),
    out: Path | None = typer.Option(None, "--out", "-o", help="CSV output (stdout if omitted)."),
) -> None:
    """
    Integrate the probe and write the **p(+1)** trajectory as CSV.
    """
    settings: RobmetroSettings = ctx.meta["settings"]
    options = {"copies": copies, "analytic": analytic}
    with exit_codes():
        config, code_ref = _resolve(
            settings, run_file, code=code, channel=channel, phi=phi, theta=theta, p=p,
            t_max=t_max, dt=dt, sample_every=sample_every,
        )  # fmt: skip
        if copies < 0:
            console.print("[bold red]Error:[/bold red] --copies must be >= 0")
            raise typer.Exit(code=EXIT_USAGE)
        runner = _runner(settings)
        if out is None:
            trajectory, model = simulate(config, copies=copies, seed=seed, analytic=analytic, evolver=runner.evolver)
            typer.echo(trajectory_csv(trajectory, model), nl=False)
            return
        run_command("simulate", config, out, options, seed, runner)
        write_manifest("simulate", config, code_ref, out, options, seed)
    console.print(f"Wrote trajectory to [cyan]{out}[/cyan]")


@app.command("crb")
def crb_command(
    ctx: typer.Context,
    code: str | None = typer.Option(None, "--code", help=CODE_HELP),
    channel: Channel | None = typer.Option(None, "--channel", help="Noise channel."),
    phi: float | None = typer.Option(None, "--phi", help="Noise-axis angle for mixed/mixture channels."),
    theta: float | None = typer.Option(None, "--theta", help="Signal theta."),
    p: float | None = typer.Option(None, "--p", help="Noise slope p."),
    t_max: float | None = typer.Option(None, "--t-max", help="Final time."),
    dt: float | None = typer.Option(None, "--dt", help="RK4 step."),
    sample_every: int | None = typer.Option(None, "--sample-every", help="Record every n-th step."),
    fd_step: float | None = typer.Option(None, "--fd-step", help="Finite-difference step in theta (theta/100)."),
    run_file: Path | None = typer.Option(None, "--run-file", "-f", help="JSON run configuration.", exists=True),
    out: Path | None = typer.Option(None, "--out", "-o", help="CSV output (stdout if omitted)."),
) -> None:
    """
    Cramer-Rao precision curve **delta_theta(t)** from runs at theta +- fd step.
    """
    settings: RobmetroSettings = ctx.meta["settings"]
    step = fd_step if fd_step is not None else settings.fd_step
    options = {"fd_step": step}
    with exit_codes():
        config, code_ref = _resolve(
            settings, run_file, code=code, channel=channel, phi=phi, theta=theta, p=p,
            t_max=t_max, dt=dt, sample_every=sample_every,
        )  # fmt: skip
        runner = _runner(settings)
        if out is None:
            typer.echo(precision_csv(crb(config, step, runner)), nl=False)
            return
        run_command("crb", config, out, options, None, runner)
        write_manifest("crb", config, code_ref, out, options)
    console.print(f"Wrote precision curve to [cyan]{out}[/cyan]")


@app.command("sweep")
def sweep_command(
    ctx: typer.Context,
    thetas: str = typer.Option(..., "--thetas", help="Comma-separated theta values."),
    out: Path = typer.Option(..., "--out", "-o", help="CSV output with columns theta,t,p_plus."),
    code: str | None = typer.Option(None, "--code", help=CODE_HELP),
    channel: Channel | None = typer.Option(None, "--channel", help="Noise channel."),
    phi: float | None = typer.Option(None, "--phi", help="Noise-axis angle for mixed/mixture channels."),
    p: float | None = typer.Option(None, "--p", help="Noise slope p."),
    t_max: float | None = typer.Option(None, "--t-max", help="Final time."),
    dt: float | None = typer.Option(None, "--dt", help="RK4 step."),
    sample_every: int | None = typer.Option(None, "--sample-every", help="Record every n-th step."),
    run_file: Path | None = typer.Option(None, "--run-file", "-f", help="JSON run configuration.", exists=True),
) -> None:
    """
    One trajectory per theta, fanned out over the worker pool.
    """
    settings: RobmetroSettings = ctx.meta["settings"]
    try:
        values = [float(v) for v in thetas.split(",") if v.strip()]
    except ValueError as e:
        console.print(f"[bold red]Error:[/bold red] --thetas must be comma-separated numbers: {e}")
        raise typer.Exit(code=EXIT_USAGE) from e
    if not values:
        console.print("[bold red]Error:[/bold red] --thetas is empty")
        raise typer.Exit(code=EXIT_USAGE)
    options = {"thetas": values}
    with exit_codes():
        config, code_ref = _resolve(
            settings, run_file, code=code, channel=channel, phi=phi, theta=values[0], p=p,
            t_max=t_max, dt=dt, sample_every=sample_every,
        )  # fmt: skip
        run_command("sweep", config, out, options, None, _runner(settings))
        write_manifest("sweep", config, code_ref, out, options)
    console.print(f"Wrote sweep over {len(values)} theta values to [cyan]{out}[/cyan]")


@app.command()
def estimate(
    trajectory_file: Path = typer.Argument(..., help="Trajectory CSV with columns t,p_plus."),
    q_pure_value: float | None = typer.Option(None, "--q-pure", help="Pure-probe QFI of the probe code."),
    code: str | None = typer.Option(None, "--code", help="Derive --q-pure from this code instead."),
    free_amplitude: bool = typer.Option(False, "--free-amplitude", help="Also fit amplitude and offset."),
    out: Path | None = typer.Option(None, "--out", "-o", help="Also write the JSON result here."),
) -> None:
    """
    Estimate **theta** from a trajectory by Fourier peak plus damped-cosine fit.
    """
    with exit_codes():
        if q_pure_value is None:
            if code is None:
                console.print("[bold red]Error:[/bold red] give --q-pure or --code")
                raise typer.Exit(code=EXIT_USAGE)
            q_pure_value = q_pure(resolve_code(code))
        result = estimate_theta(read_trajectory_csv(trajectory_file), q_pure_value, free_amplitude=free_amplitude)
        if out is not None:
            write_json(out, result.to_dict())
    typer.echo(json.dumps(result.to_dict(), indent=2))


@app.command()
def oracle(
    ctx: typer.Context,
    p: float | None = typer.Option(None, "--p", help="Noise slope p."),
    theta: float | None = typer.Option(None, "--theta", help="Signal theta."),
    max_n: int = typer.Option(ORACLE_MAX_QUBITS, "--max-n", help="Largest fixture length to check."),
    out: Path | None = typer.Option(None, "--out", "-o", help="Also write the JSON array here."),
) -> None:
    """
    Run the brute-force checks and print the reports as a JSON array.

    Exits with code 3 if any applicable claim fails.
    """
    settings: RobmetroSettings = ctx.meta["settings"]
    with exit_codes():
        codes = [*fixture_codes(max_n=min(max_n, ORACLE_MAX_QUBITS)), trivial_code(3)]
        reports = run_oracle_suite(
            codes,
            p if p is not None else settings.p,
            theta if theta is not None else settings.theta,
        )
        payload = [r.to_dict() for r in reports]
        if out is not None:
            write_json(out, payload)
    typer.echo(json.dumps(payload, indent=2))
    failed = [r for r in reports if r.applicable and not r.passed]
    if failed:
        for report in failed:
            console.print(f"[bold red]FAILED[/bold red] {report.claim_id} {report.details}")
        raise typer.Exit(code=EXIT_INVARIANT)


@app.command("replay")
def replay_command(
    ctx: typer.Context,
    manifest: Path = typer.Argument(..., help="Manifest written next to an earlier output.", exists=True),
    out: Path | None = typer.Option(None, "--out", "-o", help="Write here instead of the recorded output."),
) -> None:
    """
    Re-run **simulate**, **crb** or **sweep** from a run manifest.
    """
    settings: RobmetroSettings = ctx.meta["settings"]
    with exit_codes():
        written = replay(manifest, out, settings, _runner(settings))
    console.print(f"Replayed into [cyan]{written}[/cyan]")


@app.command("cache")
def cache_management(
    ctx: typer.Context,
    action: str = typer.Argument(..., help="Cache action: 'clear' or 'stats'."),
) -> None:
    """
    Manage the trajectory cache.
    """
    settings: RobmetroSettings = ctx.meta["settings"]
    evolver = CachedEvolver(settings.cache_dir)
    try:
        if action.lower() == "clear":
            removed = evolver.clear_cache()
            console.print(f"[green]Cleared {removed} cached trajectories.[/green]")
        elif action.lower() == "stats":
            stats = evolver.get_cache_stats()
            console.print(f"\n[bold]Trajectory Cache Stats ({stats['cache_path']}):[/bold]")
            console.print(f"  Items: {stats['item_count']}")
            console.print(f"  Size: {stats['disk_usage_bytes']} bytes")
        else:
            console.print(f"[bold red]Error:[/bold red] Unknown cache action '{action}'. Choose 'clear' or 'stats'.")
            raise typer.Exit(code=EXIT_USAGE)
    finally:
        evolver.close()


cli = app

if __name__ == "__main__":
    app()

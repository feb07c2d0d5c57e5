# this_file: tests/test_cli.py

"""
Tests for the command-line interface and the pipeline behind it.
"""

import csv
import io
import json
import sys
import time

import numpy as np
import pytest
from loguru import logger
from typer.testing import CliRunner

from robmetro.cli import app
from robmetro.codes.builtin import steane_code
from robmetro.io import write_trajectory_csv
from robmetro.metrology.damping import analytic_trajectory
from robmetro.pipeline import analyze_code, sweep_theta
from robmetro.types import ChannelKind, ChannelSpec, GammaParams, SimulationConfig

runner = CliRunner()

SMALL_RUN = ["--code", "ghz3", "--t-max", "2", "--dt", "0.5", "--sample-every", "1"]


@pytest.fixture(autouse=True)
def isolated(monkeypatch, tmp_path):
    """Run every command in an empty directory with its own cache, and restore logging afterwards."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("ROBMETRO_CACHE_DIR", str(tmp_path / "cache"))
    yield
    logger.remove()
    logger.add(sys.stderr)


def invoke(*args: str):
    return runner.invoke(app, ["--log-level", "ERROR", *args])


def rows(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


class TestPipeline:
    """Pipeline functions called directly."""

    def test_analyze_steane(self):
        report = analyze_code(steane_code(), 0.05, 1e-3, phi=1.0)
        assert report["code"]["W_dual"] == [1, 0, 0, 7, 7, 0, 0, 1]
        assert report["code"]["q_pure"] == 28.0
        assert not report["code"]["degenerate"]
        assert report["gamma"] == pytest.approx(2 * report["bound_slack"])
        assert "gamma_mixed" in report

    def test_sweep_keeps_theta_order(self, ghz3):
        config = SimulationConfig(ghz3, ChannelSpec(ChannelKind.DEPHASING, 0.05, 1e-3), t_max=2.0, dt=0.5)
        results = sweep_theta(config, [3e-3, 1e-3])
        assert [theta for theta, _ in results] == [3e-3, 1e-3]


class TestAnalyze:
    def test_json(self):
        result = invoke("analyze", "steane", "--json")
        assert result.exit_code == 0, result.output
        report = json.loads(result.stdout)
        assert report["code"]["n"] == 7
        assert report["code"]["W2"] == 0

    def test_table_and_out(self, tmp_path):
        result = invoke("analyze", "ghz3", "--out", str(tmp_path / "a.json"))
        assert result.exit_code == 0, result.output
        assert "Q_pure" in result.stdout
        assert json.loads((tmp_path / "a.json").read_text())["code"]["q_pure"] == 36.0

    def test_unknown_code(self):
        result = invoke("analyze", "golay23")
        assert result.exit_code == 2


class TestSimulate:
    def test_stdout_csv(self):
        result = invoke("simulate", *SMALL_RUN, "--analytic")
        assert result.exit_code == 0, result.output
        table = rows(result.stdout)
        assert [float(r["t"]) for r in table] == [0.0, 0.5, 1.0, 1.5, 2.0]
        assert float(table[0]["p_plus"]) == pytest.approx(1.0)
        assert float(table[0]["p_analytic"]) == pytest.approx(1.0)

    def test_mixed_requires_phi(self):
        result = invoke("simulate", *SMALL_RUN, "--channel", "mixed")
        assert result.exit_code == 2

    def test_step_too_large(self):
        result = invoke("simulate", "--code", "ghz3", "--t-max", "100", "--dt", "50", "--sample-every", "1")
        assert result.exit_code == 3

    def test_manifest_replay_is_byte_identical(self, tmp_path):
        first = tmp_path / "first.csv"
        result = invoke("simulate", *SMALL_RUN, "--copies", "50", "--seed", "3", "--out", str(first))
        assert result.exit_code == 0, result.output
        manifest = tmp_path / "first.csv.manifest.json"
        assert json.loads(manifest.read_text())["seed"] == 3
        second = tmp_path / "second.csv"
        result = invoke("replay", str(manifest), "--out", str(second))
        assert result.exit_code == 0, result.output
        assert second.read_bytes() == first.read_bytes()

    def test_replay_from_another_directory(self, tmp_path, monkeypatch):
        """A code file given by relative path is recorded absolute, so replay works after cd."""
        (tmp_path / "codes").mkdir()
        (tmp_path / "codes" / "ghz3.txt").write_text("n=3\n111\n")
        first = tmp_path / "first.csv"
        run = ["--code", "codes/ghz3.txt", "--t-max", "2", "--dt", "0.5", "--sample-every", "1"]
        result = invoke("simulate", *run, "--out", "first.csv")
        assert result.exit_code == 0, result.output
        recorded = json.loads((tmp_path / "first.csv.manifest.json").read_text())
        assert recorded["config"]["code"] == str((tmp_path / "codes" / "ghz3.txt").resolve())
        assert recorded["outputs"] == [str(first.resolve())]
        elsewhere = tmp_path / "elsewhere"
        elsewhere.mkdir()
        monkeypatch.chdir(elsewhere)
        result = invoke("replay", str(tmp_path / "first.csv.manifest.json"), "--out", "second.csv")
        assert result.exit_code == 0, result.output
        assert (elsewhere / "second.csv").read_bytes() == first.read_bytes()

    def test_run_file(self, tmp_path):
        run_file = tmp_path / "run.json"
        run_file.write_text(json.dumps({"code": "ghz5", "t_max": 1.0, "dt": 0.5, "sample_every": 1}))
        result = invoke("simulate", "--run-file", str(run_file))
        assert result.exit_code == 0, result.output
        assert len(rows(result.stdout)) == 3


class TestOtherCommands:
    def test_crb(self):
        result = invoke("crb", *SMALL_RUN)
        assert result.exit_code == 0, result.output
        table = rows(result.stdout)
        assert len(table) == 5
        assert table[0]["reliable"] == "false"

    @pytest.mark.slow
    @pytest.mark.integration
    def test_default_bitflip_crb_finishes_in_time(self, monkeypatch):
        """crb with every grid default on GHZ7 under bit flips stays under two minutes."""
        for key in ("ROBMETRO_DT", "ROBMETRO_T_MAX", "ROBMETRO_SAMPLE_EVERY", "ROBMETRO_NUM_WORKERS"):
            monkeypatch.delenv(key, raising=False)
        start = time.perf_counter()
        result = invoke("crb", "--code", "ghz7", "--channel", "bitflip")
        elapsed = time.perf_counter() - start
        assert result.exit_code == 0, result.output
        assert len(rows(result.stdout)) == 1001
        assert elapsed < 120

    def test_sweep(self, tmp_path):
        out = tmp_path / "sweep.csv"
        result = invoke("sweep", "--thetas", "1e-3,2e-3", "--out", str(out), *SMALL_RUN)
        assert result.exit_code == 0, result.output
        table = rows(out.read_text())
        assert len(table) == 10
        assert {float(r["theta"]) for r in table} == {1e-3, 2e-3}
        assert (tmp_path / "sweep.csv.manifest.json").exists()

    def test_sweep_bad_thetas(self, tmp_path):
        result = invoke("sweep", "--thetas", "a,b", "--out", str(tmp_path / "s.csv"))
        assert result.exit_code == 2

    def test_estimate(self, tmp_path):
        times = np.linspace(0.0, 4 * np.pi / (14 * 1e-3), 201)
        path = write_trajectory_csv(
            tmp_path / "traj.csv", analytic_trajectory(times, 1e-3, GammaParams(gamma=5e-4, q_pure=196.0))
        )
        result = invoke("estimate", str(path), "--code", "ghz7")
        assert result.exit_code == 0, result.output
        assert json.loads(result.stdout)["theta_hat"] == pytest.approx(1e-3, rel=1e-3)

    def test_estimate_flat_signal(self, tmp_path):
        path = tmp_path / "flat.csv"
        path.write_text("t,p_plus\n" + "".join(f"{t},0.5\n" for t in range(30)))
        result = invoke("estimate", str(path), "--q-pure", "196")
        assert result.exit_code == 4

    def test_estimate_needs_q_pure(self, tmp_path):
        path = tmp_path / "flat.csv"
        path.write_text("t,p_plus\n0,1\n")
        assert invoke("estimate", str(path)).exit_code == 2

    def test_oracle(self):
        result = invoke("oracle", "--max-n", "3")
        assert result.exit_code == 0, result.output
        reports = json.loads(result.stdout)
        assert {r["claim_id"] for r in reports} >= {"toy_variance", "first_order_vanishing", "bitflip_undamped"}
        assert not any(r["applicable"] and not r["passed"] for r in reports)

    def test_cache_stats_and_clear(self, tmp_path):
        result = invoke("--use-cache", "simulate", *SMALL_RUN)
        assert result.exit_code == 0, result.output
        result = invoke("cache", "stats")
        assert result.exit_code == 0
        assert "Items: 1" in result.stdout
        result = invoke("cache", "clear")
        assert "Cleared 1" in result.stdout

    def test_cache_unknown_action(self):
        assert invoke("cache", "purge").exit_code == 2

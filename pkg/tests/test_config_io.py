# this_file: tests/test_config_io.py

"""
Tests for settings, simulation files, run manifests and CSV/JSON output.
"""

import json

import numpy as np
import pytest

from robmetro.config import (
    ChannelModel,
    RobmetroSettings,
    RunManifest,
    SimulationFile,
    build_config,
    manifest_path_for,
)
from robmetro.errors import DataFileError, DomainError
from robmetro.io import (
    format_float,
    precision_csv,
    read_trajectory_csv,
    trajectory_csv,
    write_json,
    write_trajectory_csv,
)
from robmetro.types import ChannelKind, PrecisionCurve, Trajectory, TrajectorySource


@pytest.fixture
def settings(monkeypatch, tmp_path):
    """Settings isolated from the caller's environment and .env file."""
    monkeypatch.chdir(tmp_path)
    for key in ("ROBMETRO_THETA", "ROBMETRO_P", "ROBMETRO_DT", "ROBMETRO_T_MAX", "ROBMETRO_SAMPLE_EVERY"):
        monkeypatch.delenv(key, raising=False)
    return RobmetroSettings(theta=2e-3, t_max=50.0, dt=0.5, sample_every=2)


class TestBuildConfig:
    """Flags over file over settings."""

    def test_settings_only(self, settings):
        config, code_ref = build_config(settings)
        assert code_ref == "ghz7"
        assert config.code.n == 7
        assert config.channel.kind is ChannelKind.DEPHASING
        assert config.channel.theta == 2e-3
        assert (config.t_max, config.dt, config.sample_every) == (50.0, 0.5, 2)

    def test_precedence(self, settings):
        file = SimulationFile(code="steane", channel=ChannelModel(kind=ChannelKind.BITFLIP, theta=3e-3), dt=0.25)
        config, code_ref = build_config(settings, file)
        assert code_ref == "steane"
        assert config.channel.kind is ChannelKind.BITFLIP
        assert config.channel.theta == 3e-3
        assert config.dt == 0.25
        config, _ = build_config(settings, file, theta=4e-3, dt=None, code="ghz3")
        assert config.channel.theta == 4e-3
        assert config.dt == 0.25
        assert config.code.n == 3

    def test_file_phi_dropped_when_flag_switches_channel(self, settings):
        file = SimulationFile(channel=ChannelModel(kind=ChannelKind.MIXED, phi=0.5))
        config, _ = build_config(settings, file, channel="dephasing")
        assert config.channel.phi is None
        config, _ = build_config(settings, file)
        assert config.channel.phi == 0.5

    def test_mixed_needs_phi(self, settings):
        with pytest.raises(DomainError, match="requires phi"):
            build_config(settings, channel=ChannelKind.MIXED)

    def test_env_override(self, monkeypatch, tmp_path):
        monkeypatch.chdir(tmp_path)
        monkeypatch.setenv("ROBMETRO_P", "0.1")
        assert RobmetroSettings().p == 0.1


class TestSimulationFile:
    """JSON simulation files."""

    def test_load(self, tmp_path):
        path = tmp_path / "sim.json"
        path.write_text(json.dumps({"code": "ghz5", "channel": {"kind": "mixed", "phi": 1.0}, "t_max": 10}))
        file = SimulationFile.load(path)
        assert file.code == "ghz5"
        assert file.channel is not None
        assert file.channel.kind is ChannelKind.MIXED

    @pytest.mark.parametrize("text", ["{not json", '{"code": "ghz3", "colour": "red"}', '{"channel": {"kind": "x"}}'])
    def test_invalid(self, tmp_path, text):
        path = tmp_path / "sim.json"
        path.write_text(text)
        with pytest.raises(DataFileError, match="invalid simulation file"):
            SimulationFile.load(path)

    def test_missing(self, tmp_path):
        with pytest.raises(DataFileError, match="cannot read"):
            SimulationFile.load(tmp_path / "absent.json")

    def test_from_config_round_trip(self, settings):
        config, _ = build_config(settings, channel="mixed", phi=0.25, code="steane")
        file = SimulationFile.from_config(config, "steane")
        rebuilt, _ = build_config(settings, file)
        assert rebuilt == config


class TestManifest:
    """Run manifests."""

    def test_round_trip(self, tmp_path):
        manifest = RunManifest(
            command="simulate",
            config=SimulationFile(code="ghz3", t_max=10.0),
            options={"analytic": True},
            seed=7,
            outputs=["out.csv"],
        )
        path = tmp_path / "out.csv.manifest.json"
        path.write_text(manifest.to_json())
        assert RunManifest.load(path) == manifest

    def test_invalid(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"command": "simulate"}')
        with pytest.raises(DataFileError, match="invalid manifest"):
            RunManifest.load(path)

    def test_path(self, tmp_path):
        assert manifest_path_for(tmp_path / "run.csv") == tmp_path / "run.csv.manifest.json"


class TestCsv:
    """CSV output and input."""

    def test_trajectory_round_trip_is_exact(self, tmp_path):
        times = np.linspace(0.0, 1.0, 7)
        probabilities = 0.5 + 0.5 * np.cos(times / 3)
        trajectory = Trajectory(times, probabilities, TrajectorySource.INTEGRATED)
        path = write_trajectory_csv(tmp_path / "out" / "traj.csv", trajectory)
        loaded = read_trajectory_csv(path)
        assert np.array_equal(loaded.times, times)
        assert np.array_equal(loaded.probabilities, probabilities)
        assert loaded.source is TrajectorySource.INTEGRATED
        assert [p.name for p in path.parent.iterdir()] == ["traj.csv"]

    def test_source_column(self, tmp_path):
        trajectory = Trajectory(np.array([0.0, 1.0]), np.array([1.0, 0.25]), TrajectorySource.SAMPLED)
        assert trajectory_csv(trajectory).splitlines() == ["t,p_plus,source", "0,1,sampled", "1,0.25,sampled"]
        path = write_trajectory_csv(tmp_path / "s.csv", trajectory)
        assert read_trajectory_csv(path).source is TrajectorySource.SAMPLED

    def test_analytic_column(self):
        trajectory = Trajectory(np.array([0.0, 1.0]), np.array([1.0, 0.5]), TrajectorySource.INTEGRATED)
        text = trajectory_csv(trajectory, trajectory)
        assert text.splitlines()[0] == "t,p_plus,source,p_analytic"
        assert text.splitlines()[1] == "0,1,integrated,1"
        short = Trajectory(np.array([0.0]), np.array([1.0]), TrajectorySource.ANALYTIC)
        with pytest.raises(ValueError, match="length"):
            trajectory_csv(trajectory, short)

    def test_precision_columns(self):
        curve = PrecisionCurve(np.array([0.0, 2.0]), np.array([np.inf, 0.125]), np.array([False, True]), "x")
        assert precision_csv(curve).splitlines() == ["t,delta_theta,reliable", "0,inf,false", "2,0.125,true"]

    @pytest.mark.parametrize(
        ("text", "match"),
        [
            ("time,p\n0,1\n", "expected columns"),
            ("t,p_plus\n0,abc\n", "malformed"),
            ("t,p_plus\n0,1.5\n", ""),
            ("t,p_plus,source\n0,1,guessed\n", "malformed"),
            ("t,p_plus,source\n0,1,integrated\n1,1,analytic\n", "mixed sources"),
        ],
    )
    def test_read_errors(self, tmp_path, text, match):
        path = tmp_path / "bad.csv"
        path.write_text(text)
        with pytest.raises(DataFileError, match=match):
            read_trajectory_csv(path)

    def test_write_json(self, tmp_path):
        path = write_json(tmp_path / "r.json", {"b": 1, "a": [1.5]})
        assert json.loads(path.read_text()) == {"b": 1, "a": [1.5]}

    def test_format_float(self):
        assert format_float(0.1) == "0.10000000000000001"
        assert float(format_float(1 / 3)) == 1 / 3

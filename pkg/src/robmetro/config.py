# this_file: src/robmetro/config.py

"""
Configuration for robmetro.

RobmetroSettings is read from ``ROBMETRO_*`` environment variables and an
optional ``.robmetro.env`` file. Simulation files are JSON documents that
mirror SimulationConfig; run manifests record how an output was produced so
it can be replayed.
"""

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from robmetro import __version__
from robmetro.codes.code_file import resolve_code
from robmetro.errors import DataFileError
from robmetro.types import ChannelKind, ChannelSpec, SimulationConfig


class RobmetroSettings(BaseSettings):
    """
    Defaults for every command, loaded from environment variables or a .env file.

    Signal and noise defaults are theta = 1e-3 and p = 0.05. The default grid
    integrates to t = 1000 in steps of 0.1 and records every unit of time.
    """

    theta: float = 1e-3
    p: float = 0.05
    dt: float = 0.1
    t_max: float = 1000.0
    sample_every: int = 10
    fd_step: float | None = None  # theta/100 when unset

    num_workers: int = 1
    use_cache: bool = False
    cache_dir: Path = Path.home() / ".cache" / "robmetro"

    verbose: bool = False
    log_level: str = "INFO"

    model_config = SettingsConfigDict(
        env_prefix="ROBMETRO_",
        env_file=".robmetro.env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


class ChannelModel(BaseModel):
    """JSON form of a ChannelSpec."""

    model_config = ConfigDict(extra="forbid")

    kind: ChannelKind
    p: float | None = None
    theta: float | None = None
    phi: float | None = None
    w: int | None = None


class SimulationFile(BaseModel):
    """
    JSON simulation file. Every field is optional so that it can sit between
    command-line flags and settings in the precedence order.
    """

    model_config = ConfigDict(extra="forbid")

    code: str | None = None
    channel: ChannelModel | None = None
    t_max: float | None = None
    dt: float | None = None
    sample_every: int | None = None

    @classmethod
    def load(cls, path: Path) -> "SimulationFile":
        """
        Raises:
            DataFileError: Unreadable file, invalid JSON or unknown fields
        """
        try:
            return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))
        except OSError as e:
            msg = f"{path}: cannot read simulation file: {e}"
            raise DataFileError(msg) from e
        except ValidationError as e:
            msg = f"{path}: invalid simulation file: {e}"
            raise DataFileError(msg) from e

    @classmethod
    def from_config(cls, config: SimulationConfig, code_ref: str | None = None) -> "SimulationFile":
        spec = config.channel
        return cls(
            code=code_ref or config.code.name,
            channel=ChannelModel(kind=spec.kind, p=spec.p, theta=spec.theta, phi=spec.phi, w=spec.w),
            t_max=config.t_max,
            dt=config.dt,
            sample_every=config.sample_every,
        )


def build_config(
    settings: RobmetroSettings,
    file: SimulationFile | None = None,
    **overrides: Any,
) -> tuple[SimulationConfig, str]:
    """
    Merge flags over the simulation file over settings.

    Keyword overrides use the flag names (code, channel, phi, theta, p,
    t_max, dt, sample_every); ``None`` means "not given".

    Returns:
        The validated SimulationConfig and the code reference it was built from
    """
    file = file or SimulationFile()
    channel_file = file.channel or ChannelModel(kind=ChannelKind.DEPHASING)

    def pick(name: str, from_file: Any, default: Any) -> Any:
        value = overrides.get(name)
        if value is not None:
            return value
        return from_file if from_file is not None else default

    code_ref = pick("code", file.code, "ghz7")
    kind = pick("channel", file.channel.kind if file.channel else None, ChannelKind.DEPHASING)
    kind = ChannelKind(kind)
    # A file phi belongs to the file's channel; drop it when a flag switches to a channel without phi.
    file_phi = channel_file.phi if kind.needs_phi else None
    spec = ChannelSpec(
        kind,
        p=pick("p", channel_file.p, settings.p),
        theta=pick("theta", channel_file.theta, settings.theta),
        phi=pick("phi", file_phi, None),
    )
    config = SimulationConfig(
        code=resolve_code(code_ref),
        channel=spec,
        t_max=pick("t_max", file.t_max, settings.t_max),
        dt=pick("dt", file.dt, settings.dt),
        sample_every=pick("sample_every", file.sample_every, settings.sample_every),
    )
    logger.debug(f"Resolved configuration: {config.to_dict()}")
    return config, str(code_ref)


class RunManifest(BaseModel):
    """
    Record of one command run, written next to its outputs.

    Replaying a manifest reruns the command with the same configuration and
    options; outputs are byte-identical when sampling is off or seeded.
    """

    command: str
    config: SimulationFile
    options: dict[str, Any] = Field(default_factory=dict)
    seed: int | None = None
    outputs: list[str] = Field(default_factory=list)
    tool_version: str = __version__
    created_at: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    @classmethod
    def load(cls, path: Path) -> "RunManifest":
        """
        Raises:
            DataFileError: Unreadable or invalid manifest
        """
        try:
            return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))
        except OSError as e:
            msg = f"{path}: cannot read manifest: {e}"
            raise DataFileError(msg) from e
        except ValidationError as e:
            msg = f"{path}: invalid manifest: {e}"
            raise DataFileError(msg) from e

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2) + "\n"


def manifest_path_for(output: Path) -> Path:
    """Manifest location for an output file: ``<output>.manifest.json``."""
    return output.with_name(output.name + ".manifest.json")

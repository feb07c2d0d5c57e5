# this_file: src/robmetro/cache.py

"""
Disk cache for integrated trajectories.

A CachedEvolver wraps :func:`robmetro.channels.integrator.evolve`. Runs are
keyed by the canonical JSON of their configuration, the codeword indices of
the probe code and the package version, so a changed code or a new release
never reuses stale results.
"""

import hashlib
import json
from pathlib import Path
from typing import Any

import diskcache  # type: ignore[import-untyped]
import numpy as np
from loguru import logger

from robmetro import __version__
from robmetro.channels.integrator import evolve
from robmetro.types import SimulationConfig, Trajectory

DEFAULT_CACHE_DIR = Path.home() / ".cache" / "robmetro"


def config_key(config: SimulationConfig) -> str:
    """SHA-256 cache key of one integration run."""
    payload = json.dumps(
        {
            "config": config.to_dict(),
            "check_positivity": config.check_positivity,
            "codewords": [int(i) for i in np.asarray(config.code.indices)],
            "version": __version__,
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class CachedEvolver:
    """
    Callable that returns cached trajectories when available and integrates otherwise.

    Picklable: a worker process reopens the same cache directory.
    """

    def __init__(self, cache_dir: Path | None = None, cache_name: str = "trajectories"):
        """
        Args:
            cache_dir: Root directory, ~/.cache/robmetro by default
            cache_name: Sub-directory for this cache
        """
        self.cache_path = (cache_dir or DEFAULT_CACHE_DIR) / cache_name
        self.cache = diskcache.Cache(str(self.cache_path))
        logger.debug(f"Trajectory cache at {self.cache_path}")

    def __call__(self, config: SimulationConfig) -> Trajectory:
        key = config_key(config)
        cached = self.cache.get(key)
        if cached is not None:
            logger.debug(f"Cache hit for {config.code.name}/{config.channel.label} (key: {key[:12]})")
            return cached  # type: ignore[no-any-return]  # diskcache.get() is typed Any
        logger.debug(f"Cache miss for {config.code.name}/{config.channel.label} (key: {key[:12]})")
        trajectory = evolve(config)
        self.cache.set(key, trajectory)
        return trajectory

    def clear_cache(self) -> int:
        """Remove every entry; returns how many were removed."""
        count = len(self.cache)
        self.cache.clear()
        logger.info(f"Cache cleared. {count} items removed from {self.cache_path}.")
        return count

    def get_cache_stats(self) -> dict[str, Any]:
        return {
            "cache_path": str(self.cache_path),
            "item_count": len(self.cache),
            "disk_usage_bytes": self.cache.volume(),
        }

    def close(self) -> None:
        self.cache.close()

    def __getstate__(self) -> dict[str, Any]:
        return {"cache_path": self.cache_path}

    def __setstate__(self, state: dict[str, Any]) -> None:
        self.cache_path = state["cache_path"]
        self.cache = diskcache.Cache(str(self.cache_path))

# this_file: src/robmetro/channels/sampling.py

"""Finite-copy measurement noise on top of an exact trajectory."""

import numpy as np

from robmetro.errors import DomainError
from robmetro.types import Trajectory, TrajectorySource


def sample_copies(trajectory: Trajectory, copies: int, seed: int | None = None) -> Trajectory:
    """
    Replace each probability by the observed frequency over ``copies`` independent probes.

    Each sample is Binomial(copies, p) / copies. The same seed always gives
    the same trajectory.
    """
    if copies < 1:
        msg = f"copies must be >= 1, got {copies}"
        raise DomainError(msg)
    rng = np.random.default_rng(seed)
    counts = rng.binomial(copies, trajectory.probabilities)
    return Trajectory(trajectory.times, counts / copies, TrajectorySource.SAMPLED)

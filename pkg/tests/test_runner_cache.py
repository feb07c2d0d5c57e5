# this_file: tests/test_runner_cache.py

"""
Tests for the process-pool runner and the trajectory cache.
"""

import pickle

import numpy as np
import pytest

from robmetro.cache import CachedEvolver, config_key
from robmetro.runner import ParallelRunner
from robmetro.types import ChannelKind, ChannelSpec, SimulationConfig

P, THETA = 0.05, 1e-3


@pytest.fixture
def configs(ghz3):
    spec = ChannelSpec(ChannelKind.DEPHASING, P, THETA)
    thetas = (1e-3, 2e-3, 3e-3)
    return [SimulationConfig(ghz3, spec.with_theta(t), t_max=20.0, dt=0.5, sample_every=4) for t in thetas]


@pytest.fixture
def evolver(tmp_path):
    cached = CachedEvolver(cache_dir=tmp_path)
    yield cached
    cached.close()


class TestParallelRunner:
    """Sequential and parallel runs give the same trajectories."""

    def test_empty(self):
        assert ParallelRunner().run([]) == []

    def test_parallel_matches_sequential(self, configs):
        sequential = ParallelRunner(num_workers=1).run(configs)
        parallel = ParallelRunner(num_workers=2).run(configs)
        assert len(parallel) == 3
        for a, b in zip(sequential, parallel, strict=True):
            np.testing.assert_array_equal(a.times, b.times)
            np.testing.assert_array_equal(a.probabilities, b.probabilities)

    def test_order_follows_input(self, configs):
        results = ParallelRunner(num_workers=2).run(configs)
        final = [float(r.probabilities[-1]) for r in results]
        assert final[0] > final[1] > final[2]

    def test_worker_count_corrected(self):
        assert ParallelRunner(num_workers=0).num_workers == 1
        assert ParallelRunner(num_workers=None).num_workers >= 1


class TestCache:
    """CachedEvolver behaviour."""

    def test_hit_returns_same_trajectory(self, configs, evolver):
        first = evolver(configs[0])
        assert evolver.get_cache_stats()["item_count"] == 1
        second = evolver(configs[0])
        np.testing.assert_array_equal(first.probabilities, second.probabilities)
        assert evolver.get_cache_stats()["item_count"] == 1

    def test_clear(self, configs, evolver):
        for config in configs:
            evolver(config)
        assert evolver.clear_cache() == 3
        assert evolver.get_cache_stats()["item_count"] == 0

    def test_pickle_reopens_cache(self, configs, evolver):
        evolver(configs[0])
        clone = pickle.loads(pickle.dumps(evolver))
        try:
            assert clone.cache_path == evolver.cache_path
            assert clone.get_cache_stats()["item_count"] == 1
        finally:
            clone.close()

    def test_runner_with_cache(self, configs, evolver):
        runner = ParallelRunner(num_workers=2, evolver=evolver)
        runner.run(configs)
        assert evolver.get_cache_stats()["item_count"] == 3


class TestConfigKey:
    """Cache keys."""

    def test_stable_and_distinct(self, configs):
        assert config_key(configs[0]) == config_key(configs[0])
        assert len({config_key(c) for c in configs}) == 3

    def test_depends_on_code(self, configs, steane):
        other = SimulationConfig(steane, configs[0].channel, t_max=20.0, dt=0.5, sample_every=4)
        assert config_key(other) != config_key(configs[0])

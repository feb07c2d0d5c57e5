# this_file: src/robmetro/runner.py

"""
Process-pool fan-out for independent integrations.

ParallelRunner hands each SimulationConfig to a worker process and returns
the trajectories in input order. Runs are deterministic, so the order in
which workers finish never changes the result.
"""

import concurrent.futures
import multiprocessing
from collections.abc import Callable, Sequence

from loguru import logger

from robmetro.channels.integrator import evolve
from robmetro.types import SimulationConfig, Trajectory

Evolver = Callable[[SimulationConfig], Trajectory]


# Top-level so that ProcessPoolExecutor can pickle it.
def _evolve_worker(evolver: Evolver, config: SimulationConfig) -> Trajectory:
    logger.debug(
        f"Worker (PID {multiprocessing.current_process().pid}): "
        f"{config.code.name} under {config.channel.label}, theta={config.channel.theta:.6g}"
    )
    return evolver(config)


class ParallelRunner:
    """
    Run a batch of integrations, in parallel when more than one worker is configured.

    The evolver must be picklable; plain :func:`evolve` and
    :class:`robmetro.cache.CachedEvolver` both are. Worker exceptions are
    re-raised in the caller so invariant violations are never swallowed.
    """

    def __init__(self, num_workers: int | None = 1, evolver: Evolver = evolve):
        self.evolver = evolver
        self.num_workers = num_workers if num_workers is not None else multiprocessing.cpu_count()
        if self.num_workers < 1:
            logger.warning(f"num_workers corrected from {self.num_workers} to 1.")
            self.num_workers = 1
        logger.debug(f"ParallelRunner initialized with {self.num_workers} worker(s).")

    def run(self, configs: Sequence[SimulationConfig]) -> list[Trajectory]:
        """
        Integrate every config.

        Args:
            configs: Independent runs

        Returns:
            One trajectory per config, in the same order
        """
        if not configs:
            return []
        if self.num_workers <= 1 or len(configs) == 1:
            logger.debug(f"Running {len(configs)} integration(s) sequentially")
            return [self.evolver(config) for config in configs]

        workers = min(self.num_workers, len(configs))
        logger.info(f"Running {len(configs)} integrations on {workers} workers")
        results: list[Trajectory | None] = [None] * len(configs)
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(_evolve_worker, self.evolver, config): i for i, config in enumerate(configs)}
            for future in concurrent.futures.as_completed(futures):
                results[futures[future]] = future.result()
        return [r for r in results if r is not None]

    def close(self) -> None:
        """Close the wrapped evolver if it holds resources."""
        close = getattr(self.evolver, "close", None)
        if callable(close):
            close()

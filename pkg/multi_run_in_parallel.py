"""
This module contains class MultiRunInParallel only.
"""

from multiprocessing import Pool
from typing import Dict, List, Optional, Sequence, Tuple

from single_run import SingleRun, SingleRunResult
from engine import Engine
from performance import Performance
from scenario import Scenario
from data_types import RunMetrics


class MultiRunInParallel:
    """
    This class runs one scheme over a list of seeds, using a multiprocessing manner.
    Every run is independent (its own world, agent and random streams), so runs are spread over
    a process pool; results come back ordered as the seeds were given.
    """

    def __init__(
        self,
        scenario: Scenario,
        engine: Engine,
        performance: Performance,
        scheme: str,
        seeds: Sequence[int],
        epochs: Optional[int] = None,
        processes: Optional[int] = None,
    ) -> None:

        self.scenario: Scenario = scenario  # assumption
        self.engine: Engine = engine  # design choice
        self.performance: Performance = performance  # performance evaluation method
        self.scheme: str = scheme
        self.seeds: List[int] = list(seeds)
        self.epochs: Optional[int] = epochs
        # None uses every CPU; 1 runs in this process
        self.processes: Optional[int] = processes

    @staticmethod
    def single_run_helper(
        args: Tuple[Scenario, Engine, Performance, str, int, Optional[int]]
    ) -> SingleRunResult:
        """
        This is a helper method called by method multi_run_execution(), to realize
        multi-processing. It actually runs the single_run_execution() function in SingleRun.
        :param args: arguments of SingleRun.
        :return: SingleRun.single_run_execution()
        """
        return SingleRun(*args).single_run_execution()

    @staticmethod
    def reorganize_run_metrics(results: List[SingleRunResult]) -> Dict[int, RunMetrics]:
        """
        This method maps every seed to the metrics of its run.
        """
        return {item.metrics.seed: item.metrics for item in results}

    def multi_run_execution(self) -> List[SingleRunResult]:
        """
        This method runs the scheme once per seed, in parallel unless processes == 1.
        :return: the run results, in seed order of the input.
        """
        arguments = [
            (
                self.scenario,
                self.engine,
                self.performance,
                self.scheme,
                seed,
                self.epochs,
            )
            for seed in self.seeds
        ]
        if self.processes == 1 or len(arguments) <= 1:
            return [self.single_run_helper(item) for item in arguments]
        with Pool(self.processes) as my_pool:
            return my_pool.map(self.single_run_helper, arguments)

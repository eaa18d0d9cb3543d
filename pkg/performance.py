"""
This module contains the class Performance only.
"""

from typing import List, Optional, Sequence, Tuple
import data_processing
import performance_candidates
from data_types import (
    BatchSummary,
    ConvergenceOption,
    InvalidInputError,
    NOT_CONVERGED,
    PerformanceOptions,
    PerformanceParameters,
    RunMetrics,
)


class Performance:
    """
    This class contains parameters and methods to carry out performance evaluation of runs.
    Methods in this class will call realizations from module performance_candidates.
    """

    def __init__(
        self, parameters: PerformanceParameters, options: PerformanceOptions
    ) -> None:

        # unpacking and setting parameters

        # the objective must stay within +-tolerance over window epochs to count as steady
        self.window: int = parameters.window
        self.tolerance: float = parameters.tolerance
        # quantiles of the CDF of steady-state throughput reported per batch
        self.quantiles: Tuple[float, ...] = parameters.quantiles

        if self.window < 1 or self.tolerance < 0:
            raise InvalidInputError(
                "window must be positive and tolerance non-negative."
            )
        if any(not 0 <= item <= 1 for item in self.quantiles):
            raise InvalidInputError("Quantiles must be in [0, 1].")

        # unpacking and setting options.
        self.convergence_option: ConvergenceOption = options.convergence

    def detect_convergence(
        self, series: Sequence[float], applied: Optional[Sequence[int]] = None
    ) -> int:
        """
        This method returns the epoch at which the objective series reaches steady state.
        :param series: per-epoch objective.
        :param applied: per-epoch number of applied actions.
        :return: the convergence epoch, or NOT_CONVERGED.
        """
        if self.convergence_option["method"] == "Windowed":
            return performance_candidates.windowed_convergence(
                series, applied, self.window, self.tolerance
            )
        raise ValueError(
            f"No such option to detect convergence: {self.convergence_option['method']}"
        )

    def steady_state(self, series: Sequence[float]) -> float:
        """
        :return: the steady-state value of a per-epoch series.
        """
        return performance_candidates.tail_mean(series, self.window)

    def run_metrics(
        self,
        scheme: str,
        seed: int,
        user_throughput: List[Tuple[float, ...]],
        objective: List[float],
        actions_applied: List[int],
        note: str = "",
    ) -> RunMetrics:
        """
        This method assembles the metrics of one run from its per-epoch series (Mbps).
        """
        users: int = len(user_throughput[0]) if user_throughput else 0
        per_user: float = (
            self.steady_state(objective) / users if users else 0.0
        )
        return RunMetrics(
            scheme=scheme,
            seed=seed,
            user_throughput=user_throughput,
            objective=objective,
            actions_applied=actions_applied,
            convergence_epoch=self.detect_convergence(objective, actions_applied),
            steady_state_objective=self.steady_state(objective),
            steady_state_per_user=per_user,
            config_changes=sum(actions_applied),
            note=note,
        )

    def summarize(self, scheme: str, runs: Sequence[RunMetrics]) -> BatchSummary:
        """
        This method summarizes the runs of one scheme: convergence and configuration-change
        statistics, mean steady state and the CDF quantiles of the steady-state per-user
        throughput. The result does not depend on the order of the runs.
        """
        if not runs:
            raise InvalidInputError("No run to summarize.")
        ordered = sorted(runs, key=lambda item: item.seed)
        converged: List[float] = [
            float(item.convergence_epoch)
            for item in ordered
            if item.convergence_epoch != NOT_CONVERGED
        ]
        convergence_mean, convergence_std = (
            data_processing.mean_and_std(converged) if converged else (0.0, 0.0)
        )
        changes_mean, changes_std = data_processing.mean_and_std(
            [float(item.config_changes) for item in ordered]
        )
        per_user: List[float] = [item.steady_state_per_user for item in ordered]
        return BatchSummary(
            scheme=scheme,
            runs=len(ordered),
            converged_runs=len(converged),
            convergence_mean=convergence_mean,
            convergence_std=convergence_std,
            changes_mean=changes_mean,
            changes_std=changes_std,
            steady_state_mean=data_processing.mean_and_std(
                [item.steady_state_objective for item in ordered]
            )[0],
            per_user_mean=data_processing.mean_and_std(per_user)[0],
            quantiles=data_processing.cdf_quantiles(per_user, self.quantiles),
        )

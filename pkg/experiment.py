"""
This module contains the experiments built on top of multi-run execution: batches of one or
several schemes, the resilience experiment and the brute-force oracle comparison. Every
experiment writes its CSV files into an output directory through module report.
"""

import logging
import os
from typing import Dict, List, NamedTuple, Optional, Sequence
import numpy
import baselines
import data_processing
import knowledge_base
import report
from engine import Engine
from environment import World
from multi_run_in_parallel import MultiRunInParallel
from performance import Performance
from scenario import Scenario
from single_run import AGENT_SCHEMES, SingleRunResult
from data_types import (
    BatchSummary,
    InvalidInputError,
    NOT_CONVERGED,
    OracleReport,
    PhaseConvergence,
    ResilienceResult,
    RunMetrics,
    SCHEMES,
    UsageError,
)

logger = logging.getLogger(__name__)

# a run counts as near-optimal when it reaches this fraction of the brute-force optimum.
NEAR_OPTIMAL_RATIO: float = 0.9


class EnginePair(NamedTuple):
    """
    The guided engine runs icalo, the unguided one runs ugrl. Static schemes ignore both.
    """

    guided: Engine
    unguided: Engine

    def for_scheme(self, scheme: str) -> Engine:
        """
        :return: the engine a scheme runs with.
        """
        return self.unguided if scheme == "ugrl" else self.guided


class ExperimentResult(NamedTuple):
    """
    Runs of every scheme (ordered by scheme, then seed), one summary per scheme and the files
    written.
    """

    runs: List[RunMetrics]
    summaries: List[BatchSummary]
    files: List[str]


def check_schemes(schemes: Sequence[str]) -> None:
    """
    :raise UsageError: on an unknown or repeated scheme, or an empty list.
    """
    if not schemes:
        raise UsageError("No scheme is given.")
    for scheme in schemes:
        if scheme not in SCHEMES:
            raise UsageError(f"No such scheme: {scheme}")
    if len(set(schemes)) != len(schemes):
        raise UsageError("A scheme is given twice.")


def execute_batch(
    scenario: Scenario,
    scheme: str,
    engines: EnginePair,
    performance: Performance,
    seeds: Sequence[int],
    epochs: Optional[int] = None,
    processes: Optional[int] = None,
) -> List[SingleRunResult]:
    """
    This function runs one scheme over every seed.
    :return: the run results, in seed order.
    """
    if not seeds:
        raise UsageError("No seed is given.")
    logger.info("%s on %s: %s seeds", scheme, scenario.name, len(seeds))
    results = MultiRunInParallel(
        scenario=scenario,
        engine=engines.for_scheme(scheme),
        performance=performance,
        scheme=scheme,
        seeds=seeds,
        epochs=epochs,
        processes=processes,
    ).multi_run_execution()
    return sorted(results, key=lambda item: item.metrics.seed)


def write_run_files(
    out_dir: str, scenario: Scenario, results: Sequence[SingleRunResult]
) -> List[str]:
    """
    This function writes the per-run CSV of every result, plus the action log and the knowledge
    base dump of agent runs.
    :return: the paths written.
    """
    files: List[str] = []
    users: List[int] = scenario.initial_graph.user_indices
    for result in results:
        metrics = result.metrics
        files.append(report.write_run_csv(out_dir, metrics, scenario.tau_ms, users))
        if metrics.scheme in AGENT_SCHEMES and result.kb is not None:
            files.append(
                report.write_action_log(
                    out_dir, metrics.scheme, metrics.seed, result.log, scenario.tau_ms
                )
            )
            kb_path: str = os.path.join(
                out_dir, f"{metrics.scheme}_seed{metrics.seed}.kb"
            )
            knowledge_base.persist(result.kb, kb_path)
            files.append(kb_path)
    return files


def compare(
    scenario: Scenario,
    schemes: Sequence[str],
    engines: EnginePair,
    performance: Performance,
    seeds: Sequence[int],
    out_dir: str,
    epochs: Optional[int] = None,
    processes: Optional[int] = None,
) -> ExperimentResult:
    """
    This function runs several schemes on the same seeds and writes per-run files, runs.csv
    and summary.csv (one row per scheme, in the order the schemes are given).
    """
    check_schemes(schemes)
    os.makedirs(out_dir, exist_ok=True)

    runs: List[RunMetrics] = []
    summaries: List[BatchSummary] = []
    files: List[str] = []
    for scheme in schemes:
        results = execute_batch(
            scenario, scheme, engines, performance, seeds, epochs, processes
        )
        files.extend(write_run_files(out_dir, scenario, results))
        scheme_runs: List[RunMetrics] = [item.metrics for item in results]
        runs.extend(scheme_runs)
        summaries.append(performance.summarize(scheme, scheme_runs))

    files.append(report.write_runs(out_dir, runs, scenario.tau_ms))
    files.append(
        report.write_summary(out_dir, summaries, performance.quantiles, scenario.tau_ms)
    )
    for summary in summaries:
        logger.info(
            "%s: %s/%s runs converged, mean steady state %.3f Mbps",
            summary.scheme,
            summary.converged_runs,
            summary.runs,
            summary.steady_state_mean,
        )
    return ExperimentResult(runs=runs, summaries=summaries, files=files)


def run_experiment(
    scenario: Scenario,
    scheme: str,
    engines: EnginePair,
    performance: Performance,
    seeds: Sequence[int],
    out_dir: str,
    epochs: Optional[int] = None,
    processes: Optional[int] = None,
) -> ExperimentResult:
    """
    This function runs one scheme over the seeds; see compare().
    """
    return compare(
        scenario, [scheme], engines, performance, seeds, out_dir, epochs, processes
    )


def phase_convergence(
    metrics: RunMetrics, boundaries: Sequence[int], performance: Performance
) -> List[PhaseConvergence]:
    """
    This function splits a run at the event epochs and detects convergence inside every phase.
    A phase that never converges before the next event is censored; its convergence epoch is
    then the phase length.
    :param metrics: the run.
    :param boundaries: epochs (> 0) at which a new phase starts.
    :param performance: convergence criterion.
    :return: one entry per phase; convergence epochs are relative to the phase start.
    """
    end: int = len(metrics.objective)
    starts: List[int] = [0] + [
        item for item in sorted(set(boundaries)) if 0 < item < end
    ]
    ends: List[int] = starts[1:] + [end]
    phases: List[PhaseConvergence] = []
    for start, stop in zip(starts, ends):
        epoch: int = performance.detect_convergence(
            metrics.objective[start:stop], metrics.actions_applied[start:stop]
        )
        censored: bool = epoch == NOT_CONVERGED
        phases.append(
            PhaseConvergence(
                start_epoch=start,
                end_epoch=stop,
                convergence_epoch=stop - start if censored else epoch,
                censored=censored,
            )
        )
    return phases


def resilience_experiment(
    scenario: Scenario,
    engines: EnginePair,
    performance: Performance,
    seeds: Sequence[int],
    out_dir: str,
    scheme: str = "icalo",
    epochs: Optional[int] = None,
    processes: Optional[int] = None,
) -> List[ResilienceResult]:
    """
    This function runs the agent over the seeds of a scenario whose timeline swaps external
    APs, and reports the convergence epoch of every phase. The trend holds for a run when the
    per-phase convergence epochs never increase.
    """
    check_schemes([scheme])
    os.makedirs(out_dir, exist_ok=True)
    boundaries: List[int] = scenario.phase_boundaries()
    if len(boundaries) < 2:
        logger.warning(
            "scenario %s has %s timed events, the trend is not meaningful",
            scenario.name,
            len(boundaries),
        )

    results = execute_batch(
        scenario, scheme, engines, performance, seeds, epochs, processes
    )
    write_run_files(out_dir, scenario, results)

    outcome: List[ResilienceResult] = []
    for result in results:
        phases = phase_convergence(result.metrics, boundaries, performance)
        trend: bool = data_processing.is_non_increasing(
            [item.convergence_epoch for item in phases]
        )
        outcome.append(
            ResilienceResult(seed=result.metrics.seed, phases=phases, trend_holds=trend)
        )
        logger.info(
            "seed %s: phase convergence %s, trend %s",
            result.metrics.seed,
            [item.convergence_epoch for item in phases],
            "holds" if trend else "broken",
        )

    report.write_resilience(out_dir, outcome, scenario.tau_ms)
    report.write_runs(out_dir, [item.metrics for item in results], scenario.tau_ms)
    return outcome


def optimum_of(scenario: Scenario, keep_locations: bool = False) -> float:
    """
    This function searches the best configuration of the initial world exhaustively.
    :param scenario: the scenario; its initial graph, demands and external APs are used.
    :param keep_locations: keep every extender at its initial location.
    :return: the optimum in Mbps.
    """
    # evaluation is deterministic: the generator of this world is never drawn from.
    world = World(scenario, numpy.random.default_rng(0))
    graph = world.graph
    extenders = [
        node for node in graph.managed_indices if graph.node(node).role == "EXT"
    ]
    if keep_locations:
        if len({graph.node(node).location for node in extenders}) > 1:
            raise InvalidInputError(
                "Keeping locations needs every extender on the same candidate location."
            )
        locations = [graph.node(extenders[0]).location] if extenders else []
    else:
        locations = scenario.grid.locations()
    result = baselines.brute_force_optimum(
        world,
        locations or scenario.grid.locations(),
        list(range(1, scenario.n_channels + 1)),
    )
    return result.best_objective / 1e6


def oracle_experiment(
    scenario: Scenario,
    engines: EnginePair,
    performance: Performance,
    seeds: Sequence[int],
    out_dir: str,
    scheme: str = "icalo",
    epochs: Optional[int] = None,
    processes: Optional[int] = None,
) -> OracleReport:
    """
    This function compares the steady state of an agent with the brute-force optimum of the
    scenario, seed by seed.
    """
    check_schemes([scheme])
    os.makedirs(out_dir, exist_ok=True)
    world = World(scenario, numpy.random.default_rng(0))
    space: int = baselines.search_space_size(
        world.graph, len(scenario.grid), scenario.n_channels
    )
    optimum: float = optimum_of(scenario)
    restricted: float = optimum_of(scenario, keep_locations=True)

    results = execute_batch(
        scenario, scheme, engines, performance, seeds, epochs, processes
    )
    write_run_files(out_dir, scenario, results)
    by_seed: Dict[int, RunMetrics] = MultiRunInParallel.reorganize_run_metrics(results)

    ordered_seeds: List[int] = sorted(by_seed)
    ratios: List[float] = [
        by_seed[seed].steady_state_objective / optimum if optimum > 0 else 0.0
        for seed in ordered_seeds
    ]
    oracle = OracleReport(
        optimum=optimum,
        initial_location_optimum=restricted,
        evaluations=space,
        seeds=ordered_seeds,
        ratios=ratios,
        near_optimal_runs=sum(1 for item in ratios if item >= NEAR_OPTIMAL_RATIO),
    )
    logger.info(
        "optimum %.3f Mbps (%.3f Mbps at the initial locations), %s/%s runs near-optimal",
        optimum,
        restricted,
        oracle.near_optimal_runs,
        len(ratios),
    )
    report.write_oracle(out_dir, oracle, scenario.tau_ms)
    report.write_runs(out_dir, list(by_seed.values()), scenario.tau_ms)
    return oracle

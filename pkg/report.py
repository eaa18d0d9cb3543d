"""
This module writes and reads the CSV files of experiments. Every file starts with comment lines
("# key=value") naming the scheme and the epoch length in milliseconds; floats are written with
six decimals so that repeated runs produce identical bytes.

Files:
    <scheme>_seed<seed>.csv       epoch, objective_mbps, actions_applied, user_<k>_mbps...
    <scheme>_seed<seed>_actions.csv  the action log of an agent
    runs.csv                      one row per run
    summary.csv                   one row per scheme
    resilience.csv                one row per phase of every run
    oracle.csv                    one row per seed
"""

import csv
import logging
import os
from typing import Dict, List, NamedTuple, Sequence, TextIO
from data_types import (
    ActionLogEntry,
    BatchSummary,
    OracleReport,
    ResilienceResult,
    RunMetrics,
)

logger = logging.getLogger(__name__)


class RunSeries(NamedTuple):
    """
    Per-epoch series read back from a run CSV.
    """

    scheme: str
    seed: int
    epoch_ms: float
    objective: List[float]
    actions_applied: List[int]
    users: Dict[str, List[float]]


def _number(value: float) -> str:
    return f"{value:.6f}"


def _header(handle: TextIO, **fields: object) -> None:
    for key, value in fields.items():
        handle.write(f"# {key}={value}\n")


def run_csv_name(scheme: str, seed: int) -> str:
    """
    :return: the file name of the per-run CSV.
    """
    return f"{scheme}_seed{seed}.csv"


def write_run_csv(
    directory: str, metrics: RunMetrics, epoch_ms: float, user_indices: Sequence[int]
) -> str:
    """
    This function writes the per-epoch series of one run.
    :return: the path written.
    """
    path: str = os.path.join(directory, run_csv_name(metrics.scheme, metrics.seed))
    with open(path, "w", newline="") as handle:
        _header(handle, scheme=metrics.scheme, seed=metrics.seed, epoch_ms=epoch_ms)
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            ["epoch", "objective_mbps", "actions_applied"]
            + [f"user_{user}_mbps" for user in user_indices]
        )
        for epoch, (objective, applied, users) in enumerate(
            zip(metrics.objective, metrics.actions_applied, metrics.user_throughput)
        ):
            writer.writerow(
                [epoch, _number(objective), applied] + [_number(item) for item in users]
            )
    return path


def read_run_csv(path: str) -> RunSeries:
    """
    This function reads a file written by write_run_csv().
    """
    header: Dict[str, str] = {}
    with open(path, newline="") as handle:
        lines: List[str] = handle.read().splitlines()
    body: List[str] = []
    for line in lines:
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            header[key] = value
        else:
            body.append(line)
    rows = list(csv.DictReader(body))
    user_columns = [
        name for name in (rows[0].keys() if rows else []) if name.startswith("user_")
    ]
    return RunSeries(
        scheme=header.get("scheme", ""),
        seed=int(header.get("seed", "0")),
        epoch_ms=float(header.get("epoch_ms", "0")),
        objective=[float(row["objective_mbps"]) for row in rows],
        actions_applied=[int(row["actions_applied"]) for row in rows],
        users={name: [float(row[name]) for row in rows] for name in user_columns},
    )


def _action_text(entry: ActionLogEntry) -> str:
    action = entry.action
    if action.kind == "ChannelConfig":
        return "channels " + "/".join(str(item) for item in action.channels or ())
    assert action.target is not None
    return f"move {action.target.grid_index} ({action.target.x:g},{action.target.y:g})"


def write_action_log(
    directory: str,
    scheme: str,
    seed: int,
    log: Sequence[ActionLogEntry],
    epoch_ms: float,
) -> str:
    """
    This function writes the action log of an agent run.
    :return: the path written.
    """
    path: str = os.path.join(directory, f"{scheme}_seed{seed}_actions.csv")
    with open(path, "w", newline="") as handle:
        _header(handle, scheme=scheme, seed=seed, epoch_ms=epoch_ms)
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            [
                "epoch",
                "node",
                "policy",
                "action",
                "verdict",
                "reward_mbps",
                "q",
                "epsilon",
            ]
        )
        for entry in log:
            writer.writerow(
                [
                    entry.epoch,
                    entry.node,
                    entry.policy,
                    _action_text(entry),
                    entry.verdict,
                    _number(entry.reward),
                    _number(entry.q_value),
                    _number(entry.epsilon),
                ]
            )
    return path


def write_runs(directory: str, runs: Sequence[RunMetrics], epoch_ms: float) -> str:
    """
    This function writes one row per run, ordered by scheme then seed.
    :return: the path written.
    """
    path: str = os.path.join(directory, "runs.csv")
    with open(path, "w", newline="") as handle:
        _header(handle, epoch_ms=epoch_ms)
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            [
                "scheme",
                "seed",
                "convergence_epoch",
                "steady_state_mbps",
                "steady_state_per_user_mbps",
                "config_changes",
                "note",
            ]
        )
        for item in sorted(runs, key=lambda run: (run.scheme, run.seed)):
            writer.writerow(
                [
                    item.scheme,
                    item.seed,
                    item.convergence_epoch,
                    _number(item.steady_state_objective),
                    _number(item.steady_state_per_user),
                    item.config_changes,
                    item.note,
                ]
            )
    return path


def read_runs(path: str) -> List[Dict[str, str]]:
    """
    This function reads the rows of runs.csv.
    """
    with open(path, newline="") as handle:
        body = [
            line for line in handle.read().splitlines() if not line.startswith("# ")
        ]
    return list(csv.DictReader(body))


def write_summary(
    directory: str,
    summaries: Sequence[BatchSummary],
    quantiles: Sequence[float],
    epoch_ms: float,
) -> str:
    """
    This function writes one row per scheme. Convergence statistics are in epochs.
    :return: the path written.
    """
    path: str = os.path.join(directory, "summary.csv")
    with open(path, "w", newline="") as handle:
        _header(handle, epoch_ms=epoch_ms)
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            [
                "scheme",
                "runs",
                "converged_runs",
                "convergence_mean",
                "convergence_std",
                "changes_mean",
                "changes_std",
                "steady_state_mean_mbps",
                "per_user_mean_mbps",
            ]
            + [f"q{round(item * 100)}_mbps" for item in quantiles]
        )
        for summary in summaries:
            writer.writerow(
                [
                    summary.scheme,
                    summary.runs,
                    summary.converged_runs,
                    _number(summary.convergence_mean),
                    _number(summary.convergence_std),
                    _number(summary.changes_mean),
                    _number(summary.changes_std),
                    _number(summary.steady_state_mean),
                    _number(summary.per_user_mean),
                ]
                + [_number(item) for item in summary.quantiles]
            )
    return path


def write_resilience(
    directory: str, results: Sequence[ResilienceResult], epoch_ms: float
) -> str:
    """
    This function writes the per-phase convergence of resilience runs.
    :return: the path written.
    """
    path: str = os.path.join(directory, "resilience.csv")
    with open(path, "w", newline="") as handle:
        _header(handle, epoch_ms=epoch_ms)
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            [
                "seed",
                "phase",
                "start_epoch",
                "end_epoch",
                "convergence_epoch",
                "censored",
                "trend_holds",
            ]
        )
        for result in sorted(results, key=lambda item: item.seed):
            for index, phase in enumerate(result.phases):
                writer.writerow(
                    [
                        result.seed,
                        index,
                        phase.start_epoch,
                        phase.end_epoch,
                        phase.convergence_epoch,
                        int(phase.censored),
                        int(result.trend_holds),
                    ]
                )
    return path


def write_oracle(directory: str, oracle: OracleReport, epoch_ms: float) -> str:
    """
    This function writes the agent-versus-optimum ratio of every seed.
    :return: the path written.
    """
    path: str = os.path.join(directory, "oracle.csv")
    with open(path, "w", newline="") as handle:
        _header(
            handle,
            epoch_ms=epoch_ms,
            optimum_mbps=_number(oracle.optimum),
            initial_location_optimum_mbps=_number(oracle.initial_location_optimum),
            evaluations=oracle.evaluations,
            near_optimal_runs=oracle.near_optimal_runs,
        )
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["seed", "ratio"])
        for seed, ratio in zip(oracle.seeds, oracle.ratios):
            writer.writerow([seed, _number(ratio)])
    return path

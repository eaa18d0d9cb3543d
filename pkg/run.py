"""
This is the single main file that runs the simulator.

    python run.py run --scenario convergence --scheme icalo --seeds 1..50 --out results
    python run.py compare --scenario congested_a --scheme icalo --scheme clica --svg
    python run.py resilience --scenario scenarios/resilience.yaml
    python run.py oracle --scenario oracle_small --seeds 1..50

--scenario takes a built-in name (see example.BUILTINS) or the path of a YAML file.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional, Sequence
import example
import experiment
import plot
from engine import Engine
from scenario_file import ScenarioFile, load_scenario, parse_seeds
from data_types import InvalidInputError, SCHEMES, ScenarioFileError, UsageError

logger = logging.getLogger(__name__)

COMPARED_SCHEMES: List[str] = ["icalo", "clica", "cca", "single"]


def build_parser() -> argparse.ArgumentParser:
    """
    :return: the argument parser of the command line.
    """
    parser = argparse.ArgumentParser(
        description="Joint channel assignment and extender placement in Wi-Fi meshes."
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("run", "run one scheme over the seeds"),
        ("compare", "run several schemes over the same seeds"),
        ("resilience", "per-phase convergence under timed external AP swaps"),
        ("oracle", "compare the agent with the brute-force optimum"),
    ):
        command = commands.add_parser(name, help=text)
        command.add_argument(
            "--scenario", required=True, help="built-in name or YAML file"
        )
        command.add_argument(
            "--scheme",
            action="append",
            help=f"one of {', '.join(SCHEMES)}; repeat for compare",
        )
        command.add_argument(
            "--seeds", help="a..b, both included (default: the scenario's)"
        )
        command.add_argument(
            "--epochs", type=int, help="override the scenario's epochs"
        )
        command.add_argument("--out", default="results", help="output directory")
        command.add_argument("--svg", action="store_true", help="also plot SVG figures")
        command.add_argument(
            "--processes", type=int, help="worker processes (default: all)"
        )
        command.add_argument(
            "--log-level",
            default="INFO",
            choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        )
    return parser


def resolve_scenario(name: str) -> ScenarioFile:
    """
    :return: the built-in scenario of that name, or the scenario file at that path.
    """
    if name in example.BUILTINS:
        return example.BUILTINS[name]
    if os.path.isfile(name):
        return load_scenario(name)
    raise UsageError(
        f"No such scenario: {name} (built-ins: {', '.join(sorted(example.BUILTINS))})"
    )


def schemes_of(given: Optional[List[str]], command: str) -> List[str]:
    """
    :return: the schemes of a command; compare defaults to the agent and three baselines,
    the other commands to the agent.
    """
    if not given:
        return list(COMPARED_SCHEMES) if command == "compare" else ["icalo"]
    if command != "compare" and len(given) > 1:
        raise UsageError(f"{command} takes one scheme.")
    experiment.check_schemes(given)
    return given


def execute(arguments: argparse.Namespace) -> int:
    """
    This function runs the command and prints a short report.
    :return: the exit status.
    """
    loaded = resolve_scenario(arguments.scenario)
    scenario = loaded.scenario
    seeds: List[int] = parse_seeds(arguments.seeds) if arguments.seeds else loaded.seeds
    if arguments.epochs is not None and arguments.epochs < 1:
        raise UsageError("--epochs must be positive.")
    schemes = schemes_of(arguments.scheme, arguments.command)
    engines = experiment.EnginePair(
        guided=Engine(loaded.engine_parameters, example.GUIDED_OPTIONS),
        unguided=Engine(loaded.engine_parameters, example.UNGUIDED_OPTIONS),
    )
    performance = example.PERFORMANCE
    out_dir: str = arguments.out
    epochs: Optional[int] = arguments.epochs
    processes: Optional[int] = arguments.processes

    print(f"# scenario={scenario.name} epoch_ms={scenario.tau_ms:g} seeds={len(seeds)}")
    if arguments.command in ("run", "compare"):
        result = experiment.compare(
            scenario, schemes, engines, performance, seeds, out_dir, epochs, processes
        )
        for summary in result.summaries:
            print(
                f"{summary.scheme}: steady state {summary.steady_state_mean:.3f} Mbps, "
                f"{summary.per_user_mean:.3f} Mbps per user, converged "
                f"{summary.converged_runs}/{summary.runs} at "
                f"{summary.convergence_mean:.1f} +- {summary.convergence_std:.1f} epochs, "
                f"{summary.changes_mean:.1f} +- {summary.changes_std:.1f} changes"
            )
    elif arguments.command == "resilience":
        results = experiment.resilience_experiment(
            scenario,
            engines,
            performance,
            seeds,
            out_dir,
            schemes[0],
            epochs,
            processes,
        )
        holding = sum(1 for item in results if item.trend_holds)
        print(f"non-increasing convergence trend in {holding}/{len(results)} runs")
    else:
        oracle = experiment.oracle_experiment(
            scenario,
            engines,
            performance,
            seeds,
            out_dir,
            schemes[0],
            epochs,
            processes,
        )
        print(
            f"optimum {oracle.optimum:.3f} Mbps over {oracle.evaluations} configurations "
            f"({oracle.initial_location_optimum:.3f} Mbps at the initial locations); "
            f"{oracle.near_optimal_runs}/{len(oracle.ratios)} runs reach "
            f"{experiment.NEAR_OPTIMAL_RATIO:.0%}"
        )

    if arguments.svg:
        written = plot.plot_directory(arguments.out)
        print(f"{len(written)} figures written to {arguments.out}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the command line.
    """
    arguments = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, arguments.log_level),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        return execute(arguments)
    except (UsageError, ScenarioFileError, InvalidInputError) as error:
        logger.error("%s", error)
        print(f"error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

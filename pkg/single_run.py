"""
This module contains the SingleRun class only.
"""

import logging
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple
import numpy
import baselines
from agent import Agent, agent_epoch, ugrl_epoch
from engine import Engine
from environment import World
from knowledge_base import KnowledgeBase
from network import NetworkGraph
from performance import Performance
from scenario import Scenario
from data_types import (
    ActionLogEntry,
    BudgetExceededError,
    RunMetrics,
    SCHEMES,
    UsageError,
)

logger = logging.getLogger(__name__)

AGENT_SCHEMES: Dict[str, Callable] = {"icalo": agent_epoch, "ugrl": ugrl_epoch}


class SingleRunResult(NamedTuple):
    """
    Everything one run produces. kb is None for the static schemes.
    """

    metrics: RunMetrics
    log: List[ActionLogEntry]
    kb: Optional[KnowledgeBase]
    final_graph: NetworkGraph


class SingleRun:
    """
    The SingleRun class runs one seeded test of one scheme: it builds the world, installs a
    static configuration or an agent, and steps through the epochs of the scenario.
    The seed is split into two independent streams, one for the world and one for the agent
    (or the randomized baseline).
    """

    def __init__(
        self,
        scenario: Scenario,
        engine: Engine,
        performance: Performance,
        scheme: str,
        seed: int,
        epochs: Optional[int] = None,
    ) -> None:
        if scheme not in SCHEMES:
            raise UsageError(f"No such scheme: {scheme}")
        if scheme in AGENT_SCHEMES and engine.guided != (scheme == "icalo"):
            raise UsageError(f"Scheme {scheme} needs a matching engine.")
        self.scenario: Scenario = scenario
        self.engine: Engine = engine
        self.performance: Performance = performance
        self.scheme: str = scheme
        self.seed: int = seed
        self.epochs: int = scenario.epochs if epochs is None else epochs

        world_sequence, agent_sequence = numpy.random.SeedSequence(seed).spawn(2)
        self.world_rng: numpy.random.Generator = numpy.random.default_rng(
            world_sequence
        )
        self.agent_rng: numpy.random.Generator = numpy.random.default_rng(
            agent_sequence
        )

    def install_baseline(self, world: World) -> str:
        """
        This method installs the static configuration of a baseline scheme on the world.
        :return: a note for the run metrics (empty if nothing to report).
        """
        graph: NetworkGraph = world.graph
        if self.scheme == "single":
            channel = baselines.best_single_channel(world).channel
            assignment = {
                node: (channel,) * graph.node(node).radio_count
                for node in graph.managed_indices
            }
            world.restore(baselines.configure(graph, assignment))
        elif self.scheme == "cca":
            world.restore(
                baselines.configure(graph, baselines.cca_assign(world, self.agent_rng))
            )
        elif self.scheme == "clica":
            world.restore(baselines.configure(graph, baselines.clica_assign(world)))
        elif self.scheme == "brute":
            try:
                result = baselines.brute_force_optimum(
                    world,
                    self.scenario.grid.locations(),
                    list(range(1, self.scenario.n_channels + 1)),
                )
            except BudgetExceededError as error:
                logger.warning("seed %s: %s", self.seed, error)
                return f"budget exceeded: {error.required} configurations"
            if result.best_channels is None:
                return "no feasible configuration"
            world.restore(
                baselines.configure(graph, result.best_channels, result.best_locations)
            )
        return ""

    def single_run_execution(self) -> SingleRunResult:
        """
        This method runs the epochs. A static configuration is installed right after the first
        epoch (so that it sees the events of epoch 0); an agent senses and decides every epoch.
        :return: the run result.
        """
        world = World(self.scenario, self.world_rng)
        agent: Optional[Agent] = None
        if self.scheme in AGENT_SCHEMES:
            agent = Agent(self.scenario, self.engine, self.agent_rng)
        users: List[int] = world.graph.user_indices

        user_throughput: List[Tuple[float, ...]] = []
        objective: List[float] = []
        actions_applied: List[int] = []
        note: str = ""

        for epoch in range(self.epochs):
            world.step(epoch)
            evaluation = world.last_evaluation
            user_throughput.append(
                tuple(evaluation.user_throughput[user] / 1e6 for user in users)
            )
            objective.append(evaluation.objective / 1e6)

            applied: int = 0
            if agent is None:
                if epoch == 0:
                    note = self.install_baseline(world)
            else:
                snapshot = agent.observe(world, epoch)
                if snapshot is not None:
                    entries = AGENT_SCHEMES[self.scheme](agent, world, snapshot, epoch)
                    applied = sum(
                        1 for entry in entries if entry.verdict in ("Apply", "Failed")
                    )
            actions_applied.append(applied)

        metrics: RunMetrics = self.performance.run_metrics(
            self.scheme, self.seed, user_throughput, objective, actions_applied, note
        )
        logger.info(
            "%s seed %s: steady state %.3f Mbps, converged at %s, %s changes",
            self.scheme,
            self.seed,
            metrics.steady_state_objective,
            metrics.convergence_epoch,
            metrics.config_changes,
        )
        return SingleRunResult(
            metrics=metrics,
            log=list(agent.log) if agent is not None else [],
            kb=agent.kb if agent is not None else None,
            final_graph=world.graph,
        )

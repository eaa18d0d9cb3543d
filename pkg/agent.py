"""
This module contains the class Agent only, plus the two epoch functions of the guided and the
unguided learner.

An agent owns its knowledge base. At every sensing epoch it collects one sample from the world;
once a decision window is complete it builds a perception snapshot and runs, for every managed
node in index order, the location policy, zero-cost exploration (no active user), guided or
plain Boltzmann exploration / exploitation when the node sees a suboptimal state, and the
control gate.
"""

import logging
from typing import Dict, List, Optional, Set, Tuple
import numpy
import engine_candidates
from engine import Engine
from environment import ActionOutcome, CounterBank, World, zero_counters
from knowledge_base import KnowledgeBase, q_update, record_channel_observation
from network import NetworkGraph, enumerate_channel_actions
from perception import (
    PerceptionSnapshot,
    build_snapshot,
    correct_activity,
    node_view,
    trigger,
)
from scenario import Scenario
from data_types import (
    Action,
    ActionLogEntry,
    CounterResetError,
    InvalidInputError,
    Location,
    PolicyName,
)

logger = logging.getLogger(__name__)


class Agent:
    """
    The learner of one run. Exploration probability and temperature are kept per node.
    """

    def __init__(
        self, scenario: Scenario, engine: Engine, rng: numpy.random.Generator
    ) -> None:
        self.scenario: Scenario = scenario
        self.engine: Engine = engine
        self.rng: numpy.random.Generator = rng
        self.kb: KnowledgeBase = KnowledgeBase(scenario.n_channels)
        self.q_target: float = scenario.q_target(engine.thresholds)

        graph: NetworkGraph = scenario.initial_graph
        self.actions: Dict[int, List[Action]] = {
            node: enumerate_channel_actions(node, graph, scenario.n_channels)
            for node in graph.managed_indices
        }
        self.epsilon: Dict[int, float] = {
            node: engine.agent.epsilon0 for node in graph.managed_indices
        }
        self.temperature: Dict[int, float] = {
            node: engine.agent.temperature for node in graph.managed_indices
        }
        self.visited_locations: Dict[int, Set[int]] = {
            node: {graph.node(node).location.grid_index}
            for node in graph.managed_indices
            if graph.node(node).role == "EXT"
        }
        # repositioning actions waiting for the reward of their first window
        self.pending_reposition: Dict[int, Action] = {}

        self.best_graph: Optional[NetworkGraph] = None
        self.best_reward: float = float("-inf")
        self.log: List[ActionLogEntry] = []

        # sample batching
        self._window_start: CounterBank = zero_counters(graph)
        self._last_counters: CounterBank = self._window_start
        self._samples: int = 0
        self._waited_ms: float = 0.0

    # ------------------------------------------------------------------
    # sensing

    def observe(self, world: World, epoch: int) -> Optional[PerceptionSnapshot]:
        """
        This method takes the sample of one sensing epoch. Samples whose counters decreased are
        discarded and restart the window. A snapshot is returned once samples_per_decision
        samples are collected, or once max_wait seconds passed with at least one sample.
        :return: the snapshot of the decision window, or None if the window is still open.
        """
        tau: float = self.scenario.tau_ms
        counters: CounterBank = world.counters
        self._waited_ms += tau
        try:
            build_snapshot(self._last_counters, counters, tau, world.graph, {})
            self._samples += 1
        except CounterResetError:
            logger.warning("epoch %s: counter reset, sample discarded", epoch)
            self._window_start = counters
            self._samples = 0
        self._last_counters = counters

        policy = self.scenario.sentinel
        if self._samples < policy.samples_per_decision and not (
            self._samples >= 1 and self._waited_ms >= policy.max_wait * 1000
        ):
            return None

        snapshot = build_snapshot(
            self._window_start,
            counters,
            self._samples * tau,
            world.graph,
            world.measure_backhaul_rssi(),
        )
        self._window_start = counters
        self._samples = 0
        self._waited_ms = 0.0
        return snapshot

    # ------------------------------------------------------------------
    # decisions

    def current_action(self, graph: NetworkGraph, node: int) -> Action:
        """
        :return: the channel configuration of a node as an action.
        """
        return Action(
            kind="ChannelConfig", node=node, channels=graph.node(node).channels
        )

    def _learn(self, node: int, state: int, action: Action, reward: float) -> float:
        agent = self.engine.agent
        old: float = self.kb.q_table.value(node, state, action)
        updated: float = q_update(
            self.kb.q_table, node, state, action, reward, agent.eta, agent.gamma
        )
        self.epsilon[node] = engine_candidates.exploration_probability_update(
            self.epsilon[node],
            reward - old,
            agent.eta,
            agent.sigma,
            len(self.actions[node]),
        )
        return updated

    def _record_failure(self, outcome: ActionOutcome) -> None:
        for location, channel in outcome.failed:
            record_channel_observation(
                self.kb.channel_location,
                location,
                channel,
                self.scenario.sentinel.sentinel_value,
            )

    def _entry(
        self,
        epoch: int,
        node: int,
        policy: PolicyName,
        action: Action,
        verdict: str,
        reward: float,
        state: int,
    ) -> ActionLogEntry:
        entry = ActionLogEntry(
            epoch=epoch,
            node=node,
            policy=policy,
            action=action,
            verdict=verdict,
            reward=reward,
            q_value=self.kb.q_table.value(node, state, action),
            epsilon=self.epsilon[node],
        )
        self.log.append(entry)
        logger.debug("epoch %s: %s", epoch, entry)
        return entry

    def _relocate(
        self,
        world: World,
        snapshot: PerceptionSnapshot,
        node: int,
        epoch: int,
        reward: float,
    ) -> Optional[ActionLogEntry]:
        graph: NetworkGraph = world.graph
        record = graph.node(node)
        rssi: Optional[float] = snapshot.backhaul_rssi.get(node)
        toward: Optional[Location] = None
        if rssi is None or rssi > self.engine.thresholds.rssi_min:
            # the link to the parent is fine: head for the users instead
            toward = engine_candidates.recommended_location(
                node, graph, self.scenario.grid
            )
        target: Location = engine_candidates.propose_location(
            node,
            graph,
            self.scenario.grid,
            self.visited_locations[node],
            self.rng,
            self.engine.agent.offset_cells,
            toward,
        )
        if target.grid_index == record.location.grid_index:
            return None

        action = Action(kind="Reposition", node=node, target=target)
        self.visited_locations[node].add(target.grid_index)
        outcome: ActionOutcome = world.apply_action(action, fallback=self.best_graph)
        if outcome.status == "ReestablishFailed":
            self._record_failure(outcome)
            self.kb.q_table.set(node, target.grid_index, action, 0.0)
            return self._entry(
                epoch, node, "location", action, "Failed", 0.0, target.grid_index
            )
        self.pending_reposition[node] = action
        logger.info("epoch %s: extender %s moves to %s", epoch, node, target)
        return self._entry(
            epoch, node, "location", action, "Apply", reward, target.grid_index
        )

    def _try_zero_cost(
        self, world: World, node: int, epoch: int
    ) -> List[ActionLogEntry]:
        entries: List[ActionLogEntry] = []
        for _ in range(self.engine.agent.trials_per_epoch):
            graph: NetworkGraph = world.graph
            state: int = graph.node(node).location.grid_index
            visited: List[Action] = [
                action
                for action in self.kb.q_table.state_values(node, state)
                if action.kind == "ChannelConfig"
            ]
            action: Action = engine_candidates.zero_cost_explore(
                self.actions[node], visited, world.active_user_count(), self.rng
            )
            result = world.try_action(action)
            if result.failed:
                self._record_failure(ActionOutcome("ReestablishFailed", result.failed))
                self.kb.q_table.set(node, state, action, 0.0)
                entries.append(
                    self._entry(epoch, node, "zero_cost", action, "Failed", 0.0, state)
                )
                continue
            for location, channel, utilization in result.observations:
                record_channel_observation(
                    self.kb.channel_location, location, channel, utilization
                )
            self._learn(node, state, action, result.reward)
            entries.append(
                self._entry(
                    epoch, node, "zero_cost", action, "Trial", result.reward, state
                )
            )
        return entries

    def _optimize_channels(
        self,
        world: World,
        snapshot: PerceptionSnapshot,
        node: int,
        epoch: int,
        reward: float,
    ) -> Optional[ActionLogEntry]:
        graph: NetworkGraph = world.graph
        view: PerceptionSnapshot = node_view(snapshot, node, graph)
        if trigger(view, self.engine.thresholds) == "Quiet":
            return None

        state: int = graph.node(node).location.grid_index
        actions: List[Action] = self.actions[node]
        q_values: List[float] = [
            self.kb.q_table.value(node, state, action) for action in actions
        ]
        current: Action = self.current_action(graph, node)

        policy: PolicyName
        if self.rng.random() < self.epsilon[node]:
            policy = "explore"
            terms = (
                [
                    engine_candidates.guidance_terms(
                        action, graph, self.kb.channel_location
                    )
                    for action in actions
                ]
                if self.engine.guided
                else []
            )
            proposed = self.engine.explore(
                actions, q_values, terms, current, self.temperature[node], self.rng
            )
        else:
            policy = "exploit"
            proposed = self.engine.exploit(actions, q_values, current)

        if proposed == current:
            return self._entry(epoch, node, policy, proposed, "Keep", reward, state)

        q_current: float = self.kb.q_table.value(node, state, current)
        verdict = self.engine.gate(self.kb.q_table, node, state, proposed, q_current)
        if verdict == "Keep":
            return self._entry(epoch, node, policy, proposed, "Keep", reward, state)

        outcome: ActionOutcome = world.apply_action(proposed, fallback=self.best_graph)
        self.temperature[node] = self.engine.next_temperature(self.temperature[node])
        if outcome.status == "ReestablishFailed":
            self._record_failure(outcome)
            self.kb.q_table.set(node, state, proposed, 0.0)
            return self._entry(epoch, node, policy, proposed, "Failed", 0.0, state)
        return self._entry(epoch, node, policy, proposed, "Apply", reward, state)

    def decision_epoch(
        self, world: World, snapshot: PerceptionSnapshot, epoch: int
    ) -> List[ActionLogEntry]:
        """
        This method runs one decision of the agent on a complete perception snapshot.
        :param world: the world to act upon.
        :param snapshot: the perception snapshot of the last decision window.
        :param epoch: the current epoch.
        :return: the log entries of this decision.
        """
        graph: NetworkGraph = world.graph
        snapshot = correct_activity(
            snapshot, graph, self.engine.thresholds.activity_ratio
        )
        self.kb.perception.update(snapshot, graph)
        for (node, _), indicators in sorted(snapshot.radios.items()):
            record_channel_observation(
                self.kb.channel_location,
                graph.node(node).location,
                indicators.channel,
                indicators.utilization,
            )

        active: int = world.active_user_count()
        reward: float = snapshot.goodput
        if active > 0 and reward > self.best_reward:
            self.best_reward = reward
            self.best_graph = graph

        # rewards belong to the configuration that was in effect during the window
        in_effect: Dict[int, Tuple[int, List[Action]]] = {}
        for node in graph.managed_indices:
            state: int = graph.node(node).location.grid_index
            performed: List[Action] = [self.current_action(graph, node)]
            if node in self.pending_reposition:
                performed.append(self.pending_reposition.pop(node))
            in_effect[node] = (state, performed)

        entries: List[ActionLogEntry] = []
        for node in graph.managed_indices:
            if active > 0:
                state, performed = in_effect[node]
                self._learn(node, state, performed[0], reward)
                for action in performed[1:]:
                    q_update(
                        self.kb.q_table,
                        node,
                        state,
                        action,
                        reward,
                        self.engine.agent.eta,
                        self.engine.agent.gamma,
                    )

            record = world.graph.node(node)
            if record.role == "EXT":
                kind = engine_candidates.select_action_type(
                    record,
                    snapshot.backhaul_rssi.get(node),
                    self.kb.q_table,
                    self.engine.thresholds,
                    self.q_target,
                    self.engine.agent.relocation_patience,
                )
                if kind == "Reposition":
                    moved = self._relocate(world, snapshot, node, epoch, reward)
                    if moved is not None:
                        entries.append(moved)
                        continue

            if active == 0:
                entries.extend(self._try_zero_cost(world, node, epoch))
                continue

            decided = self._optimize_channels(world, snapshot, node, epoch, reward)
            if decided is not None:
                entries.append(decided)
        return entries


def agent_epoch(
    agent: Agent, world: World, snapshot: PerceptionSnapshot, epoch: int
) -> List[ActionLogEntry]:
    """
    This function runs one decision of the guided learner.
    """
    if not agent.engine.guided:
        raise InvalidInputError(
            "agent_epoch() needs an engine with guided exploration."
        )
    return agent.decision_epoch(world, snapshot, epoch)


def ugrl_epoch(
    agent: Agent, world: World, snapshot: PerceptionSnapshot, epoch: int
) -> List[ActionLogEntry]:
    """
    This function runs one decision of the unguided learner: plain Boltzmann sampling, greedy
    exploitation and no control gate.
    """
    if agent.engine.guided:
        raise InvalidInputError(
            "ugrl_epoch() needs an engine with unguided exploration."
        )
    return agent.decision_epoch(world, snapshot, epoch)

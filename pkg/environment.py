"""
This module contains the simulated world: class World, the counter types sensing reads, and the
evaluation of the steady state a configuration delivers.
"""

import logging
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple
import numpy
import phy
from network import NetworkGraph, path_of, validate_constraints
from data_types import (
    Action,
    ActionOutcomeStatus,
    ConstraintViolationError,
    ExternalAp,
    InvalidInputError,
    InvalidNodeError,
    Link,
    Location,
    NodeRecord,
    Path,
    ScenarioEvent,
    Transmitter,
)
from scenario import Scenario

logger = logging.getLogger(__name__)


class RadioCounters(NamedTuple):
    """
    Cumulative times of one radio, in milliseconds.
    """

    cb_time: float
    chrx_time: float
    chtx_time: float


class UserCounters(NamedTuple):
    """
    Cumulative counters of one user device.
    """

    n_retr: int
    n_err: int
    n_pack: int
    tx_bytes: int
    rx_bytes: int


class CounterBank(NamedTuple):
    """
    Counters of every managed radio, keyed by (node, radio index), and of every user device.
    """

    radios: Dict[Tuple[int, int], RadioCounters]
    users: Dict[int, UserCounters]


class LinkState(NamedTuple):
    """
    Steady state of one link. rates are in bits/second, utilization in percent.
    """

    link: Link
    rssi: float
    rmax: float
    airtime: float
    utilization: float
    error_rate: float
    rate: float


class Evaluation(NamedTuple):
    """
    Steady state delivered by a configuration. links is keyed by the child of each link;
    throughput values are in bits/second; user_error is the path packet error probability.
    """

    links: Dict[int, LinkState]
    transmitters: Tuple[Transmitter, ...]
    user_throughput: Dict[int, float]
    user_error: Dict[int, float]
    objective: float


class ActionOutcome(NamedTuple):
    """
    Result of apply_action(). failed lists the (location, channel) pairs found saturated.
    """

    status: ActionOutcomeStatus
    failed: Tuple[Tuple[Location, int], ...] = ()


class TrialResult(NamedTuple):
    """
    Result of a zero-cost trial. reward is in Mbps; observations are (location, channel,
    utilization) triples sensed by the tried radios.
    """

    reward: float
    observations: Tuple[Tuple[Location, int, float], ...]
    failed: Tuple[Tuple[Location, int], ...] = ()


def add_counters(bank: CounterBank, deltas: CounterBank) -> CounterBank:
    """
    :return: the componentwise sum of two counter banks with the same keys.
    """
    radios = {
        key: RadioCounters(*(a + b for a, b in zip(value, deltas.radios[key])))
        for key, value in bank.radios.items()
    }
    users = {
        key: UserCounters(*(a + b for a, b in zip(value, deltas.users[key])))
        for key, value in bank.users.items()
    }
    return CounterBank(radios=radios, users=users)


def zero_counters(graph: NetworkGraph) -> CounterBank:
    """
    :return: a counter bank with every counter of the graph at zero.
    """
    radios = {
        (record.index, radio): RadioCounters(0.0, 0.0, 0.0)
        for record in graph.nodes
        if record.role != "user"
        for radio in range(record.radio_count)
    }
    users = {user: UserCounters(0, 0, 0, 0, 0) for user in graph.user_indices}
    return CounterBank(radios=radios, users=users)


class World:
    """
    The class World is one simulated environment: the managed mesh, the external APs, the
    current demands and the cumulative counters. One instance is confined to one run.
    """

    def __init__(self, scenario: Scenario, rng: numpy.random.Generator) -> None:
        self.scenario: Scenario = scenario
        self.rng: numpy.random.Generator = rng
        self.graph: NetworkGraph = scenario.initial_graph
        self.external: Dict[str, ExternalAp] = {
            item.label: item for item in scenario.external_aps
        }
        self.demands: Dict[int, float] = dict(scenario.nominal_demands)
        self.counters: CounterBank = zero_counters(self.graph)
        self.epoch: int = 0
        self.last_evaluation: Evaluation = self.evaluate()

    # ------------------------------------------------------------------
    # steady-state evaluation

    def active_user_count(self) -> int:
        """
        :return: the number of users currently requesting traffic.
        """
        return sum(1 for demand in self.demands.values() if demand > 0)

    def external_transmitters(self) -> List[Transmitter]:
        """
        :return: the active external APs as transmitters, in scenario order.
        """
        transmitters: List[Transmitter] = []
        for external in self.external.values():
            if not external.active:
                continue
            rmax: float = phy.link_rmax(
                self.scenario.rssi(external.location, external.client_location),
                self.scenario.phy,
            )
            airtime: float = (
                1.0 if rmax <= 0 else min(1.0, external.offered_load / rmax)
            )
            transmitters.append(
                Transmitter(
                    location=external.location,
                    channel=external.channel,
                    airtime=airtime,
                )
            )
        return transmitters

    def sensed_utilization(
        self, location: Location, channel: int, transmitters: Sequence[Transmitter]
    ) -> float:
        """
        This method sums the airtime of every transmitter heard at location (above the CCA
        threshold), weighted by channel overlap.
        :return: utilization in percent, in [0, 100].
        """
        total: float = 0.0
        for transmitter in transmitters:
            if (
                self.scenario.rssi(transmitter.location, location)
                >= self.scenario.phy.cca_threshold
            ):
                total += transmitter.airtime * phy.overlap(transmitter.channel, channel)
        return min(max(total * 100, 0.0), 100.0)

    def evaluate(
        self,
        graph: Optional[NetworkGraph] = None,
        demands: Optional[Dict[int, float]] = None,
    ) -> Evaluation:
        """
        This method computes the steady state a configuration delivers. A managed link occupies
        airtime load / rmax, where load is the demand of the users it carries; its rate is the
        maximal throughput discounted by the utilization other transmitters cause at its
        receiver, times the fraction of packets that survive hidden transmitters.
        :param graph: configuration to evaluate; the current one by default.
        :param demands: user demands in bits/second; the current ones by default.
        :return: the evaluation.
        """
        graph = self.graph if graph is None else graph
        demands = self.demands if demands is None else demands

        paths: Dict[int, Path] = {
            user: path_of(user, graph) for user in graph.user_indices
        }
        loads: Dict[Link, float] = {}
        sharers: Dict[Link, int] = {}
        for user, path in paths.items():
            for link in path.links:
                loads[link] = loads.get(link, 0.0) + demands[user]
                if demands[user] > 0:
                    sharers[link] = sharers.get(link, 0) + 1

        managed: List[Transmitter] = []
        geometry: Dict[Link, Tuple[float, float]] = {}
        for link in graph.links():
            sender: Location = graph.node(link.parent).location
            receiver: Location = graph.node(link.child).location
            rssi: float = self.scenario.rssi(sender, receiver)
            rmax: float = phy.link_rmax(rssi, self.scenario.phy)
            load: float = loads.get(link, 0.0)
            if load <= 0:
                airtime = 0.0
            else:
                airtime = 1.0 if rmax <= 0 else min(1.0, load / rmax)
            geometry[link] = (rssi, rmax)
            managed.append(Transmitter(sender, link.channel, airtime, link))

        transmitters: Tuple[Transmitter, ...] = tuple(
            self.external_transmitters() + managed
        )

        states: Dict[int, LinkState] = {}
        rates: Dict[Link, float] = {}
        for own in managed:
            link = own.link
            assert link is not None
            others = [item for item in transmitters if item.link != link]
            receiver = graph.node(link.child).location
            utilization: float = self.sensed_utilization(receiver, link.channel, others)
            error_rate: float = self.scenario.link_error_rate(
                own.location, receiver, link.channel, others
            )
            rssi, rmax = geometry[link]
            rate: float = phy.link_throughput(rmax, utilization) * (1 - error_rate)
            rates[link] = rate
            states[link.child] = LinkState(
                link, rssi, rmax, own.airtime, utilization, error_rate, rate
            )

        user_throughput: Dict[int, float] = {}
        user_error: Dict[int, float] = {}
        for user, path in paths.items():
            user_throughput[user] = phy.end_to_end_throughput(
                path, rates, demands[user], sharers
            )
            survival: float = 1.0
            for link in path.links:
                survival *= 1 - states[link.child].error_rate
            user_error[user] = 1 - survival

        return Evaluation(
            links=states,
            transmitters=transmitters,
            user_throughput=user_throughput,
            user_error=user_error,
            objective=sum(user_throughput.values()),
        )

    def ground_truth_utilization(self, location: Location, channel: int) -> float:
        """
        This method returns the utilization (percent) of a channel at a location, caused by every
        active transmitter of the current configuration.
        """
        if not 1 <= channel <= self.scenario.n_channels:
            raise InvalidInputError(f"No such channel: {channel}")
        return self.sensed_utilization(location, channel, self.evaluate().transmitters)

    # ------------------------------------------------------------------
    # time

    def _apply_event(self, event: ScenarioEvent) -> None:
        if event.kind == "ActivateExternal":
            label = str(event.target)
            self.external[label] = self.external[label]._replace(active=True)
        elif event.kind == "DeactivateExternal":
            label = str(event.target)
            self.external[label] = self.external[label]._replace(active=False)
        elif event.kind == "MoveUser":
            assert event.location is not None
            self.graph = self.graph.with_location(int(event.target), event.location)
        elif event.kind == "SetDemand":
            assert event.demand is not None
            self.demands[int(event.target)] = event.demand
        else:
            raise ValueError(f"No such event kind: {event.kind}")
        logger.info("epoch %s: %s %s", event.epoch, event.kind, event.target)

    def _radio_involved(
        self, record: NodeRecord, radio: int, link: Optional[Link]
    ) -> str:
        # "tx" if the radio sends on the link, "rx" if it receives, "" otherwise
        if link is None:
            return ""
        if link.parent == record.index and record.serving_radio == radio:
            return "tx"
        if link.child == record.index and record.uplink_radio == radio:
            return "rx"
        return ""

    def radio_utilization(
        self, record: NodeRecord, radio: int, evaluation: Evaluation
    ) -> Tuple[float, float, float]:
        """
        This method returns what one radio senses under an evaluation.
        :return: (busy fraction, transmit fraction, receive fraction), all in [0, 1]. The busy
        fraction includes the radio's own activity.
        """
        transmit: float = 0.0
        receive: float = 0.0
        others: List[Transmitter] = []
        for transmitter in evaluation.transmitters:
            role: str = self._radio_involved(record, radio, transmitter.link)
            if role == "tx":
                transmit += transmitter.airtime
            elif role == "rx":
                receive += transmitter.airtime
            else:
                others.append(transmitter)
        activity: float = transmit + receive
        if activity > 1:
            transmit, receive, activity = transmit / activity, receive / activity, 1.0
        external: float = (
            self.sensed_utilization(record.location, record.channels[radio], others)
            / 100
        )
        return min(1.0, external + activity), transmit, receive

    def step(self, epoch: int) -> CounterBank:
        """
        This method advances the world by one sensing epoch of tau milliseconds: it applies the
        events of the epoch, evaluates the configuration and advances the cumulative counters.
        :param epoch: the epoch number.
        :return: the counter deltas of this epoch.
        """
        self.epoch = epoch
        for event in self.scenario.events_at(epoch):
            self._apply_event(event)

        evaluation: Evaluation = self.evaluate()
        self.last_evaluation = evaluation
        tau: float = self.scenario.tau_ms

        radios: Dict[Tuple[int, int], RadioCounters] = {}
        for index in self.graph.managed_indices:
            record = self.graph.node(index)
            for radio in range(record.radio_count):
                busy, transmit, receive = self.radio_utilization(
                    record, radio, evaluation
                )
                radios[(index, radio)] = RadioCounters(
                    cb_time=busy * tau,
                    chrx_time=receive * tau,
                    chtx_time=transmit * tau,
                )

        users: Dict[int, UserCounters] = {}
        seconds: float = tau / 1000
        for user in self.graph.user_indices:
            packets: int = int(
                round(self.demands[user] * seconds / (8 * self.scenario.packet_bytes))
            )
            error: float = evaluation.user_error[user]
            retries_fraction: float = 1.0 if error >= 0.5 else error / (1 - error)
            users[user] = UserCounters(
                n_retr=int(round(retries_fraction * packets)),
                n_err=int(round(error * packets)),
                n_pack=packets,
                tx_bytes=0,
                rx_bytes=int(round(evaluation.user_throughput[user] * seconds / 8)),
            )

        deltas = CounterBank(radios=radios, users=users)
        self.counters = add_counters(self.counters, deltas)
        logger.debug(
            "epoch %s: objective %.3f Mbps", epoch, evaluation.objective / 1e6
        )
        return deltas

    # ------------------------------------------------------------------
    # actions

    def candidate_graph(self, action: Action) -> NetworkGraph:
        """
        This method returns the configuration an action would produce, after synchronizing link
        endpoints, without applying it.
        """
        record: NodeRecord = self.graph.node(action.node)
        if record.role == "user":
            raise InvalidNodeError(f"Node {action.node} is a user device.")

        if action.kind == "ChannelConfig":
            if action.channels is None or len(action.channels) != record.radio_count:
                raise InvalidInputError(
                    f"Node {action.node} needs {record.radio_count} channels: {action}"
                )
            candidate = self.graph.with_channels(action.node, action.channels)
            candidate = candidate.synchronized(action.node)
        elif action.kind == "Reposition":
            if record.role != "EXT":
                raise InvalidNodeError("Only extenders can be repositioned.")
            target = action.target
            if target is None or not self.scenario.area.contains(target.x, target.y):
                raise InvalidInputError(
                    f"Reposition target is outside the area: {target}"
                )
            if self.scenario.grid.snap(target.x, target.y) != target:
                raise InvalidInputError(
                    f"Reposition target is not a grid point: {target}"
                )
            candidate = self.graph.with_location(action.node, target)
        else:
            raise ValueError(f"No such action kind: {action.kind}")

        violations = validate_constraints(candidate)
        if violations:
            raise ConstraintViolationError(violations)
        return candidate

    def failed_channels(self, graph: NetworkGraph) -> Tuple[Tuple[Location, int], ...]:
        """
        This method finds link channels on which links could not be re-established: external
        utilization at a managed endpoint reaches the failure threshold.
        :return: the saturated (location, channel) pairs, in link order.
        """
        externals = self.external_transmitters()
        threshold: float = self.scenario.sentinel.failure_utilization
        failed: List[Tuple[Location, int]] = []
        for link in graph.links():
            for endpoint in (link.parent, link.child):
                record = graph.node(endpoint)
                if record.role == "user":
                    continue
                pair = (record.location, link.channel)
                if pair in failed:
                    continue
                if (
                    self.sensed_utilization(record.location, link.channel, externals)
                    >= threshold
                ):
                    failed.append(pair)
        return tuple(failed)

    def restore(self, fallback: NetworkGraph) -> None:
        """
        This method restores the channels and locations of managed nodes from a fallback
        configuration. User devices keep their current locations.
        """
        graph: NetworkGraph = self.graph
        for index in graph.managed_indices:
            saved = fallback.node(index)
            graph = graph.with_node(
                graph.node(index)._replace(
                    channels=saved.channels, location=saved.location
                )
            )
        self.graph = graph.synchronized(0)

    def apply_action(
        self, action: Action, fallback: Optional[NetworkGraph] = None
    ) -> ActionOutcome:
        """
        This method applies an action. If links cannot be re-established afterwards, the
        configuration is reverted to fallback (or to the configuration before the action).
        :param action: the action.
        :param fallback: the best-known configuration.
        :return: the outcome.
        """
        previous: NetworkGraph = self.graph
        candidate: NetworkGraph = self.candidate_graph(action)
        failed = self.failed_channels(candidate)
        if failed:
            self.restore(fallback if fallback is not None else previous)
            logger.warning(
                "epoch %s: re-establishment failed for %s on %s",
                self.epoch,
                action,
                [channel for _, channel in failed],
            )
            return ActionOutcome(status="ReestablishFailed", failed=failed)
        self.graph = candidate
        logger.debug("epoch %s: applied %s", self.epoch, action)
        return ActionOutcome(status="Applied")

    def try_action(self, action: Action) -> TrialResult:
        """
        This method tries a configuration while no user requests traffic and switches back to
        the former one, leaving the world unchanged. The reward is the steady-state throughput
        (Mbps) the configuration would deliver at nominal demand.
        """
        candidate: NetworkGraph = self.candidate_graph(action)
        failed = self.failed_channels(candidate)
        if failed:
            return TrialResult(reward=0.0, observations=(), failed=failed)
        evaluation = self.evaluate(candidate, self.scenario.nominal_demands)
        record = candidate.node(action.node)
        observations = tuple(
            (
                record.location,
                record.channels[radio],
                self.radio_utilization(record, radio, evaluation)[0] * 100,
            )
            for radio in range(record.radio_count)
        )
        return TrialResult(reward=evaluation.objective / 1e6, observations=observations)

    def measure_rssi(self, tx: int, rx_location: Location) -> float:
        """
        :return: RSSI (dBm) of the beacons of node tx measured at rx_location.
        """
        return self.scenario.measured_rssi(
            self.graph.node(tx).location, rx_location, self.rng
        )

    def measure_backhaul_rssi(self) -> Dict[int, float]:
        """
        :return: for every extender, the RSSI of its beacons measured at its parent.
        """
        measurements: Dict[int, float] = {}
        for index in self.graph.managed_indices:
            record = self.graph.node(index)
            if record.parent is not None:
                measurements[index] = self.measure_rssi(
                    index, self.graph.node(record.parent).location
                )
        return measurements

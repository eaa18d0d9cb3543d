"""
This module contains class Scenario only.
"""

import logging
from typing import Dict, List, Iterable, Tuple, cast
import numpy
import phy
import scenario_candidates
from network import LocationGrid, NetworkGraph, validate_constraints
from data_types import (
    ConstraintViolationError,
    ErrorModelOption,
    ExternalAp,
    InvalidInputError,
    Location,
    LogDistanceShadowing,
    PropagationOption,
    ScenarioEvent,
    ScenarioOptions,
    ScenarioParameters,
    SentinelPolicy,
    Transmitter,
    TriggerThresholds,
)

logger = logging.getLogger(__name__)


class Scenario:
    """
    The class Scenario describes our assumptions on the world: the area and candidate locations,
    the PHY, the initial mesh, the external APs, the user demands and the timed events.
    They describe the environment the agent lives in, but are NOT part of our design space.
    """

    def __init__(
        self, parameters: ScenarioParameters, options: ScenarioOptions
    ) -> None:

        # unpacking parameters

        self.name: str = parameters.name
        self.area = parameters.area
        # every node, external AP and client must stand inside the enclosure
        self.enclosure = parameters.enclosure
        self.grid: LocationGrid = LocationGrid(parameters.area, parameters.grid_spacing)
        self.n_channels: int = parameters.n_channels
        phy.validate_phy_params(parameters.phy)
        self.phy = parameters.phy

        # length of one sensing epoch in milliseconds, and number of epochs of a run
        self.tau_ms: float = parameters.tau_ms
        self.epochs: int = parameters.epochs
        self.sentinel: SentinelPolicy = parameters.sentinel
        self.packet_bytes: int = parameters.packet_bytes

        if self.tau_ms <= 0:
            raise InvalidInputError("tau_ms must be positive.")
        if self.epochs < 1:
            raise InvalidInputError("A run needs at least one epoch.")
        if self.sentinel.samples_per_decision < 1:
            raise InvalidInputError("samples_per_decision must be at least 1.")

        self.initial_graph: NetworkGraph = NetworkGraph(
            parameters.nodes, parameters.area, parameters.n_channels
        )
        violations = validate_constraints(self.initial_graph)
        if violations:
            raise ConstraintViolationError(violations)

        for record in self.initial_graph.nodes:
            self._check_placement(record.location, f"node {record.index}")
            if record.role != "user":
                expected: Location = self.grid.snap(
                    record.location.x, record.location.y
                )
                if expected != record.location:
                    raise InvalidInputError(
                        f"Managed node {record.index} must stand on a candidate location "
                        f"inside the area, got {record.location}."
                    )

        self.nominal_demands: Dict[int, float] = {}
        for user in self.initial_graph.user_indices:
            if user not in parameters.demands:
                raise InvalidInputError(f"No demand declared for user {user}.")
            if parameters.demands[user] < 0:
                raise InvalidInputError(f"Negative demand for user {user}.")
            self.nominal_demands[user] = parameters.demands[user]

        self.external_aps: Tuple[ExternalAp, ...] = parameters.external_aps
        labels = [item.label for item in self.external_aps]
        if len(set(labels)) != len(labels):
            raise InvalidInputError("External AP labels must be unique.")
        for external in self.external_aps:
            self._check_placement(external.location, f"external AP {external.label}")
            self._check_placement(
                external.client_location, f"client of external AP {external.label}"
            )
            if not 1 <= external.channel <= self.n_channels:
                raise InvalidInputError(
                    f"External AP {external.label} uses an unavailable channel."
                )

        self.timeline: Tuple[ScenarioEvent, ...] = parameters.timeline
        for previous, current in zip(self.timeline, self.timeline[1:]):
            if current.epoch < previous.epoch:
                raise InvalidInputError("Timeline epochs must be non-decreasing.")
        for event in self.timeline:
            self._check_event(event, set(labels))

        # unpacking and setting options
        # option_propagation decides how RSSI is measured; ground truth is always log-distance.
        # option_error_model decides how packet errors on links arise.
        self.option_propagation: PropagationOption = options.propagation
        self.option_error_model: ErrorModelOption = options.error_model

    def _check_placement(self, location: Location, what: str) -> None:
        if not self.enclosure.contains(location.x, location.y):
            raise InvalidInputError(f"{what} stands outside the enclosure.")

    def _check_event(self, event: ScenarioEvent, labels: set) -> None:
        if event.kind in ("ActivateExternal", "DeactivateExternal"):
            if event.target not in labels:
                raise InvalidInputError(
                    f"Event targets unknown external AP: {event.target}"
                )
        elif event.kind in ("MoveUser", "SetDemand"):
            if event.target not in self.initial_graph.user_indices:
                raise InvalidInputError(f"Event targets unknown user: {event.target}")
            if event.kind == "MoveUser":
                if event.location is None:
                    raise InvalidInputError("MoveUser needs a location.")
                self._check_placement(event.location, f"user {event.target}")
            if event.kind == "SetDemand" and (event.demand is None or event.demand < 0):
                raise InvalidInputError("SetDemand needs a non-negative demand.")
        else:
            raise ValueError(f"No such event kind: {event.kind}")

    def rssi(self, tx_location: Location, rx_location: Location) -> float:
        """
        This method returns the ground-truth RSSI between two points.
        :param tx_location: transmitter location.
        :param rx_location: receiver location.
        :return: RSSI in dBm.
        """
        if self.option_propagation["method"] in ("LogDistance", "LogDistanceShadowing"):
            return scenario_candidates.log_distance(tx_location, rx_location, self.phy)
        raise ValueError(
            f"No such option to produce RSSI: {self.option_propagation['method']}"
        )

    def measured_rssi(
        self, tx_location: Location, rx_location: Location, rng: numpy.random.Generator
    ) -> float:
        """
        This method returns the RSSI as a node measures it.
        :param tx_location: transmitter location.
        :param rx_location: receiver location.
        :param rng: random generator of the world.
        :return: RSSI in dBm.
        """
        if self.option_propagation["method"] == "LogDistance":
            return scenario_candidates.log_distance(tx_location, rx_location, self.phy)
        if self.option_propagation["method"] == "LogDistanceShadowing":
            shadowing = cast(LogDistanceShadowing, self.option_propagation)
            return scenario_candidates.log_distance_shadowing(
                tx_location, rx_location, self.phy, shadowing["sigma"], rng
            )
        raise ValueError(
            f"No such option to measure RSSI: {self.option_propagation['method']}"
        )

    def link_error_rate(
        self,
        sender: Location,
        receiver: Location,
        channel: int,
        transmitters: Iterable[Transmitter],
    ) -> float:
        """
        This method returns the packet error rate of a directed link.
        :param sender: location of the sender.
        :param receiver: location of the receiver.
        :param channel: channel of the link.
        :param transmitters: every other transmitter in the world.
        :return: packet error rate in [0, 1].
        """
        if self.option_error_model["method"] == "HiddenNode":
            return scenario_candidates.hidden_node_error(
                sender, receiver, channel, transmitters, self.phy
            )
        if self.option_error_model["method"] == "ErrorFree":
            return scenario_candidates.error_free(
                sender, receiver, channel, transmitters, self.phy
            )
        raise ValueError(
            f"No such option to produce link errors: {self.option_error_model['method']}"
        )

    def events_at(self, epoch: int) -> List[ScenarioEvent]:
        """
        :return: the events scheduled at epoch, in timeline order.
        """
        return [event for event in self.timeline if event.epoch == epoch]

    def phase_boundaries(self) -> List[int]:
        """
        :return: the distinct epochs (> 0) at which events happen; each starts a new phase.
        """
        return sorted({event.epoch for event in self.timeline if event.epoch > 0})

    def q_target(self, thresholds: TriggerThresholds) -> float:
        """
        :return: the target Q-value in Mbps. Unless set explicitly, it is half of the aggregate
        nominal demand.
        """
        if thresholds.q_target is not None:
            return thresholds.q_target
        return 0.5 * sum(self.nominal_demands.values()) / 1e6

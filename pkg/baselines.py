"""
This module contains the comparison schemes (best single channel, common channel assignment,
CLICA-style greedy coloring of a conflict graph) and the exhaustive brute-force oracle.
"""

import itertools
import logging
import math
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple
import networkx
from networkx.utils import UnionFind
import numpy
import phy
from environment import World
from network import NetworkGraph, validate_constraints
from data_types import (
    BruteForceResult,
    BudgetExceededError,
    ChannelAssignment,
    InvalidInputError,
    Link,
    Location,
    SingleChannelResult,
    Violation,
)

logger = logging.getLogger(__name__)

ORTHOGONAL_CHANNELS: Tuple[int, ...] = (1, 6, 11)
BRUTE_FORCE_BUDGET: int = 1_000_000

RadioKey = Tuple[int, int]


def configure(
    graph: NetworkGraph,
    assignment: ChannelAssignment,
    locations: Optional[Dict[int, Location]] = None,
    synchronize: bool = False,
) -> NetworkGraph:
    """
    This function installs channels (and optionally locations) on the managed nodes of a graph.
    User devices always follow their parent's serving channel. With synchronize=True every
    child radio is retuned top-down to its parent's serving channel as well.
    """
    for node, channels in assignment.items():
        graph = graph.with_channels(node, channels)
    for node, location in (locations or {}).items():
        graph = graph.with_location(node, location)
    if synchronize:
        return graph.synchronized(0)
    for user in graph.user_indices:
        record = graph.node(user)
        if record.parent is None:
            continue
        parent = graph.node(record.parent)
        if parent.serving_radio is not None and record.uplink_radio is not None:
            channels = list(record.channels)
            channels[record.uplink_radio] = parent.channels[parent.serving_radio]
            graph = graph.with_channels(user, tuple(channels))
    return graph


def assignment_of(graph: NetworkGraph) -> ChannelAssignment:
    """
    :return: the channels of every managed node of a graph.
    """
    return {node: graph.node(node).channels for node in graph.managed_indices}


def best_single_channel(world: World) -> SingleChannelResult:
    """
    This function puts every managed radio on the same channel c, for each c in [1, N], and
    returns the channel with the highest steady-state objective (lowest channel on ties).
    """
    graph: NetworkGraph = world.graph
    best: Optional[SingleChannelResult] = None
    for channel in range(1, world.scenario.n_channels + 1):
        candidate = configure(
            graph,
            {
                node: (channel,) * graph.node(node).radio_count
                for node in graph.managed_indices
            },
        )
        objective: float = world.evaluate(candidate).objective
        if best is None or objective > best.objective:
            best = SingleChannelResult(channel=channel, objective=objective)
    assert best is not None
    logger.debug("single channel baseline: channel %s", best.channel)
    return best


def cca_assign(world: World, rng: numpy.random.Generator) -> ChannelAssignment:
    """
    This function draws a random ordered pair (fronthaul, backhaul) of orthogonal channels and
    applies it identically across the mesh: uplink and mAP serving radios take the backhaul
    channel, extender serving radios the fronthaul channel.
    """
    orthogonal: List[int] = [
        channel
        for channel in ORTHOGONAL_CHANNELS
        if channel <= world.scenario.n_channels
    ]
    if len(orthogonal) < 2:
        raise InvalidInputError(
            "Common channel assignment needs two orthogonal channels."
        )
    pairs: List[Tuple[int, int]] = list(itertools.permutations(orthogonal, 2))
    fronthaul, backhaul = pairs[int(rng.integers(len(pairs)))]

    graph: NetworkGraph = world.graph
    assignment: ChannelAssignment = {}
    for node in graph.managed_indices:
        record = graph.node(node)
        channels: List[int] = [backhaul] * record.radio_count
        if record.role == "EXT" and record.serving_radio is not None:
            channels[record.serving_radio] = fronthaul
        if record.uplink_radio is not None:
            channels[record.uplink_radio] = backhaul
        assignment[node] = tuple(channels)
    return assignment_of(configure(graph, assignment, synchronize=True))


# ==================
# CLICA
# ==================


class RadioGroup(NamedTuple):
    """
    Managed radios that must share one channel, and the links they carry.
    """

    radios: FrozenSet[RadioKey]
    links: List[Link]


def radio_groups(graph: NetworkGraph) -> Dict[RadioKey, RadioGroup]:
    """
    This function groups managed radios that must share one channel: the serving radio of a
    parent and the uplink radios of its managed children. Each group is keyed by its smallest
    radio.
    """
    union = UnionFind()
    carried: Dict[RadioKey, List[Link]] = {}
    for link in graph.links():
        parent = graph.node(link.parent)
        if parent.serving_radio is None:
            continue
        serving: RadioKey = (parent.index, parent.serving_radio)
        union.union(serving)
        carried.setdefault(serving, []).append(link)
        child = graph.node(link.child)
        if child.role != "user" and child.uplink_radio is not None:
            union.union(serving, (child.index, child.uplink_radio))

    groups: Dict[RadioKey, RadioGroup] = {}
    for members in union.to_sets():
        links: List[Link] = []
        for radio in sorted(members):
            links.extend(carried.get(radio, []))
        groups[min(members)] = RadioGroup(
            radios=frozenset(members), links=sorted(links)
        )
    return groups


def _interference(
    world: World, graph: NetworkGraph, sender_link: Link, victim_link: Link
) -> float:
    # normalized interference power I / (I + S) at the victim's receiver
    receiver: Location = graph.node(victim_link.child).location
    signal: float = 10 ** (
        world.scenario.rssi(graph.node(victim_link.parent).location, receiver) / 10
    )
    noise: float = 10 ** (
        world.scenario.rssi(graph.node(sender_link.parent).location, receiver) / 10
    )
    return noise / (noise + signal)


def conflict_graph(world: World, graph: NetworkGraph) -> networkx.Graph:
    """
    This function builds the conflict graph of the radio groups under the physical model. The
    weight of an edge is the mean normalized interference power the links of one group induce
    at the receivers of the other's links.
    """
    groups: Dict[RadioKey, RadioGroup] = radio_groups(graph)
    conflicts = networkx.Graph()
    conflicts.add_nodes_from(sorted(groups))
    for first, second in itertools.combinations(sorted(groups), 2):
        weight: float = 0.0
        for link_a in groups[first].links:
            for link_b in groups[second].links:
                weight += (
                    _interference(world, graph, link_a, link_b)
                    + _interference(world, graph, link_b, link_a)
                ) / 2
        if weight > 0:
            conflicts.add_edge(first, second, weight=weight)
    return conflicts


def _external_cost(
    world: World, graph: NetworkGraph, links: Sequence[Link], channel: int
) -> float:
    cost: float = 0.0
    for transmitter in world.external_transmitters():
        for link in links:
            receiver: Location = graph.node(link.child).location
            signal: float = 10 ** (
                world.scenario.rssi(graph.node(link.parent).location, receiver) / 10
            )
            noise: float = 10 ** (
                world.scenario.rssi(transmitter.location, receiver) / 10
            )
            cost += (
                noise / (noise + signal)
                * transmitter.airtime
                * phy.overlap(transmitter.channel, channel)
            )
    return cost


def clica_assign(world: World) -> ChannelAssignment:
    """
    This function is an approximation of connected low-interference channel assignment: the
    radio groups are colored greedily in descending weighted degree, each taking the channel
    with the lowest interference cost toward already colored groups and external APs (lowest
    channel on ties). If the result breaks a constraint, links are synchronized top-down.
    """
    graph: NetworkGraph = world.graph
    groups: Dict[RadioKey, RadioGroup] = radio_groups(graph)
    conflicts = conflict_graph(world, graph)
    n_channels: int = world.scenario.n_channels

    degree: Dict[RadioKey, float] = {
        key: conflicts.degree(key, weight="weight")
        + sum(
            _external_cost(world, graph, groups[key].links, channel)
            for channel in range(1, n_channels + 1)
        )
        for key in groups
    }
    order: List[RadioKey] = sorted(groups, key=lambda key: (-degree[key], key))

    colors: Dict[RadioKey, int] = {}
    for key in order:
        costs: List[float] = []
        for channel in range(1, n_channels + 1):
            cost: float = _external_cost(world, graph, groups[key].links, channel)
            for neighbor in conflicts.neighbors(key):
                if neighbor in colors:
                    cost += conflicts[key][neighbor]["weight"] * phy.overlap(
                        colors[neighbor], channel
                    )
            costs.append(cost)
        colors[key] = 1 + int(numpy.argmin(costs))

    assignment: ChannelAssignment = {}
    for node in graph.managed_indices:
        channels: List[int] = list(graph.node(node).channels)
        for key, color in colors.items():
            for member_node, radio in groups[key].radios:
                if member_node == node:
                    channels[radio] = color
        assignment[node] = tuple(channels)

    candidate: NetworkGraph = configure(graph, assignment)
    if validate_constraints(candidate):
        logger.warning("CLICA coloring broke a constraint, synchronizing links")
        candidate = configure(graph, assignment, synchronize=True)
    return assignment_of(candidate)


# ==================
# brute force
# ==================


def search_space_size(
    graph: NetworkGraph,
    location_count: int,
    channel_count: int,
    diagonal_only: bool = False,
) -> int:
    """
    :return: |L|^M times the product over managed nodes of |C|^(radios), or |L|^M * |C| for the
    diagonal set (every radio on the same channel).
    """
    locations: int = location_count ** graph.num_extenders
    if diagonal_only:
        return locations * channel_count
    return locations * math.prod(
        channel_count ** graph.node(node).radio_count for node in graph.managed_indices
    )


def brute_force_optimum(
    world: World,
    location_set: Sequence[Location],
    channel_set: Sequence[int],
    diagonal_only: bool = False,
    budget: int = BRUTE_FORCE_BUDGET,
) -> BruteForceResult:
    """
    This function visits every (extender locations, channels) configuration and evaluates the
    steady-state objective of the feasible ones.
    :param world: the world; its current demands and external APs are used.
    :param location_set: candidate locations of every extender.
    :param channel_set: channels every radio may take.
    :param diagonal_only: restrict to configurations with all radios on one channel.
    :param budget: largest number of configurations to visit.
    :return: the best configuration (first visited on ties) with visit counts.
    """
    graph: NetworkGraph = world.graph
    if not location_set or not channel_set:
        raise InvalidInputError("Location and channel sets cannot be empty.")
    required: int = search_space_size(
        graph, len(location_set), len(channel_set), diagonal_only
    )
    if required > budget:
        logger.warning("brute force refused: %s configurations", required)
        raise BudgetExceededError(required, budget)

    extenders: List[int] = [
        node for node in graph.managed_indices if graph.node(node).role == "EXT"
    ]
    managed: List[int] = graph.managed_indices

    if diagonal_only:
        channel_options: List[ChannelAssignment] = [
            {node: (channel,) * graph.node(node).radio_count for node in managed}
            for channel in channel_set
        ]
    else:
        per_node = [
            list(itertools.product(channel_set, repeat=graph.node(node).radio_count))
            for node in managed
        ]
        channel_options = [
            dict(zip(managed, combination))
            for combination in itertools.product(*per_node)
        ]

    best_objective: float = float("-inf")
    best_locations: Optional[Dict[int, Location]] = None
    best_channels: Optional[ChannelAssignment] = None
    evaluations: int = 0
    feasible: int = 0
    first_violations: List[Violation] = []

    for placement in itertools.product(location_set, repeat=len(extenders)):
        locations: Dict[int, Location] = dict(zip(extenders, placement))
        for assignment in channel_options:
            evaluations += 1
            candidate = configure(graph, assignment, locations)
            violations = validate_constraints(candidate)
            if violations:
                if evaluations == 1:
                    first_violations = violations
                continue
            feasible += 1
            objective: float = world.evaluate(candidate).objective
            if objective > best_objective:
                best_objective = objective
                best_locations = locations
                best_channels = dict(assignment)

    logger.info("brute force: %s configurations, %s feasible", evaluations, feasible)
    return BruteForceResult(
        best_locations=best_locations,
        best_channels=best_channels,
        best_objective=best_objective if feasible else 0.0,
        evaluations=evaluations,
        feasible=feasible,
        violations=first_violations if not feasible else [],
    )

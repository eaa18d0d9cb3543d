"""
This module contains all possible realizations of functions in the Engine class, together with
the guidance terms and the policies they are built from. Functions here are pure except for
the explicit random generator arguments.
"""

import math
from typing import List, NamedTuple, Optional, Sequence, Set, Tuple
import numpy
from network import LocationGrid, NetworkGraph
from knowledge_base import ChannelLocationTable, QTable
from data_types import (
    Action,
    ActionType,
    GateVerdict,
    InvalidInputError,
    InvalidNodeError,
    Location,
    NodeRecord,
    PreconditionError,
    TriggerThresholds,
)

OVERLAP_SPAN: int = 5


class GuidanceTerms(NamedTuple):
    """
    Channel diversity, utilization impact, hidden-node impact and contention impact of one
    candidate channel configuration.
    """

    cd: float
    ui: float
    hi: float
    ci: float


# ==================
# guidance terms
# ==================


def channel_diversity(channels: Sequence[int]) -> float:
    """
    This function calculates the channel diversity of a configuration:
    1 + sum over ordered radio pairs (d, d' != d) of |h_d - h_d'|.
    It is 1 iff all radios share one channel.
    """
    return 1 + sum(
        abs(first - second)
        for position, first in enumerate(channels)
        for other, second in enumerate(channels)
        if position != other
    )


def _sensed(table: ChannelLocationTable, grid_index: int, channel: int) -> float:
    value: Optional[float] = table.get(grid_index, channel)
    return 0.0 if value is None else value


def utilization_impact(
    channels: Sequence[int], location: Location, table: ChannelLocationTable
) -> float:
    """
    :return: the sum of the utilization recorded at the location on every channel of the
    configuration. Empty entries count 0.
    """
    return sum(_sensed(table, location.grid_index, channel) for channel in channels)


def hidden_node_impact(
    channels: Sequence[int],
    record: NodeRecord,
    graph: NetworkGraph,
    table: ChannelLocationTable,
) -> float:
    """
    This function measures the utilization asymmetry between the two ends of every link of a
    node, on the channel the configuration gives the link: sum of |u(h, l_i) - u(h, l_j)| * 100.
    Links to user devices and links with an unsensed end count 0.
    """
    ends: List[Tuple[int, int]] = []
    if record.parent is not None and record.uplink_radio is not None:
        ends.append((record.parent, channels[record.uplink_radio]))
    if record.serving_radio is not None:
        for child in graph.children(record.index):
            if graph.node(child).role != "user":
                ends.append((child, channels[record.serving_radio]))

    total: float = 0.0
    for neighbor, channel in ends:
        own = table.get(record.location.grid_index, channel)
        other = table.get(graph.node(neighbor).location.grid_index, channel)
        if own is None or other is None:
            continue
        total += abs(own - other) * 100
    return total


def contention_impact(
    channels: Sequence[int], location: Location, table: ChannelLocationTable
) -> float:
    """
    This function weighs the utilization of the overlapping neighbors of each configured channel:
    [sum over d, over h != h_d with |h - h_d| < 5 of (5 - |h - h_d|) * u(h, l)] / 50.
    """
    total: float = 0.0
    for own in channels:
        for channel in range(1, table.n_channels + 1):
            distance: int = abs(channel - own)
            if channel == own or distance >= OVERLAP_SPAN:
                continue
            total += (OVERLAP_SPAN - distance) * _sensed(
                table, location.grid_index, channel
            )
    return total / 50


def guidance_terms(
    action: Action, graph: NetworkGraph, table: ChannelLocationTable
) -> GuidanceTerms:
    """
    :return: the guidance terms of a channel configuration action at the node's location.
    """
    if action.channels is None:
        raise InvalidInputError("Guidance terms need a channel configuration.")
    record: NodeRecord = graph.node(action.node)
    return GuidanceTerms(
        cd=channel_diversity(action.channels),
        ui=utilization_impact(action.channels, record.location, table),
        hi=hidden_node_impact(action.channels, record, graph, table),
        ci=contention_impact(action.channels, record.location, table),
    )


def rho_u(terms: GuidanceTerms, guard: float) -> float:
    """
    :return: the guidance probability CD / (UI + HI + CI + guard).
    """
    return terms.cd / (terms.ui + terms.hi + terms.ci + guard)


def boltzmann_probabilities(
    q_values: Sequence[float], temperature: float
) -> numpy.ndarray:
    """
    This function returns the Boltzmann distribution e^(Q/T) / sum e^(Q/T) over the actions.
    Values are shifted by their maximum before exponentiation; the result is unchanged.
    """
    if temperature <= 0:
        raise InvalidInputError("The temperature must be positive.")
    values = numpy.asarray(q_values, dtype=float)
    weights = numpy.exp((values - values.max()) / temperature)
    return weights / weights.sum()


def kappa(current: Sequence[int], candidate: Sequence[int]) -> float:
    """
    This function ranks a candidate configuration: its channel diversity times its Euclidean
    distance from the current configuration. The current configuration itself ranks 0.
    """
    return channel_diversity(candidate) * math.sqrt(
        sum((old - new) ** 2 for old, new in zip(current, candidate))
    )


def _argmax_kappa(
    actions: Sequence[Action], indices: Sequence[int], current: Sequence[int]
) -> Action:
    # numpy.argmax returns the first maximum, i.e. the lowest action index
    scores = numpy.array(
        [kappa(current, actions[index].channels or ()) for index in indices]
    )
    return actions[indices[int(numpy.argmax(scores))]]


# ==================
# exploration probability
# ==================


def vdbe_f(delta: float, eta: float, sigma: float) -> float:
    """
    :return: (1 - e^(-|eta * delta| / sigma)) / (1 + e^(-|eta * delta| / sigma)), in [0, 1).
    """
    if sigma <= 0:
        raise InvalidInputError("sigma must be positive.")
    decay: float = math.exp(-abs(eta * delta) / sigma)
    return (1 - decay) / (1 + decay)


def exploration_probability_update(
    epsilon: float, delta_q: float, eta: float, sigma: float, action_count: int
) -> float:
    """
    This function moves the exploration probability of a node toward f(delta_q), with the
    inverse sensitivity psi = 1 / action_count: epsilon := psi * f + (1 - psi) * epsilon.
    :param epsilon: current exploration probability, in [0, 1].
    :param delta_q: temporal difference of the last Q update (reward - old Q).
    :param eta: learning rate.
    :param sigma: inverse sensitivity of f.
    :param action_count: number of actions of the node.
    :return: the new exploration probability, in [0, 1].
    """
    if action_count < 1:
        raise InvalidInputError("A node needs at least one action.")
    psi: float = 1 / action_count
    updated: float = psi * vdbe_f(delta_q, eta, sigma) + (1 - psi) * epsilon
    return min(max(updated, 0.0), 1.0)


# ==================
# exploration and exploitation
# ==================


def guided_explore(
    actions: Sequence[Action],
    q_values: Sequence[float],
    terms: Sequence[GuidanceTerms],
    current: Action,
    temperature: float,
    prob_band: float,
    guard: float,
) -> Action:
    """
    This is a candidate design for exploration: the guided Boltzmann policy.
    1) rho(a) = min(rho_o(a), rho_u(a)), rho_o being the Boltzmann probability of Q;
    2) keep the actions with rho > prob_band * max rho (all of them if none is left);
    3) return the kept action with the largest kappa, lowest index on ties.
    :param actions: channel actions of the node, in enumeration order.
    :param q_values: Q-value of each action at the node's state.
    :param terms: guidance terms of each action.
    :param current: the configuration in effect.
    :param temperature: Boltzmann temperature of the node.
    :param prob_band: relative probability band, 0.9.
    :param guard: zero-denominator guard of rho_u.
    :return: the selected action.
    """
    rho_o = boltzmann_probabilities(q_values, temperature)
    rho = numpy.minimum(rho_o, numpy.array([rho_u(item, guard) for item in terms]))
    kept: List[int] = [
        index for index, value in enumerate(rho) if value > prob_band * rho.max()
    ]
    if not kept:
        kept = list(range(len(actions)))
    return _argmax_kappa(actions, kept, current.channels or ())


def guided_exploit(
    actions: Sequence[Action], q_values: Sequence[float], current: Action, band: float
) -> Action:
    """
    This is a candidate design for exploitation: among the actions whose Q-value exceeds
    band * max Q, return the one with the largest kappa. With nothing learnt yet (max Q <= 0)
    the current configuration is kept.
    """
    best: float = max(q_values, default=0.0)
    if best <= 0:
        return current
    kept: List[int] = [
        index for index, value in enumerate(q_values) if value > band * best
    ]
    return _argmax_kappa(actions, kept, current.channels or ())


def boltzmann_explore(
    actions: Sequence[Action],
    q_values: Sequence[float],
    temperature: float,
    rng: numpy.random.Generator,
) -> Action:
    """
    This is a candidate design for exploration: plain softmax sampling of the Boltzmann
    distribution, without guidance.
    """
    probabilities = boltzmann_probabilities(q_values, temperature)
    return actions[int(rng.choice(len(actions), p=probabilities))]


def greedy_exploit(
    actions: Sequence[Action], q_values: Sequence[float], current: Action
) -> Action:
    """
    This is a candidate design for exploitation: the action with the largest Q-value, lowest
    index on ties; the current configuration if nothing is learnt.
    """
    if max(q_values, default=0.0) <= 0:
        return current
    return actions[int(numpy.argmax(numpy.asarray(q_values)))]


def zero_cost_explore(
    actions: Sequence[Action],
    visited: Sequence[Action],
    active_users: int,
    rng: numpy.random.Generator,
) -> Action:
    """
    This function picks the action to try while no user requests traffic.
    Among unvisited actions it returns the one farthest (sum of Euclidean distances) from every
    visited action, lowest index on ties; when every action is visited, a uniform draw.
    """
    if active_users > 0:
        raise PreconditionError("Zero-cost exploration requires an idle network.")
    if not actions:
        raise InvalidInputError("No action to explore.")
    seen: Set[Action] = set(visited)
    unvisited: List[Action] = [action for action in actions if action not in seen]
    if not unvisited:
        return actions[int(rng.integers(len(actions)))]

    def beta(candidate: Action) -> float:
        return sum(
            math.sqrt(
                sum(
                    (new - old) ** 2
                    for new, old in zip(candidate.channels or (), item.channels or ())
                )
            )
            for item in visited
        )

    scores = numpy.array([beta(action) for action in unvisited])
    return unvisited[int(numpy.argmax(scores))]


# ==================
# control gate and location policy
# ==================


def control_gate(
    q_table: QTable,
    node: int,
    state: int,
    proposed: Action,
    q_current: float,
    improvement_gate: float,
) -> GateVerdict:
    """
    This is a candidate design for the control gate: an action is applied if nothing is known
    about it yet, or if its Q-value beats the current one by the improvement factor (1.15).
    """
    if not q_table.is_visited(node, state, proposed):
        return "Apply"
    if q_table.value(node, state, proposed) > improvement_gate * q_current:
        return "Apply"
    return "Keep"


def apply_always(
    _q_table: QTable,
    _node: int,
    _state: int,
    _proposed: Action,
    _q_current: float,
    _improvement_gate: float,
) -> GateVerdict:
    """
    This is a candidate design for the control gate: every selected action is applied.
    """
    return "Apply"


def select_action_type(
    record: NodeRecord,
    backhaul_rssi: Optional[float],
    q_table: QTable,
    thresholds: TriggerThresholds,
    q_target: float,
    patience: int,
) -> ActionType:
    """
    This function decides whether a node optimizes its location or its channels.
    An extender repositions if its backhaul RSSI is at or below rssi_min, or if it has tried
    at least patience channel actions at its location and its best Q-value there stays below
    q_target. The patience gate also covers a location it has never tried: max_value() is 0
    there, below any positive q_target, yet the extender works on its channels first.
    The mAP is static.
    """
    if record.role == "mAP":
        return "ChannelPhase"
    if record.role != "EXT":
        raise InvalidNodeError(f"Node {record.index} is not managed.")
    if backhaul_rssi is not None and backhaul_rssi <= thresholds.rssi_min:
        return "Reposition"
    state: int = record.location.grid_index
    if (
        q_table.visited_count(record.index, state) >= patience
        and q_table.max_value(record.index, state) < q_target
    ):
        return "Reposition"
    return "ChannelPhase"


def recommended_location(
    node: int, graph: NetworkGraph, grid: LocationGrid
) -> Location:
    """
    This function recommends a placement for an extender: midway between its parent and the
    centroid of the user devices it serves (its own location if it serves none), snapped to the
    grid with ties toward the parent.
    """
    record: NodeRecord = graph.node(node)
    if record.role != "EXT" or record.parent is None:
        raise InvalidNodeError(f"Node {node} is not an attached extender.")
    parent: Location = graph.node(record.parent).location
    users = [graph.node(user).location for user in graph.users_served_by(node)]
    if users:
        centroid = (
            sum(item.x for item in users) / len(users),
            sum(item.y for item in users) / len(users),
        )
    else:
        centroid = (record.location.x, record.location.y)
    return grid.snap(
        (parent.x + centroid[0]) / 2,
        (parent.y + centroid[1]) / 2,
        toward=(parent.x, parent.y),
    )


def propose_location(
    node: int,
    graph: NetworkGraph,
    grid: LocationGrid,
    visited: Set[int],
    rng: numpy.random.Generator,
    offset_cells: int = 2,
    toward: Optional[Location] = None,
) -> Location:
    """
    This function proposes the next location of an extender: the midpoint between its location
    and a target (its parent by default), snapped to the grid with ties toward the target. If the
    snapped point is the current cell, the extender moves one cell toward the target. If the
    proposal was visited before, a random offset of at most offset_cells cells is added,
    rejection-sampled inside the grid.
    :param node: index of the extender.
    :param graph: the network graph.
    :param grid: candidate locations.
    :param visited: grid indices the extender has occupied.
    :param rng: random generator of the agent.
    :param offset_cells: largest offset, in cells.
    :param toward: optional target; defaults to the parent's location.
    :return: the proposed location.
    """
    record: NodeRecord = graph.node(node)
    if record.role != "EXT" or record.parent is None:
        raise InvalidNodeError(f"Node {node} is not an attached extender.")
    target: Location = graph.node(record.parent).location if toward is None else toward
    current: Location = record.location
    proposal: Location = grid.snap(
        (current.x + target.x) / 2,
        (current.y + target.y) / 2,
        toward=(target.x, target.y),
    )

    if proposal.grid_index == current.grid_index:
        column, row = grid.cell_of(current)
        goal = grid.snap(target.x, target.y)
        goal_column, goal_row = grid.cell_of(goal)
        step_column = column + int(numpy.sign(goal_column - column))
        step_row = row + int(numpy.sign(goal_row - row))
        proposal = grid.cell(step_column, step_row)

    if proposal.grid_index not in visited:
        return proposal

    column, row = grid.cell_of(proposal)
    fallback: Optional[Location] = None
    for _ in range(100):
        offset = rng.integers(-offset_cells, offset_cells + 1, size=2)
        if (offset[0] == 0 and offset[1] == 0) or math.hypot(
            offset[0], offset[1]
        ) > offset_cells:
            continue
        if not grid.contains_cell(column + int(offset[0]), row + int(offset[1])):
            continue
        candidate = grid.cell(column + int(offset[0]), row + int(offset[1]))
        if candidate.grid_index not in visited:
            return candidate
        if fallback is None:
            fallback = candidate
    return proposal if fallback is None else fallback


# ==================
# temperature schedules
# ==================


def decay_temperature_geometric(
    temperature: float, factor: float, floor: float
) -> float:
    """
    This is a candidate design for the temperature schedule: T := max(floor, factor * T).
    """
    return max(floor, factor * temperature)


def keep_temperature(temperature: float) -> float:
    """
    This is a candidate design for the temperature schedule: T stays constant.
    """
    return temperature

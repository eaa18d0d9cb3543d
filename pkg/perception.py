"""
This module contains the perception block: it turns two successive counter snapshots into
indicators, corrects false contention alarms of child radios, and raises the optimization trigger.
"""

import logging
from typing import Dict, List, NamedTuple, Tuple
from network import NetworkGraph
from environment import CounterBank
from data_types import (
    CounterResetError,
    InvalidInputError,
    NetworkState,
    TriggerThresholds,
)

logger = logging.getLogger(__name__)


class IndicatorRate(NamedTuple):
    """
    A per-user rate in percent. undefined is True when no packet was sent in the window; the
    value is then reported as 0.
    """

    value: float
    undefined: bool = False


class RadioIndicators(NamedTuple):
    """
    Indicators of one radio: utilization and activity are in percent. utilization may hold the
    1000 sentinel.
    """

    node: int
    radio: int
    channel: int
    utilization: float
    activity: float


class UserIndicators(NamedTuple):
    """
    Indicators of one user device, in percent.
    """

    user: int
    retries_rate: IndicatorRate
    error_rate: IndicatorRate


class PerceptionSnapshot(NamedTuple):
    """
    Indicators of the whole mesh over one sensing window. backhaul_rssi maps each extender to the
    RSSI of its beacons at its parent. goodput is the delivered throughput in Mbps.
    """

    radios: Dict[Tuple[int, int], RadioIndicators]
    users: Dict[int, UserIndicators]
    backhaul_rssi: Dict[int, float]
    goodput: float


def _check_window(before: float, after: float, tau: float) -> None:
    if tau <= 0:
        raise InvalidInputError("The sensing window must be positive.")
    if after < before:
        raise CounterResetError(f"Counter went from {before} down to {after}.")


def _clamp_percent(value: float) -> float:
    return min(max(value, 0.0), 100.0)


def utilization_from_counters(cb_t: float, cb_t_tau: float, tau: float) -> float:
    """
    This function calculates the channel utilization from two readings of the channel busy time.
    :param cb_t: busy time (ms) at the start of the window.
    :param cb_t_tau: busy time (ms) at the end of the window.
    :param tau: window length in ms.
    :return: utilization in percent, in [0, 100].
    """
    _check_window(cb_t, cb_t_tau, tau)
    return _clamp_percent((cb_t_tau - cb_t) / tau * 100)


def activity_from_counters(
    chrx_t: float, chtx_t: float, chrx_t_tau: float, chtx_t_tau: float, tau: float
) -> float:
    """
    This function calculates the activity factor of a radio, the share of the window it spent
    receiving or transmitting.
    :return: activity in percent, in [0, 100].
    """
    _check_window(chrx_t, chrx_t_tau, tau)
    _check_window(chtx_t, chtx_t_tau, tau)
    return _clamp_percent(((chrx_t_tau + chtx_t_tau) - (chrx_t + chtx_t)) / tau * 100)


def _rate(events: int, packets: int) -> IndicatorRate:
    if events < 0 or packets < 0:
        raise CounterResetError("Packet counters cannot decrease.")
    if packets == 0:
        return IndicatorRate(value=0.0, undefined=True)
    return IndicatorRate(value=events / packets * 100)


def retries_rate(retries_delta: int, packets_delta: int) -> IndicatorRate:
    """
    :return: retries per sent packet in percent; flagged undefined when no packet was sent.
    """
    return _rate(retries_delta, packets_delta)


def error_rate(errors_delta: int, packets_delta: int) -> IndicatorRate:
    """
    :return: failed packets per sent packet in percent; flagged undefined when no packet was sent.
    """
    return _rate(errors_delta, packets_delta)


def goodput_from_counters(
    before: CounterBank, after: CounterBank, elapsed_ms: float
) -> float:
    """
    :return: the throughput delivered to all users over the window, in Mbps.
    """
    if elapsed_ms <= 0:
        raise InvalidInputError("The sensing window must be positive.")
    delivered: int = 0
    for user, counters in after.users.items():
        _check_window(before.users[user].rx_bytes, counters.rx_bytes, elapsed_ms)
        delivered += counters.rx_bytes - before.users[user].rx_bytes
    return delivered * 8 / (elapsed_ms / 1000) / 1e6


def build_snapshot(
    before: CounterBank,
    after: CounterBank,
    elapsed_ms: float,
    graph: NetworkGraph,
    backhaul_rssi: Dict[int, float],
) -> PerceptionSnapshot:
    """
    This function computes every indicator from two counter snapshots taken elapsed_ms apart.
    A decreasing counter raises CounterResetError; the caller discards the snapshot.
    """
    radios: Dict[Tuple[int, int], RadioIndicators] = {}
    for (node, radio), counters in after.radios.items():
        previous = before.radios[(node, radio)]
        radios[(node, radio)] = RadioIndicators(
            node=node,
            radio=radio,
            channel=graph.node(node).channels[radio],
            utilization=utilization_from_counters(
                previous.cb_time, counters.cb_time, elapsed_ms
            ),
            activity=activity_from_counters(
                previous.chrx_time,
                previous.chtx_time,
                counters.chrx_time,
                counters.chtx_time,
                elapsed_ms,
            ),
        )

    users: Dict[int, UserIndicators] = {}
    for user, counters in after.users.items():
        previous_user = before.users[user]
        packets: int = counters.n_pack - previous_user.n_pack
        users[user] = UserIndicators(
            user=user,
            retries_rate=retries_rate(counters.n_retr - previous_user.n_retr, packets),
            error_rate=error_rate(counters.n_err - previous_user.n_err, packets),
        )

    return PerceptionSnapshot(
        radios=radios,
        users=users,
        backhaul_rssi=dict(backhaul_rssi),
        goodput=goodput_from_counters(before, after, elapsed_ms),
    )


def correct_activity(
    snapshot: PerceptionSnapshot, graph: NetworkGraph, ratio: float = 0.1
) -> PerceptionSnapshot:
    """
    This function removes false contention alarms. A child radio that looks idle on a busy
    channel (activity / utilization < ratio) while the parent radio serving the link is active
    is in fact busy with its own link: it takes over the parent radio's activity.
    Links are processed top-down so that a corrected parent propagates to its children.
    :return: the corrected snapshot.
    """
    radios: Dict[Tuple[int, int], RadioIndicators] = dict(snapshot.radios)
    order: List[int] = [0]
    position: int = 0
    while position < len(order):
        parent = graph.node(order[position])
        position += 1
        for child_index in graph.children(parent.index):
            child = graph.node(child_index)
            if child.role == "user":
                continue
            order.append(child_index)
            if parent.serving_radio is None or child.uplink_radio is None:
                continue
            parent_key = (parent.index, parent.serving_radio)
            child_key = (child_index, child.uplink_radio)
            if parent_key not in radios or child_key not in radios:
                continue
            served, own = radios[parent_key], radios[child_key]
            if served.channel != own.channel or own.utilization <= 0:
                continue
            if (
                own.activity / own.utilization < ratio
                and served.activity >= ratio * own.utilization
            ):
                radios[child_key] = own._replace(activity=served.activity)
    return snapshot._replace(radios=radios)


def node_view(
    snapshot: PerceptionSnapshot, node: int, graph: NetworkGraph
) -> PerceptionSnapshot:
    """
    :return: the part of the snapshot a node acts upon: its own radios and the users whose path
    passes through it.
    """
    served = set(graph.users_served_by(node))
    return PerceptionSnapshot(
        radios={key: value for key, value in snapshot.radios.items() if key[0] == node},
        users={key: value for key, value in snapshot.users.items() if key in served},
        backhaul_rssi={
            key: value for key, value in snapshot.backhaul_rssi.items() if key == node
        },
        goodput=snapshot.goodput,
    )


def trigger(
    snapshot: PerceptionSnapshot, thresholds: TriggerThresholds
) -> NetworkState:
    """
    This function detects a suboptimal network state: a radio on a busy channel it does not
    occupy itself, or a user suffering from retries or packet errors.
    """
    for radio in snapshot.radios.values():
        if (
            radio.utilization > thresholds.u_thr
            and radio.activity / radio.utilization < thresholds.activity_ratio
        ):
            return "Suboptimal"
    for user in snapshot.users.values():
        if user.retries_rate.value > thresholds.retr_thr:
            return "Suboptimal"
        if user.error_rate.value > thresholds.err_thr:
            return "Suboptimal"
    return "Quiet"

"""
This module contains realizations of the Scenario methods: how RSSI is produced and how packet
errors arise on a link.
"""

import functools
from typing import Iterable
import numpy
import phy
from data_types import Location, PhyParams, Transmitter


@functools.lru_cache(maxsize=1 << 16)
def log_distance(
    tx_location: Location, rx_location: Location, params: PhyParams
) -> float:
    """
    This is a candidate design for producing RSSI. It is the plain log-distance value.
    Results are cached since geometry is evaluated over and over again by the oracle.
    :param tx_location: transmitter location.
    :param rx_location: receiver location.
    :param params: PHY parameters.
    :return: RSSI in dBm.
    """
    return phy.rssi_at(tx_location, rx_location, params)


def log_distance_shadowing(
    tx_location: Location,
    rx_location: Location,
    params: PhyParams,
    sigma: float,
    rng: numpy.random.Generator,
) -> float:
    """
    This is a candidate design for measuring RSSI. The log-distance value is perturbed by a
    zero-mean Gaussian with standard deviation sigma (dB), then clamped to the RSSI range.
    """
    return phy.clamp_rssi(
        log_distance(tx_location, rx_location, params) + rng.normal(0.0, sigma)
    )


def hidden_node_error(
    sender: Location,
    receiver: Location,
    channel: int,
    transmitters: Iterable[Transmitter],
    params: PhyParams,
) -> float:
    """
    This is a candidate design for the packet error rate of a directed link.
    A transmitter is hidden if it cannot be heard at the sender (below the CCA threshold) but is
    heard at the receiver. Each hidden transmitter collides with the link for its airtime,
    weighted by channel overlap.
    :param sender: location of the link's sender.
    :param receiver: location of the link's receiver.
    :param channel: channel of the link.
    :param transmitters: all other transmitters.
    :param params: PHY parameters.
    :return: packet error rate in [0, 1].
    """
    total: float = 0.0
    for transmitter in transmitters:
        if (
            log_distance(transmitter.location, sender, params) < params.cca_threshold
            and log_distance(transmitter.location, receiver, params)
            >= params.cca_threshold
        ):
            total += transmitter.airtime * phy.overlap(transmitter.channel, channel)
    return min(max(total, 0.0), 1.0)


def error_free(
    _sender: Location,
    _receiver: Location,
    _channel: int,
    _transmitters: Iterable[Transmitter],
    _params: PhyParams,
) -> float:
    """
    This is a candidate design for the packet error rate of a link: there are never errors.
    It is for comparison only.
    """
    return 0.0

"""
This module contains the analytic PHY: RSSI from geometry, the maximal link throughput, the
utilization-discounted link throughput, channel overlap, and the end-to-end user throughput.
All functions are pure.
"""

import math
from typing import Mapping, Optional
from data_types import (
    DomainError,
    InvalidInputError,
    Link,
    Location,
    NoPathError,
    Path,
    PhyParams,
)

RSSI_FLOOR: float = -100.0
RSSI_CEILING: float = 40.0
MIN_DISTANCE: float = 0.1  # meters
ALLOWED_MAX_BPS = (5.0, 6.0, 40.0 / 6.0)
OVERLAP_SPAN: int = 5  # channels of the 2.4 GHz grid overlapping a 20 MHz channel


def validate_phy_params(params: PhyParams) -> None:
    """
    This function raises InvalidInputError if the parameters are not usable.
    """
    if params.ppdu <= 0:
        raise InvalidInputError("ppdu must be positive.")
    if params.n_ofdm < 1:
        raise InvalidInputError("n_ofdm must be at least 1.")
    if not any(math.isclose(params.max_bps, item) for item in ALLOWED_MAX_BPS):
        raise InvalidInputError(f"max_bps must be one of 5, 6, 40/6: {params.max_bps}")
    if params.wall_loss < 0:
        raise InvalidInputError("wall_loss cannot be negative.")


def distance(first: Location, second: Location) -> float:
    """
    :return: Euclidean distance in meters.
    """
    return math.hypot(first.x - second.x, first.y - second.y)


def clamp_rssi(value: float) -> float:
    """
    :return: the value clamped to the RSSI range.
    """
    return min(max(value, RSSI_FLOOR), RSSI_CEILING)


def rssi_at(tx_location: Location, rx_location: Location, params: PhyParams) -> float:
    """
    This function synthesizes the RSSI (dBm) with the log-distance model:
    tx_power - pl_ref - 10 * n * log10(d) - wall_loss * d, with d floored at 0.1 m and the
    result clamped to [-100, 40].
    """
    meters: float = max(distance(tx_location, rx_location), MIN_DISTANCE)
    value: float = (
        params.tx_power
        - params.pl_ref
        - 10 * params.path_loss_exponent * math.log10(meters)
        - params.wall_loss * meters
    )
    return clamp_rssi(value)


def link_rmax(rssi: float, params: PhyParams) -> float:
    """
    This function calculates the maximal link throughput (bits/second) for a given RSSI:
    min(log2(1 + 10 ** ((rssi + p_adjust) / 10)), max_bps) * max_nss * n_ofdm / ppdu.
    """
    spectral_efficiency: float = min(
        math.log2(1 + 10 ** ((rssi + params.p_adjust) / 10)), params.max_bps
    )
    return spectral_efficiency * params.max_nss * params.n_ofdm / params.ppdu


def link_throughput(rmax: float, utilization: float) -> float:
    """
    This function discounts the maximal link throughput by the busy fraction of the medium.
    :param rmax: maximal link throughput in bits/second.
    :param utilization: channel utilization in percent, in [0, 100].
    :return: rmax * (100 - utilization) / 100.
    """
    if not 0 <= utilization <= 100:
        raise DomainError(f"Utilization must be in [0, 100]: {utilization}")
    return rmax * (100 - utilization) / 100


def overlap(channel_a: int, channel_b: int) -> float:
    """
    :return: max(0, (5 - |channel_a - channel_b|) / 5), 1 for the same channel and 0 for
    channels five or more apart.
    """
    return max(0.0, (OVERLAP_SPAN - abs(channel_a - channel_b)) / OVERLAP_SPAN)


def end_to_end_throughput(
    path: Path,
    link_rates: Mapping[Link, float],
    demand: float,
    sharers: Optional[Mapping[Link, int]] = None,
) -> float:
    """
    This function calculates the throughput a user obtains along its path.
    Each link's rate is divided equally among the user paths traversing it.
    :param path: the user's path.
    :param link_rates: rate of every link of the path, bits/second.
    :param demand: demand of the user, bits/second.
    :param sharers: number of user paths traversing each link; 1 for links not given.
    :return: min(demand, min over links of the per-user share).
    """
    if not path.links:
        raise NoPathError(f"User {path.user} has an empty path.")
    if demand < 0:
        raise DomainError(f"Demand cannot be negative: {demand}")
    shares = (
        link_rates[link] / max(1, sharers.get(link, 1) if sharers is not None else 1)
        for link in path.links
    )
    return min(demand, min(shares))

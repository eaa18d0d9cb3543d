"""
This module contains unit tests of the guidance terms and of kappa().
"""

import math
from typing import Sequence
import pytest
import engine_candidates
from knowledge_base import ChannelLocationTable
from data_types import Action

from ..__init__ import EXT_SAMPLE, GRAPH_SAMPLE, grid_point


@pytest.mark.parametrize(
    "channels, expected",
    [((1, 11), 21.0), ((6, 6), 1.0), ((4,), 1.0), ((3, 8), 11.0), ((1, 6, 11), 41.0)],
)
def test_channel_diversity(channels: Sequence[int], expected: float) -> None:
    """
    This function tests channel_diversity() with normal inputs.
    """
    assert engine_candidates.channel_diversity(channels) == expected


def test_utilization_impact() -> None:
    """
    This function tests utilization_impact(): the utilization of both configured channels at
    the extender's location add up; channels never sensed count 0.
    """
    table = ChannelLocationTable(11)
    table.set(26, 3, 37.0)
    table.set(26, 8, 35.0)
    table.set(23, 3, 90.0)
    location = grid_point(6, 4)
    assert engine_candidates.utilization_impact((3, 8), location, table) == 72.0
    assert engine_candidates.utilization_impact((3, 9), location, table) == 37.0


def test_contention_impact() -> None:
    """
    This function tests contention_impact(): overlapping neighbors of channel 3 weighted by
    5 - |h - 3|, divided by 50.
    """
    table = ChannelLocationTable(11)
    table.set(26, 1, 10.0)
    table.set(26, 2, 20.0)
    table.set(26, 4, 30.0)
    # channel 3 itself and channel 8 (too far) do not count
    table.set(26, 3, 99.0)
    table.set(26, 8, 99.0)
    assert engine_candidates.contention_impact(
        (3,), grid_point(6, 4), table
    ) == pytest.approx(4.6)


def test_hidden_node_impact() -> None:
    """
    This function tests hidden_node_impact(): the backhaul channel is sensed at 38 % by the
    extender and 37 % by the mAP. The link to the user device does not count.
    """
    # Arrange.
    table = ChannelLocationTable(11)
    table.set(26, 5, 38.0)
    table.set(23, 5, 37.0)
    table.set(26, 9, 80.0)

    # Act.
    impact = engine_candidates.hidden_node_impact(
        (5, 9), EXT_SAMPLE, GRAPH_SAMPLE, table
    )

    # Assert.
    assert impact == pytest.approx(100.0)
    # unsensed ends count 0
    assert (
        engine_candidates.hidden_node_impact((4, 9), EXT_SAMPLE, GRAPH_SAMPLE, table)
        == 0.0
    )


def test_guidance_terms() -> None:
    """
    This function tests guidance_terms() and rho_u() together.
    """
    table = ChannelLocationTable(11)
    table.set(26, 3, 37.0)
    table.set(26, 8, 35.0)
    terms = engine_candidates.guidance_terms(
        Action(kind="ChannelConfig", node=1, channels=(3, 8)), GRAPH_SAMPLE, table
    )
    assert terms.cd == 11.0
    assert terms.ui == 72.0
    assert terms.hi == 0.0
    # channel 8 is 5 away from channel 3: no contention
    assert terms.ci == 0.0
    assert engine_candidates.rho_u(terms, 1e-9) == pytest.approx(11 / 72)


CASES_KAPPA = [
    ((3, 8), (4, 10), 13 * math.sqrt(5)),
    ((3, 8), (3, 8), 0.0),
    ((1,), (11,), 10.0),
    ((1, 1), (6, 6), math.sqrt(50)),
]


@pytest.mark.parametrize("current, candidate, expected", CASES_KAPPA)
def test_kappa(
    current: Sequence[int], candidate: Sequence[int], expected: float
) -> None:
    """
    This function tests kappa() with normal inputs.
    """
    assert engine_candidates.kappa(current, candidate) == pytest.approx(expected)

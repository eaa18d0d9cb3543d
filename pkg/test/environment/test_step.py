"""
This module contains unit tests of World.step(): counters and timed events.
"""

import pytest
from environment import zero_counters
from data_types import Location, OFF_GRID, ScenarioEvent

from ..__init__ import (
    EXTERNAL_SAMPLE,
    GRAPH_SAMPLE,
    create_scenario_helper,
    create_world_helper,
)


def test_step__counters() -> None:
    """
    This function tests the counter deltas of one epoch of the sample world.
    """
    # Arrange.
    world = create_world_helper()

    # Act.
    deltas = world.step(0)

    # Assert.
    # the mAP sends on both of its links
    assert deltas.radios[(0, 0)].cb_time == pytest.approx(2000 / 13)
    assert deltas.radios[(0, 0)].chtx_time == pytest.approx(2000 / 13)
    assert deltas.radios[(0, 0)].chrx_time == 0.0
    # the backhaul radio receives one link and hears the other link of the mAP
    assert deltas.radios[(1, 0)].cb_time == pytest.approx(2000 / 13)
    assert deltas.radios[(1, 0)].chrx_time == pytest.approx(1000 / 13)
    assert deltas.radios[(1, 0)].chtx_time == 0.0
    assert deltas.radios[(1, 1)].cb_time == pytest.approx(1000 / 13)
    assert deltas.radios[(1, 1)].chtx_time == pytest.approx(1000 / 13)
    for user in (2, 3):
        assert deltas.users[user].n_pack == 625
        assert deltas.users[user].rx_bytes == 625000
        assert deltas.users[user].n_retr == 0
        assert deltas.users[user].n_err == 0


def test_step__cumulative() -> None:
    """
    This function tests that counters accumulate and never decrease.
    """
    # Arrange.
    world = create_world_helper()
    before = world.counters

    # Act.
    world.step(0)
    world.step(1)

    # Assert.
    assert before == zero_counters(GRAPH_SAMPLE)
    assert world.counters.users[2].rx_bytes == 1250000
    assert world.counters.radios[(0, 0)].cb_time == pytest.approx(4000 / 13)


def test_step__events() -> None:
    """
    This function tests that events are applied at their epoch.
    """
    # Arrange.
    timeline = (
        ScenarioEvent(1, "DeactivateExternal", "ext"),
        ScenarioEvent(2, "SetDemand", 2, demand=0.0),
        ScenarioEvent(2, "MoveUser", 3, location=Location(OFF_GRID, 12.0, 6.0)),
    )
    scenario = create_scenario_helper(timeline=timeline)
    world = create_world_helper(scenario)

    # Act and Assert.
    world.step(0)
    assert world.external["ext"].active
    world.step(1)
    assert not world.external["ext"].active
    assert world.external_transmitters() == []
    world.step(2)
    assert world.demands[2] == 0.0
    assert world.active_user_count() == 1
    assert world.graph.node(3).location == Location(OFF_GRID, 12.0, 6.0)
    assert world.last_evaluation.user_throughput[2] == 0.0
    # the scenario itself is untouched
    assert scenario.external_aps == (EXTERNAL_SAMPLE,)

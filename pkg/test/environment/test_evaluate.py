"""
This module contains unit tests of World.evaluate() and the utilization a location senses.
"""

import pytest
from data_types import ExternalAp, Location, OFF_GRID, PhyParams

from ..__init__ import (
    EXT_SAMPLE,
    EXTERNAL_SAMPLE,
    MAP_SAMPLE,
    USER_OF_EXT,
    USER_OF_MAP,
    create_scenario_helper,
    create_world_helper,
)


def test_evaluate__sample() -> None:
    """
    This function tests evaluate() on the sample world, worked out by hand.
    """
    # Arrange.
    world = create_world_helper()

    # Act.
    evaluation = world.evaluate()

    # Assert.
    assert [item.airtime for item in evaluation.transmitters] == pytest.approx(
        [0.2, 1 / 13, 1 / 13, 1 / 13]
    )
    for child in (1, 2, 3):
        assert evaluation.links[child].rmax == pytest.approx(65e6)
        assert evaluation.links[child].error_rate == 0.0
    # the two links of the mAP hear each other; the extender's fronthaul is alone on channel 6
    assert evaluation.links[1].utilization == pytest.approx(100 / 13)
    assert evaluation.links[1].rate == pytest.approx(60e6)
    assert evaluation.links[2].rate == pytest.approx(60e6)
    assert evaluation.links[3].utilization == 0.0
    assert evaluation.links[3].rate == pytest.approx(65e6)
    assert evaluation.user_throughput == pytest.approx({2: 5e6, 3: 5e6})
    assert evaluation.objective == pytest.approx(10e6)


def test_evaluate__bottleneck() -> None:
    """
    This function tests evaluate() when the demand exceeds what the path delivers: a user
    asking for 100 Mbps gets the rate of its bottleneck link, and the saturated backhaul takes
    all the airtime of channel 1 away from the other user of the mAP.
    """
    world = create_world_helper()
    evaluation = world.evaluate(demands={2: 5e6, 3: 100e6})
    assert evaluation.links[1].airtime == 1.0
    assert evaluation.user_throughput[3] == pytest.approx(60e6)
    assert evaluation.links[2].utilization == pytest.approx(100.0)
    assert evaluation.user_throughput[2] == 0.0


def test_evaluate__co_channel_external() -> None:
    """
    This function tests evaluate() with the external AP moved onto the fronthaul channel.
    """
    # Arrange.
    scenario = create_scenario_helper(
        external_aps=(EXTERNAL_SAMPLE._replace(channel=6),)
    )
    world = create_world_helper(scenario)

    # Act.
    evaluation = world.evaluate()

    # Assert.
    assert evaluation.links[3].utilization == pytest.approx(20.0)
    assert evaluation.links[3].rate == pytest.approx(52e6)


def test_evaluate__hidden_node() -> None:
    """
    This function tests evaluate() with a transmitter heard by the user but not by the extender.
    With 1 dB of wall loss per meter, an AP 14 m behind the user is heard by it (-76.4 dBm)
    but not by the extender 18 m away (-83.7 dBm).
    """
    # Arrange.
    hidden = ExternalAp(
        label="hidden",
        location=Location(OFF_GRID, 24.0, 4.0),
        channel=6,
        client_location=Location(OFF_GRID, 25.0, 4.0),
        offered_load=13e6,
    )
    scenario = create_scenario_helper(
        external_aps=(hidden,), phy=PhyParams(wall_loss=1.0)
    )
    world = create_world_helper(scenario)

    # Act.
    evaluation = world.evaluate()

    # Assert.
    airtime = evaluation.transmitters[0].airtime
    assert 0 < airtime < 1
    assert evaluation.links[3].error_rate == pytest.approx(airtime)
    assert evaluation.links[1].error_rate == 0.0
    assert evaluation.user_error[3] == pytest.approx(airtime)


def test_ground_truth_utilization() -> None:
    """
    This function tests ground_truth_utilization() at the mAP: both of its links and the
    external AP are weighted by their overlap with the sensed channel.
    """
    world = create_world_helper()
    location = MAP_SAMPLE.location
    assert world.ground_truth_utilization(location, 1) == pytest.approx(200 / 13)
    assert world.ground_truth_utilization(location, 11) == pytest.approx(20.0)
    # channel 9 overlaps channel 11 by 0.6 and channel 6 by 0.4
    assert world.ground_truth_utilization(location, 9) == pytest.approx(
        0.6 * 20 + 0.4 * 100 / 13
    )


def test_active_user_count() -> None:
    """
    This function tests active_user_count() with one idle user.
    """
    scenario = create_scenario_helper(
        nodes=(MAP_SAMPLE, EXT_SAMPLE, USER_OF_MAP, USER_OF_EXT),
        demands={2: 0.0, 3: 5e6},
    )
    assert create_world_helper(scenario).active_user_count() == 1

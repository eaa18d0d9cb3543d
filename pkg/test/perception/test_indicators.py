"""
This module contains unit tests of the indicator functions of the perception block.
"""

import pytest
import perception
from environment import CounterBank, UserCounters, zero_counters
from data_types import CounterResetError, InvalidInputError

from ..__init__ import GRAPH_SAMPLE, create_world_helper


@pytest.mark.parametrize(
    "cb_t, cb_t_tau, tau, expected",
    [
        (100.0, 400.0, 1000.0, 30.0),
        (0.0, 0.0, 1000.0, 0.0),
        (0.0, 2000.0, 1000.0, 100.0),
    ],
)
def test_utilization_from_counters(
    cb_t: float, cb_t_tau: float, tau: float, expected: float
) -> None:
    """
    This function tests utilization_from_counters() with normal inputs.
    """
    assert perception.utilization_from_counters(cb_t, cb_t_tau, tau) == pytest.approx(
        expected
    )


def test_utilization_from_counters__error() -> None:
    """
    This function tests utilization_from_counters() with a counter reset and an empty window.
    """
    with pytest.raises(CounterResetError, match="down to"):
        perception.utilization_from_counters(500.0, 100.0, 1000.0)
    with pytest.raises(InvalidInputError, match="must be positive"):
        perception.utilization_from_counters(0.0, 100.0, 0.0)


def test_activity_from_counters() -> None:
    """
    This function tests activity_from_counters(): receive and transmit times add up.
    """
    assert perception.activity_from_counters(
        10.0, 20.0, 110.0, 220.0, 1000.0
    ) == pytest.approx(30.0)


def test_retries_rate() -> None:
    """
    This function tests retries_rate() and error_rate(), including a window without packets.
    """
    assert perception.retries_rate(10, 625).value == pytest.approx(1.6)
    assert not perception.retries_rate(10, 625).undefined
    assert perception.error_rate(0, 0) == perception.IndicatorRate(
        value=0.0, undefined=True
    )
    with pytest.raises(CounterResetError):
        perception.error_rate(-1, 10)


def test_goodput_from_counters() -> None:
    """
    This function tests goodput_from_counters(): bytes delivered to all users, in Mbps.
    """
    before = zero_counters(GRAPH_SAMPLE)
    after = CounterBank(
        radios=before.radios,
        users={
            2: UserCounters(0, 0, 625, 0, 625000),
            3: UserCounters(0, 0, 625, 0, 1250000),
        },
    )
    assert perception.goodput_from_counters(before, after, 2000.0) == pytest.approx(7.5)


def test_build_snapshot() -> None:
    """
    This function tests build_snapshot() on one epoch of the sample world.
    """
    # Arrange.
    world = create_world_helper()
    before = world.counters
    world.step(0)

    # Act.
    snapshot = perception.build_snapshot(
        before, world.counters, 1000.0, world.graph, {1: -57.0}
    )

    # Assert.
    assert snapshot.radios[(0, 0)].channel == 1
    assert snapshot.radios[(0, 0)].utilization == pytest.approx(200 / 13)
    assert snapshot.radios[(0, 0)].activity == pytest.approx(200 / 13)
    assert snapshot.radios[(1, 1)].channel == 6
    assert snapshot.radios[(1, 1)].utilization == pytest.approx(100 / 13)
    assert snapshot.users[2].retries_rate.value == 0.0
    assert snapshot.backhaul_rssi == {1: -57.0}
    assert snapshot.goodput == pytest.approx(10.0)


def test_build_snapshot__reset() -> None:
    """
    This function tests build_snapshot() when the counters went backwards.
    """
    world = create_world_helper()
    world.step(0)
    with pytest.raises(CounterResetError):
        perception.build_snapshot(
            world.counters, zero_counters(GRAPH_SAMPLE), 1000.0, world.graph, {}
        )

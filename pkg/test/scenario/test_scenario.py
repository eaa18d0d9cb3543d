"""
This module contains unit tests of class Scenario.
"""

import copy
from typing import Any, Dict, List, NamedTuple, Sequence, cast
import numpy
import pytest
import phy
from data_types import (
    ErrorModelOption,
    InvalidInputError,
    Location,
    OFF_GRID,
    PhyParams,
    PropagationOption,
    ScenarioEvent,
    Transmitter,
    TriggerThresholds,
)

from ..__init__ import EXTERNAL_SAMPLE, SCENARIO_SAMPLE, create_scenario_helper


class CaseType(NamedTuple):
    """
    Data type of test cases: keyword arguments of create_scenario_helper() and the expected
    error message.
    """

    changes: Dict[str, Any]
    message: str


CASE_1 = CaseType(changes={"epochs": 0}, message="at least one epoch")

CASE_2 = CaseType(
    changes={"external_aps": (EXTERNAL_SAMPLE, EXTERNAL_SAMPLE)},
    message="must be unique",
)

CASE_3 = CaseType(
    changes={"external_aps": (EXTERNAL_SAMPLE._replace(channel=12),)},
    message="unavailable channel",
)

CASE_4 = CaseType(
    changes={
        "external_aps": (
            EXTERNAL_SAMPLE._replace(location=Location(OFF_GRID, 30.0, 0.0)),
        )
    },
    message="outside the enclosure",
)

CASE_5 = CaseType(
    changes={"demands": {2: 5e6}}, message="No demand declared for user 3"
)

CASE_6 = CaseType(changes={"demands": {2: -1.0, 3: 5e6}}, message="Negative demand")

CASE_7 = CaseType(
    changes={
        "timeline": (
            ScenarioEvent(5, "ActivateExternal", "ext"),
            ScenarioEvent(3, "DeactivateExternal", "ext"),
        )
    },
    message="non-decreasing",
)

CASE_8 = CaseType(
    changes={"timeline": (ScenarioEvent(5, "ActivateExternal", "nowhere"),)},
    message="unknown external AP",
)

CASE_9 = CaseType(
    changes={"timeline": (ScenarioEvent(5, "SetDemand", 1, demand=1.0),)},
    message="unknown user: 1",
)

CASE_10 = CaseType(
    changes={"timeline": (ScenarioEvent(5, "MoveUser", 2),)}, message="needs a location"
)

CASE_11 = CaseType(
    changes={"timeline": (ScenarioEvent(5, "SetDemand", 3, demand=-1.0),)},
    message="non-negative demand",
)


@pytest.mark.parametrize(
    "case",
    [
        CASE_1,
        CASE_2,
        CASE_3,
        CASE_4,
        CASE_5,
        CASE_6,
        CASE_7,
        CASE_8,
        CASE_9,
        CASE_10,
        CASE_11,
    ],
)
def test_scenario__invalid(case: CaseType) -> None:
    """
    This function tests that Scenario() refuses inconsistent inputs.
    """
    with pytest.raises(InvalidInputError, match=case.message):
        create_scenario_helper(**case.changes)


def test_events_and_phase_boundaries() -> None:
    """
    This function tests events_at() and phase_boundaries(): events at epoch 0 do not start a
    phase, and simultaneous events start only one.
    """
    # Arrange.
    timeline: Sequence[ScenarioEvent] = (
        ScenarioEvent(0, "SetDemand", 2, demand=1e6),
        ScenarioEvent(8, "DeactivateExternal", "ext"),
        ScenarioEvent(8, "SetDemand", 3, demand=2e6),
        ScenarioEvent(16, "ActivateExternal", "ext"),
    )
    scenario = create_scenario_helper(timeline=timeline)

    # Act.
    at_eight: List[ScenarioEvent] = scenario.events_at(8)

    # Assert.
    assert at_eight == [timeline[1], timeline[2]]
    assert scenario.events_at(9) == []
    assert scenario.phase_boundaries() == [8, 16]
    assert SCENARIO_SAMPLE.phase_boundaries() == []


def test_q_target() -> None:
    """
    This function tests q_target(): half the nominal demand (two users at 5 Mbps) unless it is
    given explicitly.
    """
    assert SCENARIO_SAMPLE.q_target(TriggerThresholds()) == pytest.approx(5.0)
    assert SCENARIO_SAMPLE.q_target(TriggerThresholds(q_target=3.0)) == 3.0


def test_rssi__options() -> None:
    """
    This function tests that rssi() and measured_rssi() follow the propagation option.
    """
    # Arrange.
    first = Location(OFF_GRID, 0.0, 0.0)
    second = Location(OFF_GRID, 10.0, 0.0)
    expected: float = phy.rssi_at(first, second, PhyParams())
    shadowed = copy.copy(SCENARIO_SAMPLE)
    shadowed.option_propagation = cast(
        PropagationOption, {"method": "LogDistanceShadowing", "sigma": 2.0}
    )

    # Act and assert.
    assert SCENARIO_SAMPLE.rssi(first, second) == pytest.approx(expected)
    assert SCENARIO_SAMPLE.measured_rssi(
        first, second, numpy.random.default_rng(0)
    ) == pytest.approx(expected)
    assert shadowed.rssi(first, second) == pytest.approx(expected)
    assert shadowed.measured_rssi(
        first, second, numpy.random.default_rng(1)
    ) == pytest.approx(expected + numpy.random.default_rng(1).normal(0.0, 2.0))


def test_rssi__no_such_option() -> None:
    """
    This function tests rssi() and measured_rssi() with an unknown propagation option.
    """
    scenario = copy.copy(SCENARIO_SAMPLE)
    scenario.option_propagation = PropagationOption(method="Raytracing")  # type: ignore
    point = Location(OFF_GRID, 0.0, 0.0)
    with pytest.raises(ValueError, match="No such option to produce RSSI"):
        scenario.rssi(point, point)
    with pytest.raises(ValueError, match="No such option to measure RSSI"):
        scenario.measured_rssi(point, point, numpy.random.default_rng(0))


def test_link_error_rate__options() -> None:
    """
    This function tests that link_error_rate() follows the error-model option.
    """
    # Arrange.
    sender = Location(OFF_GRID, 0.0, 0.0)
    receiver = Location(OFF_GRID, 50.0, 0.0)
    transmitters = [Transmitter(Location(OFF_GRID, 100.0, 0.0), 1, 0.3)]
    error_free = copy.copy(SCENARIO_SAMPLE)
    error_free.option_error_model = ErrorModelOption(method="ErrorFree")
    unknown = copy.copy(SCENARIO_SAMPLE)
    unknown.option_error_model = ErrorModelOption(method="Rain")  # type: ignore

    # Act and assert.
    assert SCENARIO_SAMPLE.link_error_rate(
        sender, receiver, 1, transmitters
    ) == pytest.approx(0.3)
    assert error_free.link_error_rate(sender, receiver, 1, transmitters) == 0.0
    with pytest.raises(ValueError, match="No such option to produce link errors"):
        unknown.link_error_rate(sender, receiver, 1, transmitters)

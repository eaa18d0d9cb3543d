"""
This module contains unit tests of parse_seeds(), scenario_from_mapping() and load_scenario().
"""

import copy
from pathlib import Path
from typing import Any, Dict
import pytest
import example
from scenario_file import load_scenario, parse_seeds, scenario_from_mapping
from data_types import AgentParams, ScenarioFileError, UsageError

SCENARIO_DIRECTORY = Path(__file__).resolve().parents[2] / "scenarios"

MINIMAL: Dict[str, Any] = {
    "name": "minimal",
    "tau_ms": 1000,
    "epochs": 20,
    "nodes": [
        {"role": "mAP", "x": 0, "y": 4, "channels": [1]},
        {"role": "EXT", "parent": 0, "x": 6, "y": 4, "channels": [1, 6]},
        {"role": "user", "parent": 0, "x": 0, "y": 8},
        {"role": "user", "parent": 1, "x": 10, "y": 4, "demand": 2.0e6},
    ],
}


@pytest.mark.parametrize(
    "value, expected",
    [("3..6", [3, 4, 5, 6]), ("5..5", [5]), (4, [4]), ("12", [12]), ([9, 2], [9, 2])],
)
def test_parse_seeds__normal(value: Any, expected: list) -> None:
    """
    This function tests parse_seeds() with normal inputs.
    """
    assert parse_seeds(value) == expected


@pytest.mark.parametrize("value", ["6..3", "a..b", "1,2", [], [1, "2"], True, 2.5])
def test_parse_seeds__malformed(value: Any) -> None:
    """
    This function tests parse_seeds() with malformed inputs.
    """
    with pytest.raises(UsageError, match="Malformed seeds"):
        parse_seeds(value)


def test_scenario_from_mapping() -> None:
    """
    This function tests scenario_from_mapping() with a minimal document: defaults fill in the
    rest, and users take the serving channel of their parent.
    """
    # Act.
    loaded = scenario_from_mapping(MINIMAL)

    # Assert.
    scenario = loaded.scenario
    assert scenario.name == "minimal"
    assert scenario.n_channels == 11
    assert loaded.seeds == [0]
    assert loaded.engine_parameters.agent == AgentParams()
    assert scenario.initial_graph.node(2).channels == (1,)
    assert scenario.initial_graph.node(3).channels == (6,)
    assert scenario.nominal_demands == {2: 5e6, 3: 2e6}
    assert scenario.initial_graph.node(1).location.grid_index == 26


def test_load_scenario__convergence() -> None:
    """
    This function tests that the shipped convergence file describes the built-in scenario.
    """
    loaded = load_scenario(str(SCENARIO_DIRECTORY / "convergence.yaml"))
    assert loaded.scenario.initial_graph == example.CONVERGENCE.initial_graph
    assert loaded.scenario.external_aps == example.CONVERGENCE.external_aps
    assert loaded.scenario.nominal_demands == example.CONVERGENCE.nominal_demands
    assert loaded.seeds == list(range(1, 51))


def test_load_scenario__resilience() -> None:
    """
    This function tests the shipped resilience file: three swaps start four phases.
    """
    loaded = load_scenario(str(SCENARIO_DIRECTORY / "resilience.yaml"))
    assert loaded.scenario.phase_boundaries() == [100, 200, 300]
    assert [item.active for item in loaded.scenario.external_aps] == [
        True,
        False,
        False,
        False,
    ]
    assert loaded.seeds == list(range(1, 21))


def test_load_scenario__testbed() -> None:
    """
    This function tests the shipped testbed file: the extender is placed automatically midway
    between the mAP at (0, 4) and the centroid (15, 4) of its users.
    """
    loaded = load_scenario(str(SCENARIO_DIRECTORY / "testbed.yaml"))
    extender = loaded.scenario.initial_graph.node(1)
    assert (extender.location.x, extender.location.y) == (8.0, 4.0)
    assert loaded.scenario.tau_ms == 4000.0
    assert loaded.engine_parameters.thresholds.rssi_min == -65.0
    assert loaded.scenario.option_propagation["method"] == "LogDistanceShadowing"


def document_with(path: str, value: Any) -> Dict[str, Any]:
    """
    This is a helper function to copy the minimal document with one key changed (or removed if
    value is None). path is a dotted key path; list positions are integers.
    """
    document = copy.deepcopy(MINIMAL)
    *parents, last = path.split(".")
    target: Any = document
    for key in parents:
        target = target[int(key)] if key.isdigit() else target.setdefault(key, {})
    if value is None:
        del target[int(last) if last.isdigit() else last]
    else:
        target[int(last) if last.isdigit() else last] = value
    return document


CASES_MALFORMED = [
    # (changed key path, new value, expected key path of the error)
    ("nodes.1.parent", 5, "nodes[1].parent"),
    ("nodes.1.x", 5, "nodes[1].x"),
    ("nodes.2.channels", [1], "nodes[2].channels"),
    ("nodes.0.role", "router", "nodes[0].role"),
    ("nodes.3.x", "auto", "nodes[3].x"),
    ("phy.foo", 1.0, "phy.foo"),
    ("phy.wall_loss", "thick", "phy.wall_loss"),
    ("agent.relocation_patience", 2.5, "agent.relocation_patience"),
    ("colour", "blue", "colour"),
    ("name", None, "name"),
    ("seeds", "x..y", "seeds"),
    ("area", [0, 0, 20], "area"),
    ("propagation", {"method": "Raytracing"}, "propagation.method"),
]


@pytest.mark.parametrize("changed, value, key_path", CASES_MALFORMED)
def test_scenario_from_mapping__malformed(
    changed: str, value: Any, key_path: str
) -> None:
    """
    This function tests that scenario_from_mapping() names the key path of a malformed entry.
    """
    with pytest.raises(ScenarioFileError) as error:
        scenario_from_mapping(document_with(changed, value))
    assert error.value.key_path == key_path


def test_load_scenario__not_yaml(tmp_path) -> None:
    """
    This function tests load_scenario() with a file that is not YAML.
    """
    path = tmp_path / "broken.yaml"
    path.write_text("name: [unclosed\n")
    with pytest.raises(ScenarioFileError, match="not valid YAML"):
        load_scenario(str(path))

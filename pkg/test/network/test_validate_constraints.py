"""
This module contains unit tests of validate_constraints() and path_of().
"""

from typing import List
import numpy
import pytest
from network import (
    NetworkGraph,
    enumerate_channel_actions,
    path_of,
    validate_constraints,
)
from data_types import InvalidNodeError, Link, NoPathError

from ..__init__ import AREA_SAMPLE, EXT_SAMPLE, GRAPH_SAMPLE, MAP_SAMPLE, USER_OF_EXT


def constraints_of(graph: NetworkGraph) -> List[str]:
    """
    :return: the names of the constraints a graph breaks.
    """
    return [violation.constraint for violation in validate_constraints(graph)]


def test_validate_constraints__valid() -> None:
    """
    This function tests validate_constraints() with the valid sample graph.
    """
    assert validate_constraints(GRAPH_SAMPLE) == []


def test_validate_constraints__unavailable_channel() -> None:
    """
    This function tests constraint (a): channels outside [1, N].
    """
    graph = GRAPH_SAMPLE.with_channels(1, (1, 12)).with_channels(3, (12,))
    assert constraints_of(graph) == ["a", "a"]


def test_validate_constraints__radio_count() -> None:
    """
    This function tests constraints (b) and (c): one channel per radio, and no more distinct
    channels than radios.
    """
    missing = GRAPH_SAMPLE.with_node(GRAPH_SAMPLE.node(1)._replace(channels=(1,)))
    assert "b" in constraints_of(missing)
    too_many = GRAPH_SAMPLE.with_node(GRAPH_SAMPLE.node(0)._replace(channels=(1, 6)))
    assert "c" in constraints_of(too_many)


def test_validate_constraints__link() -> None:
    """
    This function tests constraint (d): a user that does not follow its parent's channel.
    """
    violations = validate_constraints(GRAPH_SAMPLE.with_channels(3, (7,)))
    assert [item.constraint for item in violations] == ["d"]
    assert violations[0].link == Link(parent=1, child=3, channel=6)


def test_validate_constraints__randomized() -> None:
    """
    This function tests that every channel action, once synchronized, gives a valid graph,
    over many random draws.
    """
    rng = numpy.random.default_rng(7)
    actions = enumerate_channel_actions(0, GRAPH_SAMPLE, 11)
    actions += enumerate_channel_actions(1, GRAPH_SAMPLE, 11)
    graph = GRAPH_SAMPLE
    for _ in range(10000):
        action = actions[int(rng.integers(len(actions)))]
        assert action.channels is not None
        graph = graph.with_channels(action.node, action.channels).synchronized(
            action.node
        )
        assert validate_constraints(graph) == []


def test_path_of() -> None:
    """
    This function tests path_of() with normal inputs.
    """
    assert path_of(3, GRAPH_SAMPLE).links == (
        Link(parent=0, child=1, channel=1),
        Link(parent=1, child=3, channel=6),
    )
    assert path_of(2, GRAPH_SAMPLE).links == (Link(parent=0, child=2, channel=1),)


def test_path_of__error() -> None:
    """
    This function tests path_of() with a managed node and with a cycle.
    """
    with pytest.raises(InvalidNodeError, match="not a user device"):
        path_of(1, GRAPH_SAMPLE)

    # Arrange: extenders 1 and 2 are each other's parent.
    cyclic = NetworkGraph(
        [
            MAP_SAMPLE,
            EXT_SAMPLE._replace(parent=2),
            EXT_SAMPLE._replace(index=2, parent=1),
            USER_OF_EXT,
        ],
        AREA_SAMPLE,
    )

    # Act and Assert.
    with pytest.raises(NoPathError, match="no valid path"):
        path_of(3, cyclic)
    assert "structure" in constraints_of(cyclic)

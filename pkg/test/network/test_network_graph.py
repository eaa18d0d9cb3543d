"""
This module contains unit tests of class NetworkGraph.
"""

import pytest
from network import NetworkGraph
from data_types import InvalidInputError, InvalidNodeError, Link

from ..__init__ import (
    AREA_SAMPLE,
    EXT_SAMPLE,
    GRAPH_SAMPLE,
    MAP_SAMPLE,
    NODES_SAMPLE,
    USER_OF_EXT,
    USER_OF_MAP,
)


def test_network_graph__queries() -> None:
    """
    This function tests the read-only queries of a graph.
    """
    assert GRAPH_SAMPLE.managed_indices == [0, 1]
    assert GRAPH_SAMPLE.user_indices == [2, 3]
    assert GRAPH_SAMPLE.num_extenders == 1
    assert GRAPH_SAMPLE.children(0) == [1, 2]
    assert GRAPH_SAMPLE.links() == [
        Link(parent=0, child=1, channel=1),
        Link(parent=0, child=2, channel=1),
        Link(parent=1, child=3, channel=6),
    ]
    assert GRAPH_SAMPLE.users_served_by(0) == [2, 3]
    assert GRAPH_SAMPLE.users_served_by(1) == [3]
    with pytest.raises(InvalidNodeError, match="No such node"):
        GRAPH_SAMPLE.node(4)


def test_network_graph__value() -> None:
    """
    This function tests that graphs are values: with_*() leaves the original untouched.
    """
    # Arrange.
    same = NetworkGraph(list(reversed(NODES_SAMPLE)), AREA_SAMPLE, 11)

    # Act.
    moved = GRAPH_SAMPLE.with_channels(1, (3, 8))

    # Assert.
    assert same == GRAPH_SAMPLE
    assert hash(same) == hash(GRAPH_SAMPLE)
    assert moved != GRAPH_SAMPLE
    assert GRAPH_SAMPLE.node(1).channels == (1, 6)
    assert moved.node(1).channels == (3, 8)


def test_synchronized() -> None:
    """
    This function tests synchronized(): the new backhaul channel of the extender is pushed to
    the mAP, then every child follows its parent's serving radio.
    """
    # Act.
    graph = GRAPH_SAMPLE.with_channels(1, (3, 8)).synchronized(1)

    # Assert.
    assert graph.node(0).channels == (3,)
    assert graph.node(1).channels == (3, 8)
    assert graph.node(2).channels == (3,)
    assert graph.node(3).channels == (8,)


def test_network_graph__error() -> None:
    """
    This function tests NetworkGraph with malformed node lists.
    """
    with pytest.raises(InvalidInputError, match="Node 0 must be the mAP"):
        NetworkGraph([EXT_SAMPLE._replace(index=0)], AREA_SAMPLE)
    with pytest.raises(InvalidInputError, match="contiguous"):
        NetworkGraph([MAP_SAMPLE, USER_OF_EXT], AREA_SAMPLE)
    with pytest.raises(InvalidInputError, match="ordered as mAP, extenders"):
        NetworkGraph(
            [MAP_SAMPLE, USER_OF_MAP._replace(index=1), EXT_SAMPLE._replace(index=2)],
            AREA_SAMPLE,
        )

"""
This module contains the network model: class LocationGrid, class NetworkGraph, and the functions
that enumerate channel actions, check constraints (a)-(d) and find user paths.
"""

import itertools
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple
import networkx
from data_types import (
    Action,
    Area,
    InvalidInputError,
    InvalidNodeError,
    Link,
    Location,
    NodeRecord,
    NoPathError,
    Path,
    Violation,
)

logger = logging.getLogger(__name__)

ROLE_RANK: Dict[str, int] = {"mAP": 0, "EXT": 1, "user": 2}


class LocationGrid:
    """
    Uniform grid of candidate extender locations over the area. Grid indices start from 1 and
    run row by row (x first).
    """

    def __init__(self, area: Area, spacing: float) -> None:
        if spacing <= 0:
            raise InvalidInputError("Grid spacing must be positive.")
        self.area: Area = area
        self.spacing: float = spacing
        self.columns: int = (
            int(math.floor((area.x_max - area.x_min) / spacing + 1e-9)) + 1
        )
        self.rows: int = int(math.floor((area.y_max - area.y_min) / spacing + 1e-9)) + 1

    def __len__(self) -> int:
        return self.columns * self.rows

    def contains_cell(self, column: int, row: int) -> bool:
        """
        :return: True if (column, row) is a cell of the grid.
        """
        return 0 <= column < self.columns and 0 <= row < self.rows

    def cell(self, column: int, row: int) -> Location:
        """
        :param column: column of the cell, from 0.
        :param row: row of the cell, from 0.
        :return: the location of the cell.
        """
        if not self.contains_cell(column, row):
            raise InvalidInputError(f"Cell ({column}, {row}) is outside the grid.")
        return Location(
            grid_index=1 + row * self.columns + column,
            x=self.area.x_min + column * self.spacing,
            y=self.area.y_min + row * self.spacing,
        )

    def cell_of(self, location: Location) -> Tuple[int, int]:
        """
        :return: (column, row) of a location on the grid.
        """
        if not 1 <= location.grid_index <= len(self):
            raise InvalidInputError(f"{location} is not a candidate location.")
        row, column = divmod(location.grid_index - 1, self.columns)
        return column, row

    def locations(self) -> List[Location]:
        """
        :return: all candidate locations, ordered by grid index.
        """
        return [
            self.cell(column, row)
            for row in range(self.rows)
            for column in range(self.columns)
        ]

    def _snap_axis(
        self, value: float, origin: float, count: int, target: Optional[float]
    ) -> int:
        position: float = (value - origin) / self.spacing
        lower: int = int(math.floor(position))
        fraction: float = position - lower
        if math.isclose(fraction, 0.5, abs_tol=1e-9):
            # ties go toward the target
            if target is not None and (target - origin) / self.spacing > position:
                step = lower + 1
            else:
                step = lower
        elif fraction < 0.5:
            step = lower
        else:
            step = lower + 1
        return min(max(step, 0), count - 1)

    def snap(
        self, x: float, y: float, toward: Optional[Tuple[float, float]] = None
    ) -> Location:
        """
        This method snaps a point to the nearest grid cell.
        :param x: x coordinate in meters.
        :param y: y coordinate in meters.
        :param toward: optional point; on an exact tie the cell closer to it is chosen, otherwise
        the lower cell.
        :return: the snapped location.
        """
        column: int = self._snap_axis(
            x, self.area.x_min, self.columns, None if toward is None else toward[0]
        )
        row: int = self._snap_axis(
            y, self.area.y_min, self.rows, None if toward is None else toward[1]
        )
        return self.cell(column, row)


def radio_channel(record: NodeRecord, radio: Optional[int]) -> int:
    """
    :return: the channel of a radio of the node, or 0 if the radio does not exist.
    """
    if radio is None or not 0 <= radio < len(record.channels):
        return 0
    return record.channels[radio]


class NetworkGraph:
    """
    The mesh as an immutable value: node records ordered by index (mAP, extenders, users), the
    area and the number of available channels. Links are derived from parent pointers; a link's
    channel is the channel of the parent's serving radio. Methods named with_* return new graphs.
    """

    def __init__(
        self, nodes: Sequence[NodeRecord], area: Area, n_channels: int = 11
    ) -> None:
        ordered: Tuple[NodeRecord, ...] = tuple(
            sorted(nodes, key=lambda record: record.index)
        )
        if not ordered or ordered[0].index != 0 or ordered[0].role != "mAP":
            raise InvalidInputError("Node 0 must be the mAP.")
        for position, record in enumerate(ordered):
            if record.index != position:
                raise InvalidInputError("Node indices must be contiguous from 0.")
            if (
                position > 0
                and ROLE_RANK[record.role] < ROLE_RANK[ordered[position - 1].role]
            ):
                raise InvalidInputError(
                    "Nodes must be ordered as mAP, extenders, then user devices."
                )
            if position > 0 and record.role == "mAP":
                raise InvalidInputError("There can be only one mAP.")
        if n_channels < 1:
            raise InvalidInputError("At least one channel must be available.")

        self.nodes: Tuple[NodeRecord, ...] = ordered
        self.area: Area = area
        self.n_channels: int = n_channels

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NetworkGraph):
            return NotImplemented
        return (self.nodes, self.area, self.n_channels) == (
            other.nodes,
            other.area,
            other.n_channels,
        )

    def __hash__(self) -> int:
        return hash((self.nodes, self.area, self.n_channels))

    def __repr__(self) -> str:
        return f"NetworkGraph(nodes={self.nodes!r}, n_channels={self.n_channels})"

    @property
    def managed_indices(self) -> List[int]:
        """
        :return: indices of the mAP and the extenders.
        """
        return [record.index for record in self.nodes if record.role != "user"]

    @property
    def user_indices(self) -> List[int]:
        """
        :return: indices of the user devices.
        """
        return [record.index for record in self.nodes if record.role == "user"]

    @property
    def num_extenders(self) -> int:
        """
        :return: M, the number of extenders.
        """
        return sum(1 for record in self.nodes if record.role == "EXT")

    def node(self, index: int) -> NodeRecord:
        """
        :return: the record of node index.
        """
        if not 0 <= index < len(self.nodes):
            raise InvalidNodeError(f"No such node: {index}")
        return self.nodes[index]

    def children(self, index: int) -> List[int]:
        """
        :return: indices of the nodes whose parent is index.
        """
        return [record.index for record in self.nodes if record.parent == index]

    def link_of(self, child: int) -> Link:
        """
        :return: the link between a node and its parent.
        """
        record: NodeRecord = self.node(child)
        if record.parent is None:
            raise NoPathError(f"Node {child} has no parent.")
        parent: NodeRecord = self.node(record.parent)
        return Link(
            parent=parent.index,
            child=child,
            channel=radio_channel(parent, parent.serving_radio),
        )

    def links(self) -> List[Link]:
        """
        :return: all links, ordered by child index.
        """
        return [
            self.link_of(record.index)
            for record in self.nodes
            if record.parent is not None
        ]

    def to_digraph(self) -> networkx.DiGraph:
        """
        :return: a networkx DiGraph with one edge per link (parent -> child), edges carrying the
        link channel.
        """
        digraph = networkx.DiGraph()
        for record in self.nodes:
            digraph.add_node(record.index, role=record.role)
        for link in self.links():
            digraph.add_edge(link.parent, link.child, channel=link.channel)
        return digraph

    def users_served_by(self, index: int) -> List[int]:
        """
        :return: users whose path to the mAP passes through node index.
        """
        digraph = self.to_digraph()
        if not networkx.is_directed_acyclic_graph(digraph):
            return []
        descendants = networkx.descendants(digraph, index)
        return [user for user in self.user_indices if user in descendants]

    def with_node(self, record: NodeRecord) -> "NetworkGraph":
        """
        :return: a copy of the graph with one node record replaced.
        """
        nodes: List[NodeRecord] = list(self.nodes)
        nodes[record.index] = record
        return NetworkGraph(nodes, self.area, self.n_channels)

    def with_channels(self, index: int, channels: Tuple[int, ...]) -> "NetworkGraph":
        """
        :return: a copy of the graph with the channels of one node replaced, without
        synchronizing link endpoints.
        """
        return self.with_node(self.node(index)._replace(channels=tuple(channels)))

    def with_location(self, index: int, location: Location) -> "NetworkGraph":
        """
        :return: a copy of the graph with one node moved.
        """
        return self.with_node(self.node(index)._replace(location=location))

    def synchronized(self, origin: int) -> "NetworkGraph":
        """
        This method re-synchronizes link endpoints after node origin was retuned.
        The uplink channel of origin is pushed to the serving radio of its parent (and further up
        while the parent serves and reaches its own parent on the same radio); then every child
        radio is retuned, top-down, to the serving channel of its parent.
        :param origin: index of the node whose radios were changed.
        :return: the synchronized graph.
        """
        records: Dict[int, NodeRecord] = {record.index: record for record in self.nodes}

        def set_radio(index: int, radio: int, channel: int) -> None:
            channels: List[int] = list(records[index].channels)
            channels[radio] = channel
            records[index] = records[index]._replace(channels=tuple(channels))

        current: NodeRecord = records[origin]
        while current.parent is not None and current.uplink_radio is not None:
            parent: NodeRecord = records[current.parent]
            if parent.serving_radio is None:
                break
            set_radio(
                parent.index,
                parent.serving_radio,
                current.channels[current.uplink_radio],
            )
            if parent.serving_radio != parent.uplink_radio:
                break
            current = records[parent.index]

        children: Dict[int, List[int]] = {index: [] for index in records}
        for record in records.values():
            if record.parent is not None and record.parent in children:
                children[record.parent].append(record.index)

        queue: List[int] = [0]
        visited: set = set()
        while queue:
            index = queue.pop(0)
            if index in visited:
                continue
            visited.add(index)
            serving: Optional[int] = records[index].serving_radio
            for child in sorted(children[index]):
                uplink: Optional[int] = records[child].uplink_radio
                if serving is not None and uplink is not None:
                    set_radio(child, uplink, records[index].channels[serving])
                queue.append(child)

        return NetworkGraph(
            [records[index] for index in sorted(records)], self.area, self.n_channels
        )


def enumerate_channel_actions(
    node: int, graph: NetworkGraph, n_channels: int
) -> List[Action]:
    """
    This function lists the channel configuration actions of a managed node, in lexicographic
    channel order.
    :param node: index of the mAP or of an extender.
    :param graph: the network graph.
    :param n_channels: N, the number of available channels.
    :return: N ** (number of radios) actions.
    """
    record: NodeRecord = graph.node(node)
    if record.role == "user":
        raise InvalidNodeError(
            f"Node {node} is a user device and cannot be configured."
        )
    if n_channels < 1:
        raise InvalidInputError("At least one channel must be available.")
    return [
        Action(kind="ChannelConfig", node=node, channels=combination)
        for combination in itertools.product(
            range(1, n_channels + 1), repeat=record.radio_count
        )
    ]


def validate_constraints(graph: NetworkGraph) -> List[Violation]:
    """
    This function checks constraints (a)-(d) and the tree structure of the graph.
    (a) every channel is one of the N available channels;
    (b) every radio has exactly one channel;
    (c) a node uses no more distinct channels than it has radios;
    (d) the two ends of every link share the link channel.
    :param graph: the network graph.
    :return: the list of violations, empty iff the graph is valid.
    """
    violations: List[Violation] = []

    for record in graph.nodes:
        if any(not 1 <= channel <= graph.n_channels for channel in record.channels):
            violations.append(
                Violation(
                    "a",
                    record.index,
                    None,
                    f"node {record.index} uses a channel outside [1, {graph.n_channels}]",
                )
            )
        if len(set(record.channels)) > record.radio_count:
            violations.append(
                Violation(
                    "c",
                    record.index,
                    None,
                    f"node {record.index} uses {len(set(record.channels))} channels on "
                    f"{record.radio_count} radios",
                )
            )
        elif len(record.channels) != record.radio_count:
            violations.append(
                Violation(
                    "b",
                    record.index,
                    None,
                    f"node {record.index} has {record.radio_count} radios but "
                    f"{len(record.channels)} channels",
                )
            )
        if record.role != "mAP" and record.parent is None:
            violations.append(
                Violation(
                    "structure",
                    record.index,
                    None,
                    f"node {record.index} is not attached",
                )
            )
        if record.parent is not None and not 0 <= record.parent < len(graph.nodes):
            violations.append(
                Violation(
                    "structure",
                    record.index,
                    None,
                    f"node {record.index} has an unknown parent {record.parent}",
                )
            )
            return violations

    digraph = graph.to_digraph()
    if not networkx.is_directed_acyclic_graph(digraph):
        violations.append(Violation("structure", None, None, "the graph has a cycle"))
    else:
        for user in graph.user_indices:
            if not networkx.has_path(digraph, 0, user):
                violations.append(
                    Violation(
                        "structure", user, None, f"user {user} cannot reach the mAP"
                    )
                )

    for link in graph.links():
        child: NodeRecord = graph.node(link.child)
        child_channel: int = radio_channel(child, child.uplink_radio)
        if link.channel == 0 or child_channel != link.channel:
            violations.append(
                Violation(
                    "d",
                    link.child,
                    link,
                    f"link ({link.parent},{link.child}) has no common channel "
                    f"({link.channel} vs {child_channel})",
                )
            )

    return violations


def path_of(user: int, graph: NetworkGraph) -> Path:
    """
    This function follows the parent chain of a user device up to the mAP.
    :param user: index of the user device.
    :param graph: the network graph.
    :return: the path, ordered from the mAP outward.
    """
    record: NodeRecord = graph.node(user)
    if record.role != "user":
        raise InvalidNodeError(f"Node {user} is not a user device.")

    links: List[Link] = []
    seen = {user}
    current: NodeRecord = record
    while current.parent is not None:
        if current.parent in seen or not 0 <= current.parent < len(graph.nodes):
            raise NoPathError(f"User {user} has no valid path to the mAP.")
        links.append(graph.link_of(current.index))
        seen.add(current.parent)
        current = graph.node(current.parent)

    if current.index != 0:
        raise NoPathError(f"User {user} is disconnected from the mAP.")
    return Path(user=user, links=tuple(reversed(links)))

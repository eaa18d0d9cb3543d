"""
This module contains the knowledge base of the agent: the Perception table, the Q-table and the
Channel-Location table, the Q-learning update, and the plain-text dump/load of all three.

Dump format (tab-separated, one section after the other, "-" marks an empty cell):

    n_channels   <N>
    [perception]
    node  radio  channel  utilization  activity  next_hops
    [users]
    user  retries_rate  error_rate
    [q]
    node  state  kind  action_node  channels  target  value
    [channel_location]
    grid_index  <value of channel 1>  ...  <value of channel N>
    [end]
"""

import csv
import logging
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple
from network import NetworkGraph
from perception import PerceptionSnapshot
from data_types import (
    Action,
    DomainError,
    InvalidInputError,
    KnowledgeBaseLoadError,
    Location,
    SENTINEL_UTILIZATION,
)

logger = logging.getLogger(__name__)

EMPTY: str = "-"
SECTIONS: Tuple[str, ...] = (
    "[perception]",
    "[users]",
    "[q]",
    "[channel_location]",
    "[end]",
)


class QTable:
    """
    Q-values per node, keyed by (state, action) where the state is the grid index of the node's
    location. An entry that was never written reads 0 and is unvisited. A written entry is
    visited, even if its value is 0 (a failed action rewarded with nothing).
    """

    def __init__(self) -> None:
        self._entries: Dict[int, Dict[Tuple[int, Action], float]] = {}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QTable):
            return NotImplemented
        return sorted(self.entries()) == sorted(other.entries())

    def value(self, node: int, state: int, action: Action) -> float:
        """
        :return: Q(state, action) of the node, 0 if never written.
        """
        return self._entries.get(node, {}).get((state, action), 0.0)

    def is_visited(self, node: int, state: int, action: Action) -> bool:
        """
        :return: True if Q(state, action) of the node was ever written.
        """
        return (state, action) in self._entries.get(node, {})

    def set(self, node: int, state: int, action: Action, value: float) -> None:
        """
        This method writes Q(state, action) of the node.
        """
        self._entries.setdefault(node, {})[(state, action)] = value

    def state_values(self, node: int, state: int) -> Dict[Action, float]:
        """
        :return: every written entry of the node at state.
        """
        return {
            action: value
            for (entry_state, action), value in self._entries.get(node, {}).items()
            if entry_state == state
        }

    def max_value(self, node: int, state: Optional[int] = None) -> float:
        """
        :return: the largest written Q-value of the node (at state, if given), 0 if none.
        """
        values: List[float] = [
            value
            for (entry_state, _), value in self._entries.get(node, {}).items()
            if state is None or entry_state == state
        ]
        return max(values, default=0.0)

    def visited_count(self, node: int, state: int, kind: str = "ChannelConfig") -> int:
        """
        :return: the number of written entries of the given action kind at state.
        """
        return sum(
            1
            for (entry_state, action) in self._entries.get(node, {})
            if entry_state == state and action.kind == kind
        )

    def entries(self) -> Iterator[Tuple[int, int, Action, float]]:
        """
        :return: (node, state, action, value) of every written entry.
        """
        for node, table in self._entries.items():
            for (state, action), value in table.items():
                yield node, state, action, value

    def __len__(self) -> int:
        return sum(len(table) for table in self._entries.values())


def q_update(
    q_table: QTable,
    node: int,
    state: int,
    action: Action,
    reward: float,
    eta: float,
    gamma: float,
    next_state: Optional[int] = None,
) -> float:
    """
    This function applies the Q-learning update Q := Q + eta * (r + gamma * max Q' - Q).
    With gamma = 0 this is Q := Q + eta * (r - Q). For gamma > 0 (experimental) max Q' is taken
    over the node's actions at next_state, or at state if next_state is None.
    :return: the updated Q-value.
    """
    if not 0 <= eta <= 1 or not 0 <= gamma <= 1:
        raise InvalidInputError("eta and gamma must be in [0, 1].")
    current: float = q_table.value(node, state, action)
    bootstrap: float = 0.0
    if gamma > 0:
        bootstrap = q_table.max_value(node, state if next_state is None else next_state)
    updated: float = current + eta * (reward + gamma * bootstrap - current)
    q_table.set(node, state, action, updated)
    return updated


class ChannelLocationTable:
    """
    Last sensed utilization (percent, or the 1000 sentinel) of every channel at every location
    where a managed radio sensed it. Channels never sensed at a location stay empty (None).
    """

    def __init__(self, n_channels: int) -> None:
        if n_channels < 1:
            raise InvalidInputError("At least one channel must be available.")
        self.n_channels: int = n_channels
        self._rows: Dict[int, Dict[int, float]] = {}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChannelLocationTable):
            return NotImplemented
        return self.n_channels == other.n_channels and self._rows == other._rows

    def get(self, grid_index: int, channel: int) -> Optional[float]:
        """
        :return: the entry, or None if the channel was never sensed there.
        """
        return self._rows.get(grid_index, {}).get(channel)

    def set(self, grid_index: int, channel: int, utilization: float) -> None:
        """
        This method overwrites one entry.
        """
        if not 1 <= channel <= self.n_channels:
            raise InvalidInputError(f"No such channel: {channel}")
        if not (0 <= utilization <= 100 or utilization == SENTINEL_UTILIZATION):
            raise DomainError(f"Utilization must be in [0, 100] or 1000: {utilization}")
        self._rows.setdefault(grid_index, {})[channel] = utilization

    def locations(self) -> List[int]:
        """
        :return: grid indices with at least one entry, sorted.
        """
        return sorted(self._rows)

    def row(self, grid_index: int) -> List[Optional[float]]:
        """
        :return: entries of channels 1..N at a location.
        """
        return [
            self.get(grid_index, channel) for channel in range(1, self.n_channels + 1)
        ]


def record_channel_observation(
    table: ChannelLocationTable, location: Location, channel: int, utilization: float
) -> ChannelLocationTable:
    """
    This function stores the latest observation of a channel at a location, replacing any older
    one.
    :return: the table.
    """
    table.set(location.grid_index, channel, utilization)
    return table


class PerceptionRow(NamedTuple):
    """
    Connectivity and indicators of one radio.
    """

    next_hops: Tuple[int, ...]
    channel: int
    utilization: float
    activity: float


class PerceptionTable:
    """
    Mirror of the latest corrected perception snapshot, plus the connectivity of every radio.
    """

    def __init__(self) -> None:
        self.radios: Dict[Tuple[int, int], PerceptionRow] = {}
        self.users: Dict[int, Tuple[float, float]] = {}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PerceptionTable):
            return NotImplemented
        return self.radios == other.radios and self.users == other.users

    def update(self, snapshot: PerceptionSnapshot, graph: NetworkGraph) -> None:
        """
        This method replaces the table content with a snapshot. The next hops of a radio are
        the nodes it links to: children for the serving radio, the parent for the uplink radio.
        """
        self.radios = {}
        for (node, radio), indicators in sorted(snapshot.radios.items()):
            record = graph.node(node)
            hops: List[int] = []
            if record.uplink_radio == radio and record.parent is not None:
                hops.append(record.parent)
            if record.serving_radio == radio:
                hops.extend(graph.children(node))
            self.radios[(node, radio)] = PerceptionRow(
                next_hops=tuple(hops),
                channel=indicators.channel,
                utilization=indicators.utilization,
                activity=indicators.activity,
            )
        self.users = {
            user: (item.retries_rate.value, item.error_rate.value)
            for user, item in sorted(snapshot.users.items())
        }


class KnowledgeBase:
    """
    The three tables an agent learns into. One knowledge base belongs to one agent in one run.
    """

    def __init__(self, n_channels: int) -> None:
        self.perception: PerceptionTable = PerceptionTable()
        self.q_table: QTable = QTable()
        self.channel_location: ChannelLocationTable = ChannelLocationTable(n_channels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KnowledgeBase):
            return NotImplemented
        return (
            self.perception == other.perception
            and self.q_table == other.q_table
            and self.channel_location == other.channel_location
        )


# ==================
# dump and load
# ==================


def _cell(value: Optional[float]) -> str:
    return EMPTY if value is None else repr(float(value))


def _action_cells(action: Action) -> List[str]:
    channels: str = (
        EMPTY
        if action.channels is None
        else ",".join(str(item) for item in action.channels)
    )
    target: str = (
        EMPTY
        if action.target is None
        else f"{action.target.grid_index}:{action.target.x!r}:{action.target.y!r}"
    )
    return [action.kind, str(action.node), channels, target]


def _action_sort_key(entry: Tuple[int, int, Action, float]) -> Tuple:
    node, state, action, _ = entry
    return (node, state, _action_cells(action))


def persist(kb: KnowledgeBase, path: str) -> None:
    """
    This function dumps a knowledge base to a tab-separated file. Floats are written with repr()
    so that loading reproduces them exactly.
    """
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, delimiter="\t", lineterminator="\n")
        writer.writerow(["n_channels", kb.channel_location.n_channels])

        writer.writerow(["[perception]"])
        for (node, radio), row in sorted(kb.perception.radios.items()):
            writer.writerow(
                [
                    node,
                    radio,
                    row.channel,
                    _cell(row.utilization),
                    _cell(row.activity),
                    ",".join(str(hop) for hop in row.next_hops) or EMPTY,
                ]
            )

        writer.writerow(["[users]"])
        for user, (retries, errors) in sorted(kb.perception.users.items()):
            writer.writerow([user, _cell(retries), _cell(errors)])

        writer.writerow(["[q]"])
        for node, state, action, value in sorted(
            kb.q_table.entries(), key=_action_sort_key
        ):
            writer.writerow([node, state] + _action_cells(action) + [_cell(value)])

        writer.writerow(["[channel_location]"])
        for grid_index in kb.channel_location.locations():
            writer.writerow(
                [grid_index]
                + [_cell(item) for item in kb.channel_location.row(grid_index)]
            )

        writer.writerow(["[end]"])
    logger.debug("knowledge base written to %s", path)


class _Reader:
    """
    Parses cells of one line and reports failures with line and field.
    """

    def __init__(self, line: int, cells: List[str]) -> None:
        self.line: int = line
        self.cells: List[str] = cells

    def expect(self, count: int, what: str) -> None:
        if len(self.cells) != count:
            raise KnowledgeBaseLoadError(
                self.line, what, f"expected {count} fields, got {len(self.cells)}"
            )

    def integer(self, position: int, field: str) -> int:
        try:
            return int(self.cells[position])
        except ValueError as error:
            raise KnowledgeBaseLoadError(
                self.line, field, f"not an integer: {self.cells[position]}"
            ) from error

    def number(self, position: int, field: str) -> Optional[float]:
        if self.cells[position] == EMPTY:
            return None
        try:
            return float(self.cells[position])
        except ValueError as error:
            raise KnowledgeBaseLoadError(
                self.line, field, f"not a number: {self.cells[position]}"
            ) from error

    def required_number(self, position: int, field: str) -> float:
        value = self.number(position, field)
        if value is None:
            raise KnowledgeBaseLoadError(self.line, field, "value is missing")
        return value

    def action(self, position: int) -> Action:
        kind: str = self.cells[position]
        if kind not in ("ChannelConfig", "Reposition"):
            raise KnowledgeBaseLoadError(
                self.line, "kind", f"no such action kind: {kind}"
            )
        node: int = self.integer(position + 1, "action_node")
        channels: Optional[Tuple[int, ...]] = None
        target: Optional[Location] = None
        if self.cells[position + 2] != EMPTY:
            try:
                channels = tuple(
                    int(item) for item in self.cells[position + 2].split(",")
                )
            except ValueError as error:
                raise KnowledgeBaseLoadError(
                    self.line, "channels", "malformed channel list"
                ) from error
        if self.cells[position + 3] != EMPTY:
            parts: List[str] = self.cells[position + 3].split(":")
            try:
                target = Location(int(parts[0]), float(parts[1]), float(parts[2]))
            except (ValueError, IndexError):
                raise KnowledgeBaseLoadError(self.line, "target", "malformed location")
        if kind == "ChannelConfig":
            return Action(
                kind="ChannelConfig", node=node, channels=channels, target=target
            )
        return Action(kind="Reposition", node=node, channels=channels, target=target)


def restore(path: str) -> KnowledgeBase:
    """
    This function loads a knowledge base written by persist().
    A malformed or truncated file raises KnowledgeBaseLoadError naming the line and field.
    """
    with open(path, newline="") as handle:
        rows: List[List[str]] = list(csv.reader(handle, delimiter="\t"))

    if not rows or len(rows[0]) != 2 or rows[0][0] != "n_channels":
        raise KnowledgeBaseLoadError(1, "n_channels", "missing header")
    kb = KnowledgeBase(_Reader(1, rows[0]).integer(1, "n_channels"))

    section: str = ""
    finished: bool = False
    for number, cells in enumerate(rows[1:], start=2):
        if finished:
            raise KnowledgeBaseLoadError(number, "section", "content after [end]")
        if len(cells) == 1 and cells[0] in SECTIONS:
            expected: str = (
                SECTIONS[SECTIONS.index(section) + 1] if section else SECTIONS[0]
            )
            if cells[0] != expected:
                raise KnowledgeBaseLoadError(
                    number, "section", f"expected {expected}, got {cells[0]}"
                )
            section = cells[0]
            finished = section == "[end]"
            continue

        reader = _Reader(number, cells)
        if section == "[perception]":
            reader.expect(6, "perception")
            hops: Tuple[int, ...] = ()
            if cells[5] != EMPTY:
                try:
                    hops = tuple(int(item) for item in cells[5].split(","))
                except ValueError as error:
                    raise KnowledgeBaseLoadError(
                        number, "next_hops", "malformed node list"
                    ) from error
            kb.perception.radios[
                (reader.integer(0, "node"), reader.integer(1, "radio"))
            ] = PerceptionRow(
                next_hops=hops,
                channel=reader.integer(2, "channel"),
                utilization=reader.required_number(3, "utilization"),
                activity=reader.required_number(4, "activity"),
            )
        elif section == "[users]":
            reader.expect(3, "users")
            kb.perception.users[reader.integer(0, "user")] = (
                reader.required_number(1, "retries_rate"),
                reader.required_number(2, "error_rate"),
            )
        elif section == "[q]":
            reader.expect(7, "q")
            kb.q_table.set(
                reader.integer(0, "node"),
                reader.integer(1, "state"),
                reader.action(2),
                reader.required_number(6, "value"),
            )
        elif section == "[channel_location]":
            reader.expect(1 + kb.channel_location.n_channels, "channel_location")
            grid_index: int = reader.integer(0, "grid_index")
            for channel in range(1, kb.channel_location.n_channels + 1):
                value = reader.number(channel, f"channel {channel}")
                if value is not None:
                    try:
                        kb.channel_location.set(grid_index, channel, value)
                    except (DomainError, InvalidInputError) as error:
                        raise KnowledgeBaseLoadError(
                            number, f"channel {channel}", str(error)
                        )
        else:
            raise KnowledgeBaseLoadError(number, "section", "data outside of a section")

    if not finished:
        raise KnowledgeBaseLoadError(len(rows), "[end]", "file is truncated")
    return kb

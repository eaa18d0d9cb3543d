"""
This module loads scenario files. A scenario file is YAML; its keys mirror ScenarioParameters,
plus the agent constants and trigger thresholds of the engine and the default seed list.
See README.md for the key schema. Every malformed or unknown key raises ScenarioFileError
naming its key path (e.g. "nodes[1].parent").
"""

import logging
import re
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple, cast
import yaml
import engine_candidates
from network import LocationGrid, NetworkGraph
from scenario import Scenario
from data_types import (
    AgentParams,
    Area,
    ConstraintViolationError,
    EngineParameters,
    ErrorModelOption,
    ExternalAp,
    InvalidInputError,
    LogDistanceShadowing,
    Location,
    NodeRecord,
    OFF_GRID,
    PhyParams,
    PropagationOption,
    ScenarioEvent,
    ScenarioFileError,
    ScenarioOptions,
    ScenarioParameters,
    SentinelPolicy,
    TriggerThresholds,
    UsageError,
)

logger = logging.getLogger(__name__)

AUTO: str = "auto"

TOP_LEVEL_KEYS: Tuple[str, ...] = (
    "name",
    "tau_ms",
    "epochs",
    "n_channels",
    "seeds",
    "area",
    "enclosure",
    "grid_spacing",
    "packet_bytes",
    "phy",
    "propagation",
    "error_model",
    "nodes",
    "external_aps",
    "timeline",
    "sentinel",
    "agent",
    "thresholds",
)
REQUIRED_KEYS: Tuple[str, ...] = ("name", "tau_ms", "epochs", "nodes")

DEFAULT_AREA = Area(0.0, 0.0, 20.0, 10.0)
DEFAULT_ENCLOSURE = Area(-5.0, -5.0, 25.0, 15.0)
DEFAULT_DEMAND: float = 5e6  # bits/second, constant bit rate


class ScenarioFile(NamedTuple):
    """
    Everything a scenario file declares: the scenario, the engine parameters and the default
    seeds of its experiments.
    """

    scenario: Scenario
    engine_parameters: EngineParameters
    seeds: List[int]


def parse_seeds(value: Any) -> List[int]:
    """
    This function parses a seed list: "a..b" (both ends included), a single integer, or a list of
    integers.

    >>> parse_seeds("3..6")
    [3, 4, 5, 6]
    >>> parse_seeds([7, 1])
    [7, 1]
    """
    if isinstance(value, bool):
        raise UsageError(f"Malformed seeds: {value!r}")
    if isinstance(value, int):
        return [value]
    if isinstance(value, list) and value and all(
        isinstance(item, int) and not isinstance(item, bool) for item in value
    ):
        return list(value)
    if isinstance(value, str):
        matched = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", value)
        if matched:
            first, last = int(matched.group(1)), int(matched.group(2))
            if first <= last:
                return list(range(first, last + 1))
        elif value.strip().isdigit():
            return [int(value)]
    raise UsageError(f"Malformed seeds: {value!r}")


# ==================
# typed accessors
# ==================


def _mapping(value: Any, path: str) -> Mapping[str, Any]:
    if not isinstance(value, dict):
        raise ScenarioFileError(path, "expected a mapping")
    return value


def _sequence(value: Any, path: str) -> List[Any]:
    if not isinstance(value, list):
        raise ScenarioFileError(path, "expected a list")
    return value


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioFileError(path, f"expected a number, got {value!r}")
    return float(value)


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioFileError(path, f"expected an integer, got {value!r}")
    return value


def _check_keys(
    mapping: Mapping[str, Any],
    allowed: Sequence[str],
    path: str,
    required: Sequence[str] = (),
) -> None:
    for key in mapping:
        if key not in allowed:
            raise ScenarioFileError(
                f"{path}.{key}" if path else str(key), "unknown key"
            )
    for key in required:
        if key not in mapping:
            raise ScenarioFileError(f"{path}.{key}" if path else key, "missing key")


def _area(value: Any, path: str) -> Area:
    items = _sequence(value, path)
    if len(items) != 4:
        raise ScenarioFileError(path, "expected [x_min, y_min, x_max, y_max]")
    area = Area(
        *(_number(item, f"{path}[{position}]") for position, item in enumerate(items))
    )
    if area.x_max <= area.x_min or area.y_max <= area.y_min:
        raise ScenarioFileError(path, "empty rectangle")
    return area


def _named_tuple(value: Any, path: str, kind: Any) -> Any:
    """
    This function builds a NamedTuple with defaults from a mapping of some of its fields.
    """
    mapping = _mapping(value, path)
    _check_keys(mapping, kind._fields, path)
    fields: Dict[str, Any] = {}
    for key, item in mapping.items():
        default = kind._field_defaults.get(key)
        if (item is None and default is None) or isinstance(default, str):
            fields[key] = item
        elif isinstance(default, int) and not isinstance(default, bool):
            fields[key] = _integer(item, f"{path}.{key}")
        else:
            fields[key] = _number(item, f"{path}.{key}")
    return kind(**fields)


def _point(mapping: Mapping[str, Any], path: str) -> Tuple[float, float]:
    return (
        _number(mapping.get("x"), f"{path}.x"),
        _number(mapping.get("y"), f"{path}.y"),
    )


def _propagation(value: Any, path: str) -> PropagationOption:
    mapping = _mapping(value, path)
    method = mapping.get("method")
    if method == "LogDistance":
        _check_keys(mapping, ("method",), path)
        return PropagationOption(method="LogDistance")
    if method == "LogDistanceShadowing":
        _check_keys(mapping, ("method", "sigma"), path, ("sigma",))
        return LogDistanceShadowing(
            method="LogDistanceShadowing",
            sigma=_number(mapping["sigma"], f"{path}.sigma"),
        )
    raise ScenarioFileError(f"{path}.method", f"no such propagation model: {method!r}")


def _error_model(value: Any, path: str) -> ErrorModelOption:
    mapping = _mapping(value, path)
    _check_keys(mapping, ("method",), path)
    method = mapping.get("method")
    if method not in ("HiddenNode", "ErrorFree"):
        raise ScenarioFileError(f"{path}.method", f"no such error model: {method!r}")
    return ErrorModelOption(method=method)


# ==================
# nodes
# ==================

NODE_KEYS: Tuple[str, ...] = ("role", "parent", "x", "y", "channels", "demand")


class _NodeEntry(NamedTuple):
    role: str
    parent: Optional[int]
    point: Optional[Tuple[float, float]]  # None for automatic placement
    channels: Tuple[int, ...]
    demand: float


def _node_entry(value: Any, path: str, position: int) -> _NodeEntry:
    mapping = _mapping(value, path)
    _check_keys(mapping, NODE_KEYS, path, ("role", "x", "y"))
    role = mapping["role"]
    if role not in ("mAP", "EXT", "user"):
        raise ScenarioFileError(f"{path}.role", f"no such role: {role!r}")

    parent: Optional[int] = None
    if role == "mAP":
        if "parent" in mapping:
            raise ScenarioFileError(f"{path}.parent", "the mAP has no parent")
    else:
        parent = _integer(mapping.get("parent"), f"{path}.parent")
        if not 0 <= parent < position:
            raise ScenarioFileError(f"{path}.parent", "must name an earlier node")

    point: Optional[Tuple[float, float]]
    if mapping["x"] == AUTO or mapping["y"] == AUTO:
        if role != "EXT" or mapping["x"] != mapping["y"]:
            raise ScenarioFileError(
                f"{path}.x", "only extenders may be placed automatically"
            )
        point = None
    else:
        point = _point(mapping, path)

    channels: Tuple[int, ...] = ()
    if role == "user":
        if "channels" in mapping:
            raise ScenarioFileError(
                f"{path}.channels", "user devices follow their parent"
            )
    else:
        items = _sequence(mapping.get("channels"), f"{path}.channels")
        if not items:
            raise ScenarioFileError(f"{path}.channels", "at least one radio is needed")
        channels = tuple(
            _integer(item, f"{path}.channels[{index}]")
            for index, item in enumerate(items)
        )

    demand: float = DEFAULT_DEMAND
    if "demand" in mapping:
        if role != "user":
            raise ScenarioFileError(f"{path}.demand", "only user devices have a demand")
        demand = _number(mapping["demand"], f"{path}.demand")
    return _NodeEntry(role, parent, point, channels, demand)


def _serving_radio(entry: _NodeEntry) -> Optional[int]:
    if entry.role == "user":
        return None
    return len(entry.channels) - 1


def build_nodes(
    entries: Sequence[_NodeEntry], grid: LocationGrid, area: Area, n_channels: int
) -> Tuple[NodeRecord, ...]:
    """
    This function turns node entries into node records. Managed nodes must stand on candidate
    locations; a user device takes the channel of its parent's serving radio. Extenders placed
    automatically go midway between their parent and the centroid of the users they serve.
    """
    records: List[NodeRecord] = []
    for index, entry in enumerate(entries):
        path = f"nodes[{index}]"
        if entry.point is None:
            assert entry.parent is not None
            location = records[entry.parent].location
        elif entry.role == "user":
            location = Location(OFF_GRID, *entry.point)
        else:
            location = grid.snap(*entry.point)
            if (location.x, location.y) != entry.point:
                raise ScenarioFileError(
                    f"{path}.x", "managed nodes stand on candidate locations"
                )

        channels: Tuple[int, ...] = entry.channels
        if entry.role == "user":
            assert entry.parent is not None
            parent = records[entry.parent]
            if parent.serving_radio is None:
                raise ScenarioFileError(f"{path}.parent", "the parent cannot serve")
            channels = (parent.channels[parent.serving_radio],)
        records.append(
            NodeRecord(
                index=index,
                role=cast(Any, entry.role),
                location=location,
                radio_count=len(channels),
                channels=channels,
                parent=entry.parent,
                uplink_radio=None if entry.parent is None else 0,
                serving_radio=_serving_radio(entry),
            )
        )

    for index, entry in enumerate(entries):
        if entry.point is None:
            graph = NetworkGraph(records, area, n_channels)
            placed = engine_candidates.recommended_location(index, graph, grid)
            records[index] = records[index]._replace(location=placed)
            logger.debug("extender %s placed at %s", index, placed)
    return tuple(records)


# ==================
# external APs and timeline
# ==================

EXTERNAL_KEYS: Tuple[str, ...] = (
    "label",
    "x",
    "y",
    "channel",
    "client",
    "offered_load",
    "active",
)
EVENT_KEYS: Tuple[str, ...] = ("epoch", "kind", "target", "x", "y", "demand")


def _external(value: Any, path: str) -> ExternalAp:
    mapping = _mapping(value, path)
    _check_keys(mapping, EXTERNAL_KEYS, path, ("label", "x", "y", "channel", "client"))
    client = _sequence(mapping["client"], f"{path}.client")
    if len(client) != 2:
        raise ScenarioFileError(f"{path}.client", "expected [x, y]")
    active = mapping.get("active", True)
    if not isinstance(active, bool):
        raise ScenarioFileError(f"{path}.active", "expected true or false")
    return ExternalAp(
        label=str(mapping["label"]),
        location=Location(OFF_GRID, *_point(mapping, path)),
        channel=_integer(mapping["channel"], f"{path}.channel"),
        client_location=Location(
            OFF_GRID,
            _number(client[0], f"{path}.client[0]"),
            _number(client[1], f"{path}.client[1]"),
        ),
        offered_load=_number(mapping.get("offered_load", 20e6), f"{path}.offered_load"),
        active=active,
    )


def _event(value: Any, path: str) -> ScenarioEvent:
    mapping = _mapping(value, path)
    _check_keys(mapping, EVENT_KEYS, path, ("epoch", "kind", "target"))
    kind = mapping["kind"]
    epoch = _integer(mapping["epoch"], f"{path}.epoch")
    if kind in ("ActivateExternal", "DeactivateExternal"):
        return ScenarioEvent(epoch, kind, str(mapping["target"]))
    if kind in ("MoveUser", "SetDemand"):
        target = _integer(mapping["target"], f"{path}.target")
        if kind == "MoveUser":
            return ScenarioEvent(
                epoch, kind, target, location=Location(OFF_GRID, *_point(mapping, path))
            )
        return ScenarioEvent(
            epoch, kind, target, demand=_number(mapping.get("demand"), f"{path}.demand")
        )
    raise ScenarioFileError(f"{path}.kind", f"no such event: {kind!r}")


# ==================
# loading
# ==================


def scenario_from_mapping(document: Any) -> ScenarioFile:
    """
    This function builds a scenario from a parsed scenario document.
    """
    mapping = _mapping(document, "<root>")
    _check_keys(mapping, TOP_LEVEL_KEYS, "", REQUIRED_KEYS)

    area = _area(mapping["area"], "area") if "area" in mapping else DEFAULT_AREA
    enclosure = (
        _area(mapping["enclosure"], "enclosure")
        if "enclosure" in mapping
        else DEFAULT_ENCLOSURE
    )
    n_channels = _integer(mapping.get("n_channels", 11), "n_channels")
    spacing = _number(mapping.get("grid_spacing", 2.0), "grid_spacing")
    if spacing <= 0:
        raise ScenarioFileError("grid_spacing", "must be positive")
    grid = LocationGrid(area, spacing)

    entries = [
        _node_entry(item, f"nodes[{index}]", index)
        for index, item in enumerate(_sequence(mapping["nodes"], "nodes"))
    ]
    if not entries or entries[0].role != "mAP":
        raise ScenarioFileError("nodes[0].role", "the first node must be the mAP")
    try:
        nodes = build_nodes(entries, grid, area, n_channels)
    except InvalidInputError as error:
        raise ScenarioFileError("nodes", str(error)) from error
    demands = {
        index: entry.demand
        for index, entry in enumerate(entries)
        if entry.role == "user"
    }

    seeds: List[int] = [0]
    if "seeds" in mapping:
        try:
            seeds = parse_seeds(mapping["seeds"])
        except UsageError as error:
            raise ScenarioFileError("seeds", str(error)) from error

    parameters = ScenarioParameters(
        name=str(mapping["name"]),
        area=area,
        enclosure=enclosure,
        grid_spacing=spacing,
        n_channels=n_channels,
        phy=_named_tuple(mapping.get("phy", {}), "phy", PhyParams),
        nodes=nodes,
        demands=demands,
        external_aps=tuple(
            _external(item, f"external_aps[{index}]")
            for index, item in enumerate(
                _sequence(mapping.get("external_aps", []), "external_aps")
            )
        ),
        timeline=tuple(
            _event(item, f"timeline[{index}]")
            for index, item in enumerate(
                _sequence(mapping.get("timeline", []), "timeline")
            )
        ),
        tau_ms=_number(mapping["tau_ms"], "tau_ms"),
        epochs=_integer(mapping["epochs"], "epochs"),
        sentinel=_named_tuple(mapping.get("sentinel", {}), "sentinel", SentinelPolicy),
        packet_bytes=_integer(mapping.get("packet_bytes", 1000), "packet_bytes"),
    )
    options = ScenarioOptions(
        propagation=_propagation(
            mapping.get("propagation", {"method": "LogDistance"}), "propagation"
        ),
        error_model=_error_model(
            mapping.get("error_model", {"method": "HiddenNode"}), "error_model"
        ),
    )
    engine_parameters = EngineParameters(
        agent=_named_tuple(mapping.get("agent", {}), "agent", AgentParams),
        thresholds=_named_tuple(
            mapping.get("thresholds", {}), "thresholds", TriggerThresholds
        ),
    )
    try:
        scenario = Scenario(parameters, options)
    except (InvalidInputError, ConstraintViolationError) as error:
        raise ScenarioFileError("<root>", str(error)) from error
    return ScenarioFile(
        scenario=scenario,
        engine_parameters=engine_parameters,
        seeds=seeds,
    )


def load_scenario(path: str) -> ScenarioFile:
    """
    This function reads a YAML scenario file.
    :param path: path of the file.
    :return: the scenario, its engine parameters and its seeds.
    """
    with open(path) as handle:
        try:
            document = yaml.safe_load(handle)
        except yaml.YAMLError as error:
            raise ScenarioFileError("<root>", f"not valid YAML: {error}") from error
    loaded = scenario_from_mapping(document)
    logger.info("scenario %s loaded from %s", loaded.scenario.name, path)
    return loaded

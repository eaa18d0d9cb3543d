"""
This module contains the built-in test cases: scenarios, engines and the performance setting.
Every scenario is available to the command line by its name (see BUILTINS).
"""

from typing import Dict, List, Optional, Sequence, Tuple
from engine import Engine
from network import LocationGrid
from performance import Performance
from scenario import Scenario
from scenario_file import ScenarioFile
from data_types import (
    AgentParams,
    Area,
    ConvergenceOption,
    EngineOptions,
    EngineParameters,
    ErrorModelOption,
    ExplorationOption,
    ExternalAp,
    GeometricDecay,
    Location,
    LogDistanceShadowing,
    NodeRecord,
    OFF_GRID,
    PerformanceOptions,
    PerformanceParameters,
    PhyParams,
    PropagationOption,
    ScenarioEvent,
    ScenarioOptions,
    ScenarioParameters,
    SentinelPolicy,
    TriggerThresholds,
)

# ======
# Common geometry: a 20 m x 10 m area inside a 30 m x 20 m enclosure, with candidate
# locations every 2 m (11 x 6 cells).

AREA = Area(0.0, 0.0, 20.0, 10.0)
ENCLOSURE = Area(-5.0, -5.0, 25.0, 15.0)
SPACING: float = 2.0
GRID = LocationGrid(AREA, SPACING)

DEMAND: float = 5e6  # constant bit rate of every user, bits/second
SEEDS: Tuple[int, ...] = tuple(range(1, 51))

S_OPTIONS = ScenarioOptions(
    propagation=PropagationOption(method="LogDistance"),
    error_model=ErrorModelOption(method="HiddenNode"),
)


def on_grid(x: float, y: float, grid: LocationGrid = GRID) -> Location:
    """
    :return: the candidate location at (x, y); (x, y) must be a grid point.
    """
    return grid.cell(
        round((x - grid.area.x_min) / grid.spacing),
        round((y - grid.area.y_min) / grid.spacing),
    )


def off_grid(x: float, y: float) -> Location:
    """
    :return: a point that is not a candidate extender location.
    """
    return Location(OFF_GRID, x, y)


def access_point(location: Location, channel: int) -> NodeRecord:
    """
    :return: a single-radio mAP.
    """
    return NodeRecord(0, "mAP", location, 1, (channel,), serving_radio=0)


def extender(
    index: int, location: Location, backhaul: int, fronthaul: int, parent: int = 0
) -> NodeRecord:
    """
    :return: a dual-radio extender; radio 0 reaches the parent, radio 1 serves the users.
    """
    return NodeRecord(
        index,
        "EXT",
        location,
        2,
        (backhaul, fronthaul),
        parent,
        uplink_radio=0,
        serving_radio=1,
    )


def user(index: int, location: Location, channel: int, parent: int) -> NodeRecord:
    """
    :return: a user device attached to parent, on the channel of its serving radio.
    """
    return NodeRecord(index, "user", location, 1, (channel,), parent, uplink_radio=0)


def external(
    label: str,
    x: float,
    y: float,
    channel: int,
    offered_load: float = 20e6,
    active: bool = True,
) -> ExternalAp:
    """
    :return: an external AP whose client stands 2 m to the right of it.
    """
    return ExternalAp(
        label, off_grid(x, y), channel, off_grid(x + 2.0, y), offered_load, active
    )


def build(
    name: str,
    nodes: Sequence[NodeRecord],
    externals: Sequence[ExternalAp] = (),
    timeline: Sequence[ScenarioEvent] = (),
    epochs: int = 150,
    tau_ms: float = 1000.0,
    phy: PhyParams = PhyParams(),
    options: ScenarioOptions = S_OPTIONS,
    demands: Optional[Dict[int, float]] = None,
    area: Area = AREA,
    enclosure: Area = ENCLOSURE,
    spacing: float = SPACING,
    n_channels: int = 11,
) -> Scenario:
    """
    This function assembles a scenario; every user demands DEMAND unless told otherwise.
    """
    return Scenario(
        ScenarioParameters(
            name=name,
            area=area,
            enclosure=enclosure,
            grid_spacing=spacing,
            n_channels=n_channels,
            phy=phy,
            nodes=tuple(nodes),
            demands=demands
            or {record.index: DEMAND for record in nodes if record.role == "user"},
            external_aps=tuple(externals),
            timeline=tuple(timeline),
            tau_ms=tau_ms,
            epochs=epochs,
            sentinel=SentinelPolicy(),
        ),
        options,
    )


# ======
# Scenarios.

# Walls attenuate 1 dB per meter: a transmitter more than about 17 m away goes unheard.
WALLED_PHY = PhyParams(wall_loss=1.0)

# One extender, one user on each node, two external APs; everything starts on channel 6.
# The busy external AP on channel 6 sits behind the extender, out of the mAP's hearing.
CONVERGENCE = build(
    "convergence",
    [
        access_point(on_grid(2, 4), 6),
        extender(1, on_grid(10, 4), 6, 6),
        user(2, off_grid(4, 8), 6, 0),
        user(3, off_grid(16, 8), 6, 1),
    ],
    [
        external("ap6", 22, 8, 6, offered_load=50e6),
        external("ap11", 8, -4, 11),
    ],
    phy=WALLED_PHY,
    demands={2: 8e6, 3: 8e6},
)

# Four external APs, two users on each node; the extender starts on (BH, FH) = (7, 3).
CONGESTED_NODES = (
    access_point(on_grid(2, 4), 7),
    extender(1, on_grid(10, 4), 7, 3),
    user(2, off_grid(4, 8), 7, 0),
    user(3, off_grid(0, 0), 7, 0),
    user(4, off_grid(16, 8), 3, 1),
    user(5, off_grid(18, 2), 3, 1),
)

CONGESTED_ENCLOSURE = Area(-5.0, -5.0, 27.0, 15.0)


def congested(
    name: str, externals: Sequence[Tuple[float, float, int, float]]
) -> Scenario:
    """
    :param externals: (x, y, channel, offered load) of every external AP.
    :return: the congested scenario with the given external APs.
    """
    return build(
        name,
        CONGESTED_NODES,
        [
            external(f"ap{channel}", x, y, channel, offered_load=load)
            for x, y, channel, load in externals
        ],
        epochs=200,
        phy=WALLED_PHY,
        enclosure=CONGESTED_ENCLOSURE,
    )


CONGESTED_A = congested(
    "congested_a",
    ((6, 12, 5, 35e6), (22, 4, 1, 45e6), (14, 12, 8, 25e6), (24, 10, 10, 45e6)),
)
CONGESTED_B = congested(
    "congested_b",
    ((24, 10, 5, 25e6), (22, 4, 11, 25e6), (14, 12, 8, 35e6), (6, 12, 1, 45e6)),
)

# External APs on channels 3, 10, 4 and 8 take turns behind the extender, each one replacing
# the previous; every swap starts a new phase and cuts the backhaul capacity.
RESILIENCE_CHANNELS: Tuple[int, ...] = (3, 10, 4, 8)
RESILIENCE_PHASE: int = 100


def resilience_timeline() -> List[ScenarioEvent]:
    """
    :return: the swaps: at the end of every phase the active external AP leaves and the next
    one arrives.
    """
    events: List[ScenarioEvent] = []
    for position in range(1, len(RESILIENCE_CHANNELS)):
        epoch = position * RESILIENCE_PHASE
        events.append(
            ScenarioEvent(
                epoch, "DeactivateExternal", f"ap{RESILIENCE_CHANNELS[position - 1]}"
            )
        )
        events.append(
            ScenarioEvent(
                epoch, "ActivateExternal", f"ap{RESILIENCE_CHANNELS[position]}"
            )
        )
    return events


RESILIENCE = build(
    "resilience",
    [
        access_point(on_grid(2, 4), 3),
        extender(1, on_grid(8, 4), 3, 3),
        user(2, off_grid(4, 8), 3, 0),
        user(3, off_grid(16, 8), 3, 1),
    ],
    [
        external(f"ap{channel}", 22, 4, channel, 55e6, active=position == 0)
        for position, channel in enumerate(RESILIENCE_CHANNELS)
    ],
    resilience_timeline(),
    epochs=RESILIENCE_PHASE * len(RESILIENCE_CHANNELS),
    phy=WALLED_PHY,
    demands={2: 25e6, 3: 25e6},
)

# An AP at (18, 6) is heard by the extender but not by the mAP: it is hidden from the
# backhaul, which starts on its channel. One user.
HIDDEN_NODE = build(
    "hidden_node",
    [
        access_point(on_grid(0, 4), 6),
        extender(1, on_grid(6, 4), 6, 1),
        user(2, off_grid(16, 2), 1, 1),
    ],
    [external("hidden", 18, 6, 6, offered_load=50e6)],
    phy=WALLED_PHY,
)

# 2 x 2 candidate locations and 3 channels: 4 * 3 * 3**2 = 108 configurations. The extender
# starts next to its users with its backhaul on channel 1, which a busy external AP shares.
ORACLE_AREA = Area(0.0, 0.0, 6.0, 6.0)
ORACLE_GRID = LocationGrid(ORACLE_AREA, 6.0)

ORACLE_SMALL = build(
    "oracle_small",
    [
        access_point(on_grid(0, 0, ORACLE_GRID), 1),
        extender(1, on_grid(6, 6, ORACLE_GRID), 1, 2),
        user(2, off_grid(9, 8), 2, 1),
        user(3, off_grid(8, 10), 2, 1),
    ],
    [external("ap1", 14, 12, 1, offered_load=35e6)],
    epochs=120,
    phy=PhyParams(wall_loss=1.5),
    demands={2: 8e6, 3: 8e6},
    area=ORACLE_AREA,
    enclosure=Area(-4.0, -4.0, 18.0, 14.0),
    spacing=6.0,
    n_channels=3,
)

# Heavy walls; the extender starts next to its users, too far from the mAP for the backhaul
# to carry their demand whatever the channels. Only moving it fixes the network.
LOCATION_COUPLING = build(
    "location_coupling",
    [
        access_point(on_grid(0, 4), 1),
        extender(1, on_grid(16, 4), 1, 6),
        user(2, off_grid(22, 12), 6, 1),
        user(3, off_grid(22, 8), 6, 1),
    ],
    demands={2: 15e6, 3: 15e6},
    phy=PhyParams(wall_loss=2.0),
)

# Four users, two on each node, long sensing epochs, noisy RSSI measurements and a busy
# neighbor on channel 6. A hidden interferer on the mAP's channel 3 appears after 30 epochs.
TESTBED = build(
    "testbed",
    [
        access_point(on_grid(0, 4), 3),
        extender(1, on_grid(8, 4), 3, 6),
        user(2, off_grid(2, 8), 3, 0),
        user(3, off_grid(4, 0), 3, 0),
        user(4, off_grid(14, 6), 6, 1),
        user(5, off_grid(16, 2), 6, 1),
    ],
    [
        external("hidden", 18, 6, 3, offered_load=40e6, active=False),
        external("neighbor", 12, -4, 6, offered_load=40e6),
    ],
    [ScenarioEvent(30, "ActivateExternal", "hidden")],
    epochs=75,
    tau_ms=4000.0,
    phy=WALLED_PHY,
    options=S_OPTIONS._replace(
        propagation=LogDistanceShadowing(method="LogDistanceShadowing", sigma=1.0)
    ),
    demands={2: 8e6, 3: 8e6, 4: 8e6, 5: 8e6},
)


# ======
# Engines.

E_PARAMETERS = EngineParameters(agent=AgentParams(), thresholds=TriggerThresholds())

TEMPERATURE = GeometricDecay(method="GeometricDecay", factor=0.95, floor=1.0)

GUIDED_OPTIONS = EngineOptions(
    exploration=ExplorationOption(method="Guided"), temperature=TEMPERATURE
)
UNGUIDED_OPTIONS = EngineOptions(
    exploration=ExplorationOption(method="Unguided"), temperature=TEMPERATURE
)

GUIDED_ENGINE = Engine(E_PARAMETERS, GUIDED_OPTIONS)
UNGUIDED_ENGINE = Engine(E_PARAMETERS, UNGUIDED_OPTIONS)


# ======
# Performance.

PERFORMANCE = Performance(
    PerformanceParameters(),
    PerformanceOptions(convergence=ConvergenceOption(method="Windowed")),
)


# ======
# Built-in scenarios by name. Some carry their own thresholds: the testbed accepts a
# weaker backhaul, and the location-coupling extender settles halfway to the mAP only under
# a lower RSSI floor.

BUILTINS: Dict[str, ScenarioFile] = {
    item.scenario.name: item
    for item in (
        ScenarioFile(CONVERGENCE, E_PARAMETERS, list(SEEDS)),
        ScenarioFile(CONGESTED_A, E_PARAMETERS, list(SEEDS)),
        ScenarioFile(CONGESTED_B, E_PARAMETERS, list(SEEDS)),
        ScenarioFile(RESILIENCE, E_PARAMETERS, list(range(1, 21))),
        ScenarioFile(HIDDEN_NODE, E_PARAMETERS, list(range(1, 21))),
        ScenarioFile(ORACLE_SMALL, E_PARAMETERS, list(SEEDS)),
        ScenarioFile(
            LOCATION_COUPLING,
            E_PARAMETERS._replace(thresholds=TriggerThresholds(rssi_min=-80.0)),
            list(range(1, 21)),
        ),
        ScenarioFile(
            TESTBED,
            E_PARAMETERS._replace(thresholds=TriggerThresholds(rssi_min=-65.0)),
            list(range(1, 11)),
        ),
    )
}

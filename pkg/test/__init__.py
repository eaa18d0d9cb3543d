"""
This module contains test functions.

We also put some constants and helper functions in this __init__ file for unit tests to use.

The sample scenario is small enough to work out by hand:

    mAP (node 0) at (0, 4), one radio on channel 1;
    extender (node 1) at (6, 4), backhaul radio on channel 1, serving radio on channel 6;
    user 2 attached to the mAP at (0, 8), user 3 attached to the extender at (10, 4);
    one external AP on channel 11 at (6, 12), sending 13 Mbps to a client at (8, 12).

Without walls every link is short enough to reach the maximal throughput of 65 Mbps, and every
transmitter is heard everywhere, so there are no hidden nodes. Every user asks for 5 Mbps, so
each managed link occupies 1/13 of the airtime and the external AP 0.2.
"""

from typing import Dict, List, Optional, Sequence
import numpy
from engine import Engine
from environment import World
from network import LocationGrid, NetworkGraph
from performance import Performance
from scenario import Scenario
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
    NodeRecord,
    OFF_GRID,
    PerformanceOptions,
    PerformanceParameters,
    PhyParams,
    PropagationOption,
    RunMetrics,
    ScenarioEvent,
    ScenarioOptions,
    ScenarioParameters,
    SentinelPolicy,
    TriggerThresholds,
)

AREA_SAMPLE = Area(0.0, 0.0, 20.0, 10.0)
ENCLOSURE_SAMPLE = Area(-5.0, -5.0, 25.0, 15.0)
GRID_SAMPLE = LocationGrid(AREA_SAMPLE, 2.0)


def grid_point(x: float, y: float) -> Location:
    """
    :return: the candidate location of the sample grid at (x, y).
    """
    return GRID_SAMPLE.cell(int(x // 2), int(y // 2))


MAP_SAMPLE = NodeRecord(0, "mAP", grid_point(0, 4), 1, (1,), serving_radio=0)
EXT_SAMPLE = NodeRecord(
    1, "EXT", grid_point(6, 4), 2, (1, 6), parent=0, uplink_radio=0, serving_radio=1
)
USER_OF_MAP = NodeRecord(
    2, "user", Location(OFF_GRID, 0.0, 8.0), 1, (1,), parent=0, uplink_radio=0
)
USER_OF_EXT = NodeRecord(
    3, "user", Location(OFF_GRID, 10.0, 4.0), 1, (6,), parent=1, uplink_radio=0
)
NODES_SAMPLE = (MAP_SAMPLE, EXT_SAMPLE, USER_OF_MAP, USER_OF_EXT)

EXTERNAL_SAMPLE = ExternalAp(
    label="ext",
    location=Location(OFF_GRID, 6.0, 12.0),
    channel=11,
    client_location=Location(OFF_GRID, 8.0, 12.0),
    offered_load=13e6,
)

S_OPTIONS_SAMPLE = ScenarioOptions(
    propagation=PropagationOption(method="LogDistance"),
    error_model=ErrorModelOption(method="HiddenNode"),
)


def create_scenario_helper(
    nodes: Sequence[NodeRecord] = NODES_SAMPLE,
    external_aps: Sequence[ExternalAp] = (EXTERNAL_SAMPLE,),
    timeline: Sequence[ScenarioEvent] = (),
    demands: Optional[Dict[int, float]] = None,
    phy: PhyParams = PhyParams(),
    epochs: int = 30,
    n_channels: int = 11,
    sentinel: SentinelPolicy = SentinelPolicy(),
    name: str = "sample",
) -> Scenario:
    """
    This is a helper function to create a scenario like the sample one, with some parts changed.
    """
    return Scenario(
        ScenarioParameters(
            name=name,
            area=AREA_SAMPLE,
            enclosure=ENCLOSURE_SAMPLE,
            grid_spacing=2.0,
            n_channels=n_channels,
            phy=phy,
            nodes=tuple(nodes),
            demands=demands
            if demands is not None
            else {record.index: 5e6 for record in nodes if record.role == "user"},
            external_aps=tuple(external_aps),
            timeline=tuple(timeline),
            tau_ms=1000.0,
            epochs=epochs,
            sentinel=sentinel,
        ),
        S_OPTIONS_SAMPLE,
    )


SCENARIO_SAMPLE = create_scenario_helper()

GRAPH_SAMPLE: NetworkGraph = SCENARIO_SAMPLE.initial_graph

E_PARAMETERS_SAMPLE = EngineParameters(
    agent=AgentParams(), thresholds=TriggerThresholds()
)
TEMPERATURE_SAMPLE = GeometricDecay(method="GeometricDecay", factor=0.95, floor=1.0)

ENGINE_SAMPLE = Engine(
    E_PARAMETERS_SAMPLE,
    EngineOptions(
        exploration=ExplorationOption(method="Guided"), temperature=TEMPERATURE_SAMPLE
    ),
)

UNGUIDED_ENGINE_SAMPLE = Engine(
    E_PARAMETERS_SAMPLE,
    EngineOptions(
        exploration=ExplorationOption(method="Unguided"), temperature=TEMPERATURE_SAMPLE
    ),
)

PERFORMANCE_SAMPLE = Performance(
    PerformanceParameters(window=10, tolerance=0.05, quantiles=(0.1, 0.5, 0.9)),
    PerformanceOptions(convergence=ConvergenceOption(method="Windowed")),
)


def create_world_helper(scenario: Scenario = SCENARIO_SAMPLE, seed: int = 0) -> World:
    """
    This is a helper function to create a world of a scenario.
    """
    return World(scenario, numpy.random.default_rng(seed))


def create_run_metrics_helper(
    scheme: str,
    seed: int,
    objective: List[float],
    actions_applied: Optional[List[int]] = None,
) -> RunMetrics:
    """
    This is a helper function to create the metrics of a run with two users sharing the
    objective equally.
    """
    applied: List[int] = (
        actions_applied if actions_applied is not None else [0] * len(objective)
    )
    return PERFORMANCE_SAMPLE.run_metrics(
        scheme,
        seed,
        [(value / 2, value / 2) for value in objective],
        list(objective),
        applied,
    )

"""
This __init__.py file contains a scenario specific to this sub-module: a chain of two extenders,
too large for the brute-force oracle.
"""

from data_types import Location, NodeRecord, OFF_GRID
from ..__init__ import MAP_SAMPLE, EXT_SAMPLE, create_scenario_helper, grid_point

SECOND_EXT = NodeRecord(
    2, "EXT", grid_point(12, 4), 2, (6, 11), parent=1, uplink_radio=0, serving_radio=1
)

CHAIN_SCENARIO = create_scenario_helper(
    nodes=(
        MAP_SAMPLE,
        EXT_SAMPLE,
        SECOND_EXT,
        NodeRecord(
            3, "user", Location(OFF_GRID, 0.0, 8.0), 1, (1,), parent=0, uplink_radio=0
        ),
        NodeRecord(
            4, "user", Location(OFF_GRID, 16.0, 4.0), 1, (11,), parent=2, uplink_radio=0
        ),
    ),
    external_aps=(),
    name="chain",
)

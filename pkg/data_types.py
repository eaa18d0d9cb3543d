"""
This module defines code specific data types for Scenario, Engine, and Performance.
It also contains the definitions of self-defined data types and exceptions shared by all
modules.
"""

from typing import NamedTuple, Dict, List, Optional, Tuple, Union
from mypy_extensions import TypedDict
from typing_extensions import Literal


# There are a number of TypedDict and NamedTuple data types defined in this module. They usually
# represent a data structure containing a finite and fixed set of keys, each associated with a
# value of a fixed data type, so mypy reports a missing or misspelled key.
#
# The principle of choosing TypedDict and NamedTuple is as follows:
# 1) If it is possible to use NamedTuple, use it. Value types in the network model (locations,
# links, actions, node records) are NamedTuples so that they are immutable and hashable, and can
# be used as dictionary keys (e.g., in the Q-table).
# 2) If we need to inherit sub-types from a base type (option types with a "method" key and
# method-specific extra keys), then we use TypedDict.


# ==================
# vocabulary of the network model
# ==================

NodeRole = Literal["mAP", "EXT", "user"]
ActionKind = Literal["ChannelConfig", "Reposition"]
ActionType = Literal["Reposition", "ChannelPhase"]
NetworkState = Literal["Quiet", "Suboptimal"]
GateVerdict = Literal["Apply", "Keep"]
ActionOutcomeStatus = Literal["Applied", "ReestablishFailed"]
PolicyName = Literal["location", "zero_cost", "explore", "exploit"]
ConstraintName = Literal["a", "b", "c", "d", "structure"]
EventKind = Literal["ActivateExternal", "DeactivateExternal", "MoveUser", "SetDemand"]
SchemeName = Literal["icalo", "ugrl", "single", "cca", "clica", "brute"]

SCHEMES: Tuple[str, ...] = ("icalo", "ugrl", "single", "cca", "clica", "brute")

# grid_index of a point that is not one of the candidate extender locations (user devices and
# external APs may stand anywhere inside the enclosure).
OFF_GRID: int = 0

# utilization recorded for a channel on which links could not be re-established.
SENTINEL_UTILIZATION: float = 1000.0

# convergence epoch reported when the windowed criterion is never met.
NOT_CONVERGED: int = -1


class Area(NamedTuple):
    """
    Axis-aligned rectangle in meters.
    """

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def contains(self, x: float, y: float) -> bool:
        """
        :return: True if (x, y) lies inside the rectangle (borders included).
        """
        tolerance: float = 1e-9
        return (
            self.x_min - tolerance <= x <= self.x_max + tolerance
            and self.y_min - tolerance <= y <= self.y_max + tolerance
        )


class Location(NamedTuple):
    """
    A point in meters. grid_index is the 1-based index of the candidate location on the grid,
    or OFF_GRID for points that are not candidate extender locations.
    """

    grid_index: int
    x: float
    y: float


class NodeRecord(NamedTuple):
    """
    One node of the mesh. channels[d] is the channel of radio d. uplink_radio is the radio this
    node uses to reach its parent, serving_radio the radio that serves its children (None if the
    node has no parent / no children). A user device has one radio and follows its parent.
    """

    index: int
    role: NodeRole
    location: Location
    radio_count: int
    channels: Tuple[int, ...]
    parent: Optional[int] = None
    uplink_radio: Optional[int] = None
    serving_radio: Optional[int] = None


class Link(NamedTuple):
    """
    Directed link from parent (closer to the mAP) to child, on a single shared channel.
    """

    parent: int
    child: int
    channel: int


class Path(NamedTuple):
    """
    Links from the mAP to a user device, ordered from the mAP outward.
    """

    user: int
    links: Tuple[Link, ...]


class Action(NamedTuple):
    """
    Either a channel configuration (one channel per radio of the node) or a repositioning of an
    extender to a target location.
    """

    kind: ActionKind
    node: int
    channels: Optional[Tuple[int, ...]] = None
    target: Optional[Location] = None


class Violation(NamedTuple):
    """
    A broken constraint. "structure" covers cycles and users that cannot reach the mAP.
    """

    constraint: ConstraintName
    node: Optional[int]
    link: Optional[Link]
    message: str


# ==================
# data types for Scenario
# ==================


class PhyParams(NamedTuple):
    """
    Analytic PHY parameters. p_adjust turns (rssi + p_adjust) into an effective SNR in dB.
    wall_loss is an extra attenuation per meter of distance (0 means free log-distance).
    """

    tx_power: float = 12.0  # dBm
    p_adjust: float = 95.0  # dB
    max_bps: float = 5.0  # bits/symbol/subcarrier
    max_nss: int = 1
    n_ofdm: int = 52
    ppdu: float = 4e-6  # seconds
    path_loss_exponent: float = 3.0
    pl_ref: float = 40.0  # dB at 1 m
    cca_threshold: float = -82.0  # dBm
    wall_loss: float = 0.0  # dB per meter


class ExternalAp(NamedTuple):
    """
    A non-managed access point transmitting offered_load (bits/second) to one client.
    """

    label: str
    location: Location
    channel: int
    client_location: Location
    offered_load: float
    active: bool = True


class Transmitter(NamedTuple):
    """
    Anything occupying airtime on a channel: an external AP or the sender of a managed link
    (link is None for external APs). airtime is a fraction in [0, 1].
    """

    location: Location
    channel: int
    airtime: float
    link: Optional[Link] = None


class ScenarioEvent(NamedTuple):
    """
    A timed change of the world. target is an external AP label for (De)ActivateExternal and a
    user index for MoveUser / SetDemand.
    """

    epoch: int
    kind: EventKind
    target: Union[str, int]
    location: Optional[Location] = None
    demand: Optional[float] = None


class SentinelPolicy(NamedTuple):
    """
    Agent-side handling of slow or failed reconfigurations. Times are in seconds.
    """

    reestablish_timeout: float = 30.0
    sentinel_value: float = SENTINEL_UTILIZATION
    max_wait: float = 120.0
    samples_per_decision: int = 4
    failure_utilization: float = 98.0


# options for Scenario. The "method" key selects the realization in scenario_candidates.


class PropagationOption(TypedDict):
    """
    How ground-truth and measured RSSI are produced. "LogDistance" measures exactly the
    log-distance value; "LogDistanceShadowing" adds zero-mean Gaussian shadowing to measurements.
    """

    method: Literal["LogDistance", "LogDistanceShadowing"]


class LogDistanceShadowing(PropagationOption):
    """
    sigma is the shadowing standard deviation in dB.
    """

    sigma: float


class ErrorModelOption(TypedDict):
    """
    How packet errors on a link are produced. "HiddenNode" derives them from transmitters heard
    at the receiver but not at the sender; "ErrorFree" never produces errors.
    """

    method: Literal["HiddenNode", "ErrorFree"]


class ScenarioParameters(NamedTuple):
    """
    Declarative description of a scenario. demands maps each user index to its nominal demand
    in bits/second; timeline must be ordered by epoch.
    """

    name: str
    area: Area
    enclosure: Area
    grid_spacing: float
    n_channels: int
    phy: PhyParams
    nodes: Tuple[NodeRecord, ...]
    demands: Dict[int, float]
    external_aps: Tuple[ExternalAp, ...]
    timeline: Tuple[ScenarioEvent, ...]
    tau_ms: float
    epochs: int
    sentinel: SentinelPolicy
    packet_bytes: int = 1000


class ScenarioOptions(NamedTuple):
    """
    Options of Scenario.
    """

    propagation: PropagationOption
    error_model: ErrorModelOption


# ==================
# data types for Engine
# ==================


class AgentParams(NamedTuple):
    """
    Learning constants of the agent. psi (the VDBE inverse sensitivity) is not a parameter: it is
    1 / |A(s)| of each node. relocation_patience is the number of visited channel actions at a
    location before a low maximal Q-value may trigger a relocation; offset_cells bounds the
    random offset added to an already visited target location.
    """

    eta: float = 0.7
    gamma: float = 0.0
    epsilon0: float = 1.0
    temperature: float = 50.0
    sigma: float = 100.0
    improvement_gate: float = 1.15
    exploit_band: float = 0.85
    prob_band: float = 0.9
    rho_guard: float = 1e-9
    relocation_patience: int = 8
    offset_cells: int = 2
    trials_per_epoch: int = 1


class TriggerThresholds(NamedTuple):
    """
    Thresholds of the optimization trigger and of the location policy. q_target is in reward
    units (Mbps); None means half of the aggregate nominal user demand.
    """

    u_thr: float = 60.0
    retr_thr: float = 50.0
    err_thr: float = 0.005
    rssi_min: float = -60.0
    q_target: Optional[float] = None
    activity_ratio: float = 0.1


class EngineParameters(NamedTuple):
    """
    Parameters of Engine.
    """

    agent: AgentParams
    thresholds: TriggerThresholds


class ExplorationOption(TypedDict):
    """
    "Guided" uses the guidance terms, probability band and diversity ranking, and the control
    gate; "Unguided" samples the Boltzmann distribution directly, exploits greedily and applies
    every selected action.
    """

    method: Literal["Guided", "Unguided"]


class TemperatureOption(TypedDict):
    """
    How the Boltzmann temperature of a node evolves after each applied action.
    """

    method: Literal["GeometricDecay", "Constant"]


class GeometricDecay(TemperatureOption):
    """
    T := max(floor, factor * T).
    """

    factor: float
    floor: float


class EngineOptions(NamedTuple):
    """
    Options of Engine.
    """

    exploration: ExplorationOption
    temperature: TemperatureOption


# ==================
# data types for Performance
# ==================


class PerformanceParameters(NamedTuple):
    """
    window and tolerance define steady state: the objective stays within +-tolerance of its
    value for window epochs with no applied action. quantiles are reported for the CDF of the
    steady-state throughput.
    """

    window: int = 10
    tolerance: float = 0.05
    quantiles: Tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)


class ConvergenceOption(TypedDict):
    """
    How the convergence epoch is detected.
    """

    method: Literal["Windowed"]


class PerformanceOptions(NamedTuple):
    """
    Options of Performance.
    """

    convergence: ConvergenceOption


class RunMetrics(NamedTuple):
    """
    Result of one run. Throughput values are in Mbps. user_throughput[e] holds the delivered
    throughput of every user (in user index order) at epoch e.
    """

    scheme: str
    seed: int
    user_throughput: List[Tuple[float, ...]]
    objective: List[float]
    actions_applied: List[int]
    convergence_epoch: int
    steady_state_objective: float
    steady_state_per_user: float
    config_changes: int
    note: str = ""


class ActionLogEntry(NamedTuple):
    """
    One decision of the agent. verdict is "Apply" or "Keep" for gated decisions, "Trial" for
    zero-cost exploration and "Failed" when re-establishment failed.
    """

    epoch: int
    node: int
    policy: PolicyName
    action: Action
    verdict: str
    reward: float
    q_value: float
    epsilon: float


class PhaseConvergence(NamedTuple):
    """
    Convergence of one resilience phase. convergence_epoch is relative to start_epoch.
    """

    start_epoch: int
    end_epoch: int
    convergence_epoch: int
    censored: bool


class ResilienceResult(NamedTuple):
    """
    Per-phase convergence of one seeded resilience run.
    """

    seed: int
    phases: List[PhaseConvergence]
    trend_holds: bool


ChannelAssignment = Dict[int, Tuple[int, ...]]


class SingleChannelResult(NamedTuple):
    """
    Winner of the single-channel baseline. objective is in bits/second.
    """

    channel: int
    objective: float


class BruteForceResult(NamedTuple):
    """
    Result of the exhaustive oracle. evaluations counts every visited configuration, feasible
    the ones satisfying constraints (a)-(d). best_* are None if nothing is feasible, and
    violations then holds the violations of the first visited configuration.
    """

    best_locations: Optional[Dict[int, Location]]
    best_channels: Optional[ChannelAssignment]
    best_objective: float
    evaluations: int
    feasible: int
    violations: List[Violation]


class BatchSummary(NamedTuple):
    """
    Summary of the runs of one scheme. Convergence statistics are over converged runs only and
    are in epochs; throughput values are in Mbps. quantiles are the CDF quantiles of the
    steady-state per-user throughput.
    """

    scheme: str
    runs: int
    converged_runs: int
    convergence_mean: float
    convergence_std: float
    changes_mean: float
    changes_std: float
    steady_state_mean: float
    per_user_mean: float
    quantiles: List[float]


class OracleReport(NamedTuple):
    """
    Steady state of the agent against the brute-force optimum (both in Mbps). ratios holds one
    steady-state / optimum ratio per seed. initial_location_optimum is the best objective
    with every extender kept at its initial location.
    """

    optimum: float
    initial_location_optimum: float
    evaluations: int
    seeds: List[int]
    ratios: List[float]
    near_optimal_runs: int


# ==================
# exceptions
# ==================


class InvalidInputError(ValueError):
    """
    Raised when an input is malformed or empty.
    """


class InvalidNodeError(ValueError):
    """
    Raised when an operation is requested on a node of the wrong role.
    """


class NoPathError(ValueError):
    """
    Raised when a user device has no path to the mAP, or a path is empty.
    """


class DomainError(ValueError):
    """
    Raised when a value lies outside the domain of a formula.
    """


class CounterResetError(ValueError):
    """
    Raised when a cumulative counter decreases between two snapshots.
    """


class PreconditionError(RuntimeError):
    """
    Raised when an operation is called in a state it does not allow.
    """


class ConstraintViolationError(ValueError):
    """
    Raised when a configuration breaks one of the constraints (a)-(d).
    """

    def __init__(self, violations: List[Violation]) -> None:
        self.violations: List[Violation] = violations
        super().__init__(
            "Constraint violation: "
            + "; ".join(f"({item.constraint}) {item.message}" for item in violations)
        )


class BudgetExceededError(ValueError):
    """
    Raised when an exhaustive search would exceed its configuration budget.
    """

    def __init__(self, required: int, budget: int) -> None:
        self.required: int = required
        self.budget: int = budget
        super().__init__(
            f"Search space of {required} configurations exceeds the budget of {budget}."
        )


class KnowledgeBaseLoadError(ValueError):
    """
    Raised when a knowledge base file cannot be parsed.
    """

    def __init__(self, line: int, field: str, message: str) -> None:
        self.line: int = line
        self.field: str = field
        super().__init__(f"line {line}, field {field}: {message}")


class ScenarioFileError(ValueError):
    """
    Raised when a scenario file is malformed. key_path names the offending key.
    """

    def __init__(self, key_path: str, message: str) -> None:
        self.key_path: str = key_path
        super().__init__(f"{key_path}: {message}")


class UsageError(ValueError):
    """
    Raised for unknown schemes or malformed command-line values.
    """

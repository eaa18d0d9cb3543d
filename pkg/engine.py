"""
This module contains the class Engine only.
"""

from typing import Sequence, cast
import numpy
import engine_candidates
from engine_candidates import GuidanceTerms
from knowledge_base import QTable
from data_types import (
    Action,
    AgentParams,
    EngineOptions,
    EngineParameters,
    ExplorationOption,
    GateVerdict,
    GeometricDecay,
    InvalidInputError,
    TemperatureOption,
    TriggerThresholds,
)


class Engine:

    """
    The class Engine describes the design space of the agent. By choosing a specific option we
    refer to a particular design choice: guided or unguided exploration, and the temperature
    schedule. The parameters are the learning constants and the trigger thresholds.
    Later the Agent class will call methods from this Engine class for a particular realization.
    """

    def __init__(self, parameters: EngineParameters, options: EngineOptions) -> None:

        # unpacking parameters

        self.agent: AgentParams = parameters.agent
        self.thresholds: TriggerThresholds = parameters.thresholds

        if not 0 <= self.agent.eta <= 1 or not 0 <= self.agent.gamma <= 1:
            raise InvalidInputError("eta and gamma must be in [0, 1].")
        if not 0 <= self.agent.epsilon0 <= 1:
            raise InvalidInputError("epsilon0 must be in [0, 1].")
        if self.agent.temperature <= 0 or self.agent.sigma <= 0:
            raise InvalidInputError("temperature and sigma must be positive.")
        if self.agent.trials_per_epoch < 1:
            raise InvalidInputError("trials_per_epoch must be at least 1.")

        # Unpacking options. Each option is a TypedDict whose key "method" selects the function in
        # engine_candidates; extra keys of inherited TypedDicts (e.g., GeometricDecay) carry the
        # parameters of that function.

        self.exploration_option: ExplorationOption = options.exploration
        self.temperature_option: TemperatureOption = options.temperature

    @property
    def guided(self) -> bool:
        """
        :return: True if exploration uses the guidance terms.
        """
        return self.exploration_option["method"] == "Guided"

    def explore(
        self,
        actions: Sequence[Action],
        q_values: Sequence[float],
        terms: Sequence[GuidanceTerms],
        current: Action,
        temperature: float,
        rng: numpy.random.Generator,
    ) -> Action:
        """
        This method selects an action to explore.
        :param actions: channel actions of the node.
        :param q_values: their Q-values at the node's state.
        :param terms: their guidance terms (ignored by unguided exploration).
        :param current: the configuration in effect.
        :param temperature: the node's Boltzmann temperature.
        :param rng: random generator of the agent.
        :return: the action.
        """
        if self.exploration_option["method"] == "Guided":
            return engine_candidates.guided_explore(
                actions,
                q_values,
                terms,
                current,
                temperature,
                self.agent.prob_band,
                self.agent.rho_guard,
            )
        if self.exploration_option["method"] == "Unguided":
            return engine_candidates.boltzmann_explore(
                actions, q_values, temperature, rng
            )
        raise ValueError(
            f"No such option to explore: {self.exploration_option['method']}"
        )

    def exploit(
        self, actions: Sequence[Action], q_values: Sequence[float], current: Action
    ) -> Action:
        """
        This method selects the action to exploit.
        """
        if self.exploration_option["method"] == "Guided":
            return engine_candidates.guided_exploit(
                actions, q_values, current, self.agent.exploit_band
            )
        if self.exploration_option["method"] == "Unguided":
            return engine_candidates.greedy_exploit(actions, q_values, current)
        raise ValueError(
            f"No such option to exploit: {self.exploration_option['method']}"
        )

    def gate(
        self, q_table: QTable, node: int, state: int, proposed: Action, q_current: float
    ) -> GateVerdict:
        """
        This method decides whether a selected action is applied. Unguided agents apply every
        selection.
        """
        if self.exploration_option["method"] == "Guided":
            return engine_candidates.control_gate(
                q_table, node, state, proposed, q_current, self.agent.improvement_gate
            )
        if self.exploration_option["method"] == "Unguided":
            return engine_candidates.apply_always(
                q_table, node, state, proposed, q_current, self.agent.improvement_gate
            )
        raise ValueError(f"No such option to gate: {self.exploration_option['method']}")

    def next_temperature(self, temperature: float) -> float:
        """
        This method returns the temperature of a node after it applied an action.
        """
        if self.temperature_option["method"] == "GeometricDecay":
            schedule = cast(GeometricDecay, self.temperature_option)
            return engine_candidates.decay_temperature_geometric(
                temperature, schedule["factor"], schedule["floor"]
            )
        if self.temperature_option["method"] == "Constant":
            return engine_candidates.keep_temperature(temperature)
        raise ValueError(
            f"No such option to update temperature: {self.temperature_option['method']}"
        )

"""
This module contains unit tests of the class Performance.
"""

import math
import pytest
from performance import Performance
from data_types import (
    ConvergenceOption,
    InvalidInputError,
    NOT_CONVERGED,
    PerformanceOptions,
    PerformanceParameters,
)

from ..__init__ import PERFORMANCE_SAMPLE, create_run_metrics_helper

# seed 1 is steady from the start; seed 2 settles at 20 Mbps after two applied actions; seed 3
# keeps ramping up and never converges.
RUN_1 = create_run_metrics_helper("icalo", 1, [10.0] * 12)
RUN_2 = create_run_metrics_helper(
    "icalo", 2, [2.0, 2.0] + [20.0] * 10, [1, 1] + [0] * 10
)
RUN_3 = create_run_metrics_helper("icalo", 3, [float(value) for value in range(1, 13)])


def test_run_metrics() -> None:
    """
    This function tests run_metrics(): convergence, steady state and configuration changes.
    """
    assert RUN_1.convergence_epoch == 0
    assert RUN_1.steady_state_objective == pytest.approx(10.0)
    assert RUN_1.steady_state_per_user == pytest.approx(5.0)
    assert RUN_2.convergence_epoch == 2
    assert RUN_2.config_changes == 2
    assert RUN_2.steady_state_per_user == pytest.approx(10.0)
    assert RUN_3.convergence_epoch == NOT_CONVERGED
    assert RUN_3.steady_state_objective == pytest.approx(7.5)


def test_summarize() -> None:
    """
    This function tests summarize(): convergence statistics cover converged runs only.
    """
    # Act.
    summary = PERFORMANCE_SAMPLE.summarize("icalo", [RUN_1, RUN_2, RUN_3])

    # Assert.
    assert summary.scheme == "icalo"
    assert summary.runs == 3
    assert summary.converged_runs == 2
    assert summary.convergence_mean == pytest.approx(1.0)
    assert summary.convergence_std == pytest.approx(1.0)
    assert summary.changes_mean == pytest.approx(2 / 3)
    assert summary.changes_std == pytest.approx(math.sqrt(8 / 9))
    assert summary.steady_state_mean == pytest.approx(12.5)
    assert summary.per_user_mean == pytest.approx(6.25)
    assert summary.quantiles == pytest.approx([4.0, 5.0, 9.0])


def test_summarize__order() -> None:
    """
    This function tests that summarize() does not depend on the order of the runs.
    """
    assert PERFORMANCE_SAMPLE.summarize(
        "icalo", [RUN_3, RUN_1, RUN_2]
    ) == PERFORMANCE_SAMPLE.summarize("icalo", [RUN_2, RUN_3, RUN_1])


def test_summarize__nothing_converged() -> None:
    """
    This function tests summarize() when no run converged.
    """
    summary = PERFORMANCE_SAMPLE.summarize("ugrl", [RUN_3])
    assert summary.converged_runs == 0
    assert summary.convergence_mean == 0.0
    assert summary.convergence_std == 0.0


def test_summarize__error() -> None:
    """
    This function tests summarize() with no run.
    """
    with pytest.raises(InvalidInputError, match="No run"):
        PERFORMANCE_SAMPLE.summarize("icalo", [])


@pytest.mark.parametrize(
    "parameters",
    [
        PerformanceParameters(window=0, tolerance=0.05, quantiles=(0.5,)),
        PerformanceParameters(window=10, tolerance=-0.1, quantiles=(0.5,)),
        PerformanceParameters(window=10, tolerance=0.05, quantiles=(1.5,)),
    ],
)
def test_performance__invalid(parameters: PerformanceParameters) -> None:
    """
    This function tests Performance() with invalid parameters.
    """
    with pytest.raises(InvalidInputError):
        Performance(
            parameters,
            PerformanceOptions(convergence=ConvergenceOption(method="Windowed")),
        )


def test_detect_convergence__no_such_option() -> None:
    """
    This function tests detect_convergence() with an unknown method.
    """
    performance = Performance(
        PerformanceParameters(window=10, tolerance=0.05, quantiles=(0.5,)),
        PerformanceOptions(
            convergence=ConvergenceOption(method="Regression")  # type: ignore
        ),
    )
    with pytest.raises(ValueError, match="No such option"):
        performance.detect_convergence([1.0])

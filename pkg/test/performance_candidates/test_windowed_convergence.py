"""
This module contains unit tests of windowed_convergence() and tail_mean().
"""

from typing import List, NamedTuple, Optional
import pytest
import performance_candidates
from data_types import InvalidInputError, NOT_CONVERGED


class CaseType(NamedTuple):
    """
    Data type for test cases in this module.
    """

    series: List[float]  # per-epoch objective
    applied: Optional[List[int]]  # per-epoch number of applied actions
    window: int
    expected_result: int  # convergence epoch


# Case 1: the objective settles at epoch 2 (10, 10.2 and 9.8 are all within 5 % of 10).
CASE_1 = CaseType(
    series=[1.0, 5.0, 10.0, 10.2, 9.8, 10.0], applied=None, window=3, expected_result=2
)

# Case 2: same series, but an action is applied at epoch 2, so the window may only start at 3.
CASE_2 = CaseType(
    series=[1.0, 5.0, 10.0, 10.2, 9.8, 10.0],
    applied=[0, 0, 1, 0, 0, 0],
    window=3,
    expected_result=3,
)

# Case 3: a steady ramp never stays within 5 %.
CASE_3 = CaseType(
    series=[1.0, 2.0, 3.0, 4.0], applied=None, window=2, expected_result=NOT_CONVERGED
)

# Case 4: the window is longer than the run.
CASE_4 = CaseType(
    series=[10.0, 10.0], applied=[0, 0], window=3, expected_result=NOT_CONVERGED
)

# Case 5: an idle network (objective 0) is steady from the start.
CASE_5 = CaseType(series=[0.0, 0.0, 0.0], applied=None, window=3, expected_result=0)


@pytest.mark.parametrize("case", [CASE_1, CASE_2, CASE_3, CASE_4, CASE_5])
def test_windowed_convergence__normal(case: CaseType) -> None:
    """
    This function tests windowed_convergence() with normal inputs and tolerance 0.05.
    """
    assert (
        performance_candidates.windowed_convergence(
            case.series, case.applied, case.window, 0.05
        )
        == case.expected_result
    )


@pytest.mark.parametrize(
    "series, applied, window, message",
    [
        ([], None, 3, "empty series"),
        ([1.0, 2.0], None, 0, "at least one epoch"),
        ([1.0, 2.0], [0], 1, "different length"),
    ],
)
def test_windowed_convergence__error(
    series: List[float], applied: Optional[List[int]], window: int, message: str
) -> None:
    """
    This function tests windowed_convergence() with invalid inputs.
    """
    with pytest.raises(InvalidInputError, match=message):
        performance_candidates.windowed_convergence(series, applied, window, 0.05)


@pytest.mark.parametrize(
    "series, window, expected", [([1.0, 2.0, 3.0, 4.0], 2, 3.5), ([1.0, 2.0], 10, 1.5)]
)
def test_tail_mean(series: List[float], window: int, expected: float) -> None:
    """
    This function tests tail_mean() with normal inputs.
    """
    assert performance_candidates.tail_mean(series, window) == pytest.approx(expected)


def test_tail_mean__error() -> None:
    """
    This function tests tail_mean() with an empty series.
    """
    with pytest.raises(InvalidInputError, match="empty series"):
        performance_candidates.tail_mean([], 10)

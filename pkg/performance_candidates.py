"""
This module contains realizations of the Performance methods.
"""

from typing import Optional, Sequence
from data_types import InvalidInputError, NOT_CONVERGED


def windowed_convergence(
    series: Sequence[float],
    applied: Optional[Sequence[int]],
    window: int,
    tolerance: float,
) -> int:
    """
    This is a candidate design for detecting convergence.
    The convergence epoch is the first epoch e such that, for the window epochs starting at e,
    the objective stays within +-tolerance (relative) of its value at e and no action is applied.
    :param series: per-epoch objective.
    :param applied: per-epoch number of applied actions; None means none were applied.
    :param window: number of epochs of the window.
    :param tolerance: relative tolerance, e.g. 0.05.
    :return: the convergence epoch, or NOT_CONVERGED.
    """
    if not series:
        raise InvalidInputError("Cannot detect convergence of an empty series.")
    if window < 1:
        raise InvalidInputError("The window must hold at least one epoch.")
    if applied is not None and len(applied) != len(series):
        raise InvalidInputError("The series of applied actions has a different length.")

    for start in range(len(series) - window + 1):
        reference: float = series[start]
        stable = all(
            abs(value - reference) <= tolerance * abs(reference)
            for value in series[start : start + window]
        )
        quiet = applied is None or not any(applied[start : start + window])
        if stable and quiet:
            return start
    return NOT_CONVERGED


def tail_mean(series: Sequence[float], window: int) -> float:
    """
    This is a candidate design for the steady-state value: the mean of the last window epochs
    (of the whole series if it is shorter).
    """
    if not series:
        raise InvalidInputError("Cannot take the steady state of an empty series.")
    tail = series[-window:]
    return sum(tail) / len(tail)

"""
This module contains data processing tools (mean, standard deviation, quantiles, trends...)
to work on performance evaluation results.
"""

import statistics
from typing import List, Sequence, Tuple
import numpy
from data_types import InvalidInputError


def mean_and_std(values: Sequence[float]) -> Tuple[float, float]:
    """
    This function returns the mean and the population standard deviation of values.

    >>> mean_and_std([2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0])
    (5.0, 2.0)
    >>> mean_and_std([3.5])
    (3.5, 0.0)

    An empty input raises InvalidInputError.
    """
    if not values:
        raise InvalidInputError("No values are given at all.")
    return float(statistics.mean(values)), float(statistics.pstdev(values))


def cdf_quantiles(values: Sequence[float], quantiles: Sequence[float]) -> List[float]:
    """
    This function returns the values of the empirical CDF at the given quantiles, with linear
    interpolation between order statistics. It does not depend on the order of values.

    >>> cdf_quantiles([4.0, 1.0, 3.0, 2.0], [0.0, 0.5, 1.0])
    [1.0, 2.5, 4.0]
    >>> cdf_quantiles([5.0], [0.1, 0.9])
    [5.0, 5.0]
    """
    if not values:
        raise InvalidInputError("No values are given at all.")
    if any(not 0 <= item <= 1 for item in quantiles):
        raise InvalidInputError("Quantiles must be in [0, 1].")
    return [
        float(item)
        for item in numpy.quantile(numpy.asarray(values), list(quantiles))
    ]


def median(values: Sequence[float]) -> float:
    """
    >>> median([3, 1, 2])
    2.0
    >>> median([4, 1, 3, 2])
    2.5
    """
    if not values:
        raise InvalidInputError("No values are given at all.")
    return float(statistics.median(values))


def is_non_increasing(values: Sequence[float]) -> bool:
    """
    This function tells if a sequence never increases (equal neighbors are allowed).

    >>> is_non_increasing([14, 8, 8, 5])
    True
    >>> is_non_increasing([14, 8, 9, 5])
    False
    >>> is_non_increasing([])
    True
    """
    return all(later <= earlier for earlier, later in zip(values, values[1:]))


def empirical_cdf(values: Sequence[float]) -> Tuple[List[float], List[float]]:
    """
    This function returns the points of the empirical CDF: the sorted values and the fraction of
    values at or below each of them.

    >>> empirical_cdf([3.0, 1.0, 2.0, 2.0])
    ([1.0, 2.0, 2.0, 3.0], [0.25, 0.5, 0.75, 1.0])
    """
    ordered: List[float] = sorted(float(item) for item in values)
    return ordered, [(position + 1) / len(ordered) for position in range(len(ordered))]

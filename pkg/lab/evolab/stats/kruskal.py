"""
Nonparametric comparison of experimental conditions.

The Kruskal-Wallis H statistic is computed on pooled mid-ranks, divided by the
usual cubic tie correction, and referred to a chi-square distribution with
k - 1 degrees of freedom.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaincc
from scipy.stats import rankdata

from evolab.utils.errors import DegenerateDataError
from evolab.utils.errors import InvalidInputError


@dataclass(frozen=True)
class KwResult:
    """
    Outcome of a Kruskal-Wallis H test.

    Attributes:
        h (float): Tie-corrected H statistic, >= 0.
        df (int): Degrees of freedom, number of groups minus one.
        p (float): Upper-tail chi-square probability of h.
        tie_correction (float): 1 - sum(t^3 - t) / (N^3 - N), in (0, 1].
    """

    h: float
    df: int
    p: float
    tie_correction: float


@dataclass(frozen=True)
class Summary:
    mean: float
    std: float
    median: float
    iqr: float


def chi2_sf(x: float, df: int) -> float:
    """
    Upper-tail probability of the chi-square distribution.

    Evaluated as the regularized upper incomplete gamma Q(df / 2, x / 2).

    Args:
        x (float): Statistic, >= 0.
        df (int): Degrees of freedom, >= 1.

    Returns:
        float: P(X >= x).
    """
    if df < 1:
        raise InvalidInputError(f"df must be a positive integer, got {df}")
    if x < 0 or not np.isfinite(x):
        raise InvalidInputError(f"x must be finite and >= 0, got {x}")
    if x == 0:
        return 1.0
    return float(gammaincc(df / 2.0, x / 2.0))


def kruskal_wallis(groups: Sequence[Sequence[float]]) -> KwResult:
    """
    Kruskal-Wallis H test across k groups.

    Args:
        groups (Sequence[Sequence[float]]): One sample per condition.

    Returns:
        KwResult: H, df = k - 1, p and the tie correction factor.

    Raises:
        InvalidInputError: If fewer than 2 groups, an empty group, or N < 3.
        DegenerateDataError: If every pooled value is identical.
    """
    if len(groups) < 2:
        raise InvalidInputError(f"need at least 2 groups, got {len(groups)}")
    arrays = [np.asarray(group, dtype=float).reshape(-1) for group in groups]
    for index, array in enumerate(arrays):
        if array.size == 0:
            raise InvalidInputError(f"group {index} is empty")
        if not np.all(np.isfinite(array)):
            raise InvalidInputError(f"group {index} contains non-finite values")

    pooled = np.concatenate(arrays)
    n_total = pooled.size
    if n_total < 3:
        raise InvalidInputError(f"need at least 3 observations in total, got {n_total}")

    ranks = rankdata(pooled, method="average")
    _, tie_counts = np.unique(pooled, return_counts=True)
    tie_correction = 1.0 - float(np.sum(tie_counts**3 - tie_counts)) / (n_total**3 - n_total)
    if tie_correction <= 0.0:
        raise DegenerateDataError("all pooled values are identical; H is undefined")

    h = 0.0
    start = 0
    for array in arrays:
        group_ranks = ranks[start : start + array.size]
        h += array.size * (group_ranks.mean() - (n_total + 1) / 2.0) ** 2
        start += array.size
    h = 12.0 / (n_total * (n_total + 1)) * h / tie_correction

    df = len(arrays) - 1
    return KwResult(h=float(h), df=df, p=chi2_sf(float(h), df), tie_correction=tie_correction)


def summarize(values: Sequence[float]) -> Summary:
    """
    Mean, sample std (n - 1), median and interquartile range.

    Raises:
        InvalidInputError: If values is empty.
    """
    array = np.asarray(values, dtype=float).reshape(-1)
    if array.size == 0:
        raise InvalidInputError("cannot summarize an empty sample")
    q25, median, q75 = np.percentile(array, [25, 50, 75])
    std = float(np.std(array, ddof=1)) if array.size > 1 else 0.0
    return Summary(mean=float(array.mean()), std=std, median=float(median), iqr=float(q75 - q25))


def format_p(p: float) -> str:
    """Formats a p-value for reports, e.g. "p<.001" or "p=0.263"."""
    if p < 0.001:
        return "p<.001"
    return f"p={p:.3f}"

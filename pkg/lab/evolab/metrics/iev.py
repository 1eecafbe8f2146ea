"""
Impact of environmental variations (IEV) and its signal-to-noise rescaling.

A population is evaluated twice, independently. Each evaluation yields a
ranking of the individuals; IEV is the mean absolute displacement of each
individual between the two rankings, normalised so that a complete reversal of
a two-member population scores 1. Deterministic fitness gives IEV = 0, while
fitness that is pure noise gives (s + 1) / (3 s), which tends to 1/3.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from evolab.utils.errors import InvalidInputError

# Noise baseline as printed for the SNR rescaling; kept literal on purpose.
SNR_BASELINE = 0.333


@dataclass(frozen=True)
class Ranking:
    """
    Ranking positions of a population, 0 = lowest fitness, s - 1 = highest.

    Attributes:
        positions (np.ndarray): positions[i] is the rank of individual i.
    """

    positions: np.ndarray

    def __post_init__(self):
        positions = np.asarray(self.positions)
        if positions.ndim != 1 or positions.size < 2:
            raise InvalidInputError(
                f"a ranking needs at least 2 positions, got shape {positions.shape}"
            )
        if not np.issubdtype(positions.dtype, np.integer):
            raise InvalidInputError("ranking positions must be integers")
        if not np.array_equal(np.sort(positions), np.arange(positions.size)):
            raise InvalidInputError(
                f"ranking positions are not a permutation of 0..{positions.size - 1}"
            )
        positions = positions.astype(np.int64, copy=True)
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)

    def __len__(self) -> int:
        return int(self.positions.size)


@dataclass(frozen=True)
class IevSample:
    """
    IEV and SNR of one generation.

    Attributes:
        iev (float): Impact of environmental variations, in [0, 1].
        snr (float): (0.333 - iev) / 0.333, may be negative.
        generation (int): Index of the generation the sample belongs to.
    """

    iev: float
    snr: float
    generation: int = 0


def _as_finite_vector(values, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return array


def rank_fitness(fitness) -> Ranking:
    """
    Ranks a population by fitness.

    Ties go to the lower index first, so equal fitness values get increasing
    ranks in index order.

    Args:
        fitness (array-like): One finite fitness value per individual.

    Returns:
        Ranking: positions[i] = number of individuals ranked below i.

    Raises:
        InvalidInputError: If fewer than 2 values or any non-finite value is given.
    """
    values = _as_finite_vector(fitness, "fitness")
    if values.size < 2:
        raise InvalidInputError(f"cannot rank a population of size {values.size}")

    order = np.argsort(values, kind="stable")
    positions = np.empty(values.size, dtype=np.int64)
    positions[order] = np.arange(values.size)
    return Ranking(positions)


def iev(r1: Ranking, r2: Ranking) -> float:
    """
    Computes the impact of environmental variations between two rankings.

    Args:
        r1 (Ranking): Ranking from the first evaluation.
        r2 (Ranking): Ranking of the same individuals from the second evaluation.

    Returns:
        float: (sum_i |r1_i - r2_i| / (s - 1)) / s.

    Raises:
        InvalidInputError: If the rankings have different lengths.
    """
    if len(r1) != len(r2):
        raise InvalidInputError(f"ranking lengths differ: {len(r1)} vs {len(r2)}")
    s = len(r1)
    displacement = np.abs(r1.positions - r2.positions).sum()
    return float(displacement / (s - 1) / s)


def snr(iev_value: float) -> float:
    """
    Rescales an IEV value against the 0.333 noise baseline.

    Not clamped: IEV above the baseline (anti-correlated rankings) gives a
    negative SNR.
    """
    if not np.isfinite(iev_value):
        raise InvalidInputError(f"iev value must be finite, got {iev_value}")
    return (SNR_BASELINE - iev_value) / SNR_BASELINE


def noise_baseline(s: int) -> float:
    """Exact expected IEV of two independent uniformly random rankings of size s."""
    if s < 2:
        raise InvalidInputError(f"population size must be >= 2, got {s}")
    return (s + 1) / (3 * s)


def snr_exact(iev_value: float, s: int) -> float:
    """SNR against the exact (s + 1) / (3 s) baseline instead of the literal 0.333."""
    if not np.isfinite(iev_value):
        raise InvalidInputError(f"iev value must be finite, got {iev_value}")
    baseline = noise_baseline(s)
    return (baseline - iev_value) / baseline


def iev_from_double_eval(fitness1, fitness2, generation: int = 0) -> IevSample:
    """
    Computes IEV and SNR from two independent evaluations of one population.

    Args:
        fitness1 (array-like): Fitness of each individual in the first evaluation.
        fitness2 (array-like): Fitness of the same individuals in the second evaluation.
        generation (int, optional): Generation index stored in the sample. Defaults to 0.

    Returns:
        IevSample: The IEV value and its SNR.
    """
    first = _as_finite_vector(fitness1, "fitness1")
    second = _as_finite_vector(fitness2, "fitness2")
    if first.size != second.size:
        raise InvalidInputError(
            f"evaluations cover different populations: {first.size} vs {second.size}"
        )
    value = iev(rank_fitness(first), rank_fitness(second))
    return IevSample(iev=value, snr=snr(value), generation=generation)


def mean_iev(samples: Sequence[IevSample]) -> float:
    """Arithmetic mean of the iev fields of a non-empty sample sequence."""
    if len(samples) == 0:
        raise InvalidInputError("mean_iev needs at least one sample")
    return float(np.mean([sample.iev for sample in samples]))

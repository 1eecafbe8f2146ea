from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from evolab.metrics.iev import IevSample
from evolab.metrics.iev import snr
from evolab.utils.errors import InvalidInputError
from evolab.utils.window import RollingWindow


class AdviceLevel(str, Enum):
    OK = "ok"
    HIGH_IMPACT = "high_impact"
    STAGNATING_UNDER_NOISE = "stagnating_under_noise"


@dataclass(frozen=True)
class VariationAdvice:
    """
    Verdict on whether the variation range suits the problem.

    Attributes:
        level (AdviceLevel): Severity of the finding.
        mean_iev (float): Mean IEV over the inspected window.
        mean_snr (float): SNR of mean_iev.
        progress (float): Fitness gain from the first to the last entry of the window.
        message (str): Human-readable recommendation.
    """

    level: AdviceLevel
    mean_iev: float
    mean_snr: float
    progress: float
    message: str


def assess_variation_impact(
    samples: Sequence[IevSample],
    fitness: Sequence[float],
    window: int = 20,
    high_iev: float = 0.25,
    min_progress: float = 0.0,
) -> VariationAdvice:
    """
    Looks at the last `window` generations and says whether the IEV is a concern.

    A high IEV alone does not indicate a problem: evolution often works well
    with very noisy fitness. It becomes one when fitness stops improving too.

    Args:
        samples (Sequence[IevSample]): IEV samples, one per generation.
        fitness (Sequence[float]): Center fitness, aligned with `samples`.
        window (int, optional): Number of most recent generations inspected. Defaults to 20.
        high_iev (float, optional): IEV from which the impact counts as high. Defaults to 0.25.
        min_progress (float, optional): Gain at or below which evolution counts as stagnating.

    Returns:
        VariationAdvice: The verdict and its supporting numbers.

    Raises:
        InvalidInputError: If there are no samples or the two series differ in length.
    """
    if len(samples) == 0:
        raise InvalidInputError("no IEV samples to assess")
    if len(samples) != len(fitness):
        raise InvalidInputError(
            f"{len(samples)} IEV samples but {len(fitness)} fitness values"
        )
    if window < 1:
        raise InvalidInputError(f"window must be positive, got {window}")

    recent_iev = RollingWindow([sample.iev for sample in samples], capacity=window)
    recent_fitness = RollingWindow(list(fitness), capacity=window)

    mean_value = float(np.mean(recent_iev))
    progress = float(recent_fitness[-1] - recent_fitness[0])

    if mean_value >= high_iev and progress <= min_progress:
        level = AdviceLevel.STAGNATING_UNDER_NOISE
        message = (
            f"IEV {mean_value:.3f} is high and fitness did not improve over the last "
            f"{len(recent_fitness)} generations: reduce the variation range or "
            "evaluate each candidate for more episodes"
        )
    elif mean_value >= high_iev:
        level = AdviceLevel.HIGH_IMPACT
        message = (
            f"IEV {mean_value:.3f} is high but fitness is still improving; "
            "the variation range is tolerated"
        )
    else:
        level = AdviceLevel.OK
        message = f"IEV {mean_value:.3f} leaves a usable ranking signal"

    return VariationAdvice(
        level=level,
        mean_iev=mean_value,
        mean_snr=snr(mean_value),
        progress=progress,
        message=message,
    )

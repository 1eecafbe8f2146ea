from dataclasses import dataclass

import numpy as np

from evolab.utils.errors import InvalidInputError


@dataclass(frozen=True)
class EsConfig:
    """
    Hyperparameters of the evolution strategy.

    Attributes:
        population_size (int): Candidates per generation; even, drawn in mirrored pairs.
        noise_std (float): Std of the parameter perturbations.
        learning_rate (float): Adam step size.
        beta1 (float): Adam first-moment decay.
        beta2 (float): Adam second-moment decay.
        epsilon (float): Adam denominator guard.
        weight_decay (float): Coefficient of the -wd * theta gradient term.
        generations (int): Number of generations.
        iev_instrumentation (bool): Evaluate every population twice and log IEV.
        init_std (float): Std of the initial genotype (0 starts from the zero policy).
        normalizer_episodes (int): Random rollouts behind the observation normalizer.
        checkpoint_every (int): Save the center genotype every K generations.
    """

    population_size: int = 40
    noise_std: float = 0.05
    learning_rate: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    weight_decay: float = 0.005
    generations: int = 100
    iev_instrumentation: bool = True
    init_std: float = 0.0
    normalizer_episodes: int = 10
    checkpoint_every: int = 10

    def __post_init__(self):
        if self.population_size < 2 or self.population_size % 2:
            raise InvalidInputError(
                f"population_size must be a positive even number, got {self.population_size}"
            )
        for name in ("noise_std", "learning_rate", "epsilon"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidInputError(f"{name} must be finite and > 0, got {value}")
        for name in ("beta1", "beta2"):
            value = getattr(self, name)
            if not 0.0 <= value < 1.0:
                raise InvalidInputError(f"{name} must lie in [0, 1), got {value}")
        for name in ("weight_decay", "init_std"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0):
                raise InvalidInputError(f"{name} must be finite and >= 0, got {value}")
        for name in ("generations", "normalizer_episodes", "checkpoint_every"):
            value = getattr(self, name)
            if value < 1:
                raise InvalidInputError(f"{name} must be >= 1, got {value}")

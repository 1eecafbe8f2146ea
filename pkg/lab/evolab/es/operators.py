"""
Building blocks of the OpenAI-style evolution strategy.

Adapted from the optimizers of the evolution-strategies starter code: mirrored
Gaussian sampling, centered-rank fitness shaping, the score-function gradient
estimate, weight decay and Adam, here applied as ascent.
"""

from dataclasses import dataclass

import numpy as np

from evolab.es.config import EsConfig
from evolab.metrics.iev import rank_fitness
from evolab.utils.errors import InvalidInputError


@dataclass(frozen=True)
class AdamState:
    """
    Adam accumulators.

    Attributes:
        m (np.ndarray): First-moment estimate.
        v (np.ndarray): Second-moment estimate, non-negative.
        t (int): Number of updates applied so far.
    """

    m: np.ndarray
    v: np.ndarray
    t: int = 0

    @classmethod
    def zeros(cls, dim: int) -> "AdamState":
        return cls(m=np.zeros(dim), v=np.zeros(dim), t=0)


def sample_perturbations(dim: int, s: int, rng: np.random.Generator) -> np.ndarray:
    """
    Draws s mirrored standard-normal perturbations.

    Args:
        dim (int): Genotype length.
        s (int): Population size, must be even.
        rng (np.random.Generator): Sampling stream of the generation.

    Returns:
        np.ndarray: Shape (s, dim), rows ordered [e1, -e1, e2, -e2, ...].

    Raises:
        InvalidInputError: If s is odd or not positive.
    """
    if s < 2 or s % 2:
        raise InvalidInputError(f"mirrored sampling needs an even population, got {s}")
    half = rng.standard_normal((s // 2, dim))
    perturbations = np.empty((s, dim))
    perturbations[0::2] = half
    perturbations[1::2] = -half
    return perturbations


def centered_ranks(fitness) -> np.ndarray:
    """
    Maps fitness onto evenly spaced utilities in [-0.5, 0.5] by rank.

    The k-th lowest fitness (ties by index) gets (2k - (s - 1)) / (2 (s - 1)),
    which equals k / (s - 1) - 0.5 and makes opposite ranks exact negatives.

    Raises:
        InvalidInputError: If fewer than 2 values are given.
    """
    positions = rank_fitness(fitness).positions
    s = positions.size
    return (2.0 * positions - (s - 1)) / (2.0 * (s - 1))


def gradient_estimate(utilities, perturbations: np.ndarray, noise_std: float) -> np.ndarray:
    """g = (1 / (s * sigma)) * sum_i u_i * e_i."""
    utilities = np.asarray(utilities, dtype=float)
    if utilities.shape[0] != perturbations.shape[0]:
        raise InvalidInputError(
            f"{utilities.shape[0]} utilities for {perturbations.shape[0]} perturbations"
        )
    return utilities @ perturbations / (utilities.shape[0] * noise_std)


def apply_weight_decay(g: np.ndarray, theta: np.ndarray, weight_decay: float) -> np.ndarray:
    """Adds the decay term: g - wd * theta, which pulls parameters towards 0 under ascent."""
    return g - weight_decay * theta


def adam_ascend(
    theta: np.ndarray, g_total: np.ndarray, state: AdamState, config: EsConfig
) -> tuple[np.ndarray, AdamState]:
    """
    One bias-corrected Adam step in the direction of g_total.

    Args:
        theta (np.ndarray): Current parameters.
        g_total (np.ndarray): Ascent direction, weight decay included.
        state (AdamState): Accumulators before the step.
        config (EsConfig): Step size and moment decays.

    Returns:
        tuple[np.ndarray, AdamState]: New parameters and accumulators.
    """
    t = state.t + 1
    m = config.beta1 * state.m + (1.0 - config.beta1) * g_total
    v = config.beta2 * state.v + (1.0 - config.beta2) * (g_total * g_total)
    m_hat = m / (1.0 - config.beta1**t)
    v_hat = v / (1.0 - config.beta2**t)
    theta = theta + config.learning_rate * m_hat / (np.sqrt(v_hat) + config.epsilon)
    return theta, AdamState(m=m, v=v, t=t)


def es_update(
    theta: np.ndarray,
    perturbations: np.ndarray,
    fitness,
    state: AdamState,
    config: EsConfig,
) -> tuple[np.ndarray, AdamState]:
    """
    Shapes fitness, estimates the gradient, applies decay and takes an Adam step.

    A population with identical fitness carries no ranking signal, so its
    gradient estimate is the zero vector rather than an artefact of index
    tie-breaking.
    """
    fitness = np.asarray(fitness, dtype=float)
    if np.all(fitness == fitness[0]):
        g = np.zeros_like(theta)
    else:
        g = gradient_estimate(centered_ranks(fitness), perturbations, config.noise_std)
    g_total = apply_weight_decay(g, theta, config.weight_decay)
    return adam_ascend(theta, g_total, state, config)

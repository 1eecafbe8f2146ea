import numpy as np

from evolab.envs.base import Environment
from evolab.policy.mlp import ObsNormalizer
from evolab.utils.errors import InvalidInputError
from evolab.utils.seeding import Stream
from evolab.utils.seeding import stream_rng


def build_normalizer(
    env: Environment, episodes: int, rng_seed: int, sigma_init: float = 0.0
) -> ObsNormalizer:
    """
    Collects a reference batch of observations from random rollouts.

    Every episode is driven by actions drawn uniformly from [-1, 1]; every
    observation, the initial one included, enters the statistics. The
    resulting normalizer is frozen for the rest of the run.

    Args:
        env (Environment): An idle environment instance, used exclusively by this call.
        episodes (int): Number of rollouts.
        rng_seed (int): Seed of the normalizer stream.
        sigma_init (float, optional): Initial-state perturbation of the rollouts.

    Returns:
        ObsNormalizer: Per-dimension mean and population std (floored at 1e-2).

    Raises:
        InvalidInputError: If episodes < 1.
    """
    if episodes < 1:
        raise InvalidInputError(f"episodes must be >= 1, got {episodes}")

    observations = []
    for episode in range(episodes):
        rng = stream_rng(rng_seed, Stream.NORMALIZER, episode)
        observations.append(env.reset(rng, sigma_init))
        done = False
        while not done:
            action = rng.uniform(-1.0, 1.0, env.action_dim)
            result = env.step(action, rng, 0.0)
            observations.append(result.observation)
            done = result.done

    batch = np.vstack(observations)
    return ObsNormalizer(
        mean=batch.mean(axis=0), std=batch.std(axis=0), reference_count=batch.shape[0]
    )

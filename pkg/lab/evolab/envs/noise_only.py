import numpy as np

from evolab.envs.base import Environment


class NoiseOnly(Environment):
    """
    A one-step episode whose reward is a standard-normal draw, whatever the policy does.

    Fitness carries no information about the individual, so two independent
    evaluations of a population give the IEV noise floor.
    """

    obs_dim = 1
    action_dim = 1
    default_max_steps = 1
    state_labels = ("c",)

    def initial_state(self) -> np.ndarray:
        return np.zeros(1)

    def perturbation_mask(self) -> np.ndarray:
        return np.array([False])

    def observe(self) -> np.ndarray:
        return self.state.copy()

    def advance(self, action: np.ndarray, rng: np.random.Generator) -> tuple[float, bool]:
        return float(rng.standard_normal()), False

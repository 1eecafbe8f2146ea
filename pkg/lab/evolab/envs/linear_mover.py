import numpy as np

from evolab.envs.base import Environment


class LinearMover(Environment):
    """
    A point mass with first-order velocity response: v' = 0.9 v + 0.1 a, x' = x + v'.

    Progress per step is v'. It never falls, and saturating the action at +1
    drives the per-step reward towards 1.
    """

    obs_dim = 1
    action_dim = 1
    default_max_steps = 200
    state_labels = ("x", "v")

    def initial_state(self) -> np.ndarray:
        return np.zeros(2)

    def perturbation_mask(self) -> np.ndarray:
        return np.array([True, True])

    def observe(self) -> np.ndarray:
        return np.array([self.state[1]])

    def advance(self, action: np.ndarray, rng: np.random.Generator) -> tuple[float, bool]:
        x, v = self.state
        v = 0.9 * v + 0.1 * float(action[0])
        self.state = np.array([x + v, v])
        return v, False

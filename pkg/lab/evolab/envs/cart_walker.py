import math

import numpy as np

from evolab.envs.base import Environment

GRAVITY = 9.8
CART_MASS = 1.0
POLE_MASS = 0.1
TOTAL_MASS = CART_MASS + POLE_MASS
HALF_LENGTH = 0.5
POLE_MASS_LENGTH = POLE_MASS * HALF_LENGTH
FORCE_SCALE = 10.0
DT = 0.02


class CartWalker(Environment):
    """
    Cart-pole that is rewarded for moving the cart forward without dropping the pole.

    State is (x, v, theta, omega) with theta measured from upright. The pole
    counts as fallen once |theta| exceeds `spec.theta_max`. Under V0 an agent
    can collect the whole alive bonus by balancing in place, which is the
    stand-still local optimum; V5 only pays for displacement.
    """

    obs_dim = 4
    action_dim = 1
    default_max_steps = 1000
    state_labels = ("x", "v", "theta", "omega")

    def initial_state(self) -> np.ndarray:
        return np.zeros(4)

    def perturbation_mask(self) -> np.ndarray:
        return np.array([False, True, True, True])

    def observe(self) -> np.ndarray:
        _, v, theta, omega = self.state
        return np.array([v, math.sin(theta), math.cos(theta), omega])

    def advance(self, action: np.ndarray, rng: np.random.Generator) -> tuple[float, bool]:
        x, v, theta, omega = self.state
        force = FORCE_SCALE * float(action[0])
        sin_t = math.sin(theta)
        cos_t = math.cos(theta)

        temp = (force + POLE_MASS_LENGTH * omega * omega * sin_t) / TOTAL_MASS
        theta_acc = (GRAVITY * sin_t - cos_t * temp) / (
            HALF_LENGTH * (4.0 / 3.0 - POLE_MASS * cos_t * cos_t / TOTAL_MASS)
        )
        x_acc = temp - POLE_MASS_LENGTH * theta_acc * cos_t / TOTAL_MASS

        # explicit Euler
        new_x = x + DT * v
        new_v = v + DT * x_acc
        new_theta = theta + DT * omega
        new_omega = omega + DT * theta_acc
        self.state = np.array([new_x, new_v, new_theta, new_omega])

        fell = abs(new_theta) > self.spec.theta_max
        return new_x - x, fell

    def mechanical_energy(self) -> float:
        """Kinetic plus potential energy of cart and uniform-rod pole, zero at cart height."""
        _, v, theta, omega = self.state
        cart = 0.5 * CART_MASS * v * v
        com_speed_sq = (
            v * v + 2.0 * v * HALF_LENGTH * omega * math.cos(theta) + (HALF_LENGTH * omega) ** 2
        )
        inertia_com = POLE_MASS * HALF_LENGTH * HALF_LENGTH / 3.0
        pole = 0.5 * POLE_MASS * com_speed_sq + 0.5 * inertia_com * omega * omega
        potential = POLE_MASS * GRAVITY * HALF_LENGTH * math.cos(theta)
        return cart + pole + potential

from abc import ABC
from abc import abstractmethod
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from evolab.utils.csvio import write_csv_atomic
from evolab.utils.errors import InvalidInputError
from evolab.utils.errors import ProtocolViolationError


class RewardVariant(str, Enum):
    """
    V5 counts progress only; V0 adds a bonus of 1 for every step survived.
    """

    V5 = "V5"
    V0 = "V0"


class EnvId(str, Enum):
    LINEAR_MOVER = "linear_mover"
    CART_WALKER = "cart_walker"
    NOISE_ONLY = "noise_only"
    STATIC_FUNCTION = "static_function"


@dataclass(frozen=True)
class EnvSpec:
    """
    Identifies an environment and its difficulty parameters.

    Attributes:
        id (EnvId): Which environment.
        theta_max (float): cart_walker fall threshold in radians, in (0, pi/2).
        max_steps (int | None): Episode horizon; None picks the environment default.
        dim (int): static_function genotype dimension.
        target_seed (int): Seed of the static_function optimum.
    """

    id: EnvId = EnvId.CART_WALKER
    theta_max: float = 0.7
    max_steps: int | None = None
    dim: int = 20
    target_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "id", EnvId(self.id))
        if self.max_steps is not None and self.max_steps < 1:
            raise InvalidInputError(f"max_steps must be >= 1, got {self.max_steps}")
        if not 0.0 < self.theta_max < np.pi / 2:
            raise InvalidInputError(f"theta_max must lie in (0, pi/2), got {self.theta_max}")
        if self.dim < 1:
            raise InvalidInputError(f"dim must be >= 1, got {self.dim}")


HARD_THETA_MAX = 0.2


@dataclass(frozen=True)
class StepResult:
    """
    Outcome of one environment tick.

    Attributes:
        observation (np.ndarray): Observation after the tick.
        progress_reward (float): Forward displacement gained this tick.
        alive_bonus (float): 1.0 under V0 while the agent has not fallen, else 0.0.
        done (bool): Whether the episode is over.
        step_index (int): 0-based index of this tick.
        effective_action (np.ndarray): Action after perturbation and clamping.
        state (np.ndarray): Full internal state after the tick.
        fell (bool): Whether the fall condition triggered on this tick.
    """

    observation: np.ndarray
    progress_reward: float
    alive_bonus: float
    done: bool
    step_index: int
    effective_action: np.ndarray
    state: np.ndarray
    fell: bool = False


def episode_return(trajectory: Sequence[StepResult], variant: RewardVariant) -> float:
    """
    Sums the reward of a completed episode under a reward variant.

    Args:
        trajectory (Sequence[StepResult]): Every step of the episode, in order.
        variant (RewardVariant): V5 sums progress; V0 also adds the alive bonus.

    Returns:
        float: The episode return.
    """
    variant = RewardVariant(variant)
    total = float(sum(step.progress_reward for step in trajectory))
    if variant is RewardVariant.V0:
        total += float(sum(step.alive_bonus for step in trajectory))
    return total


class Environment(ABC):
    """
    An episodic environment with explicit perturbation hooks.

    Subclasses describe the state, which components an initial-state
    perturbation offsets, and one tick of the dynamics. The base class handles
    the episode protocol, action perturbation and clamping, and the alive bonus.

    Attributes:
        spec (EnvSpec): The environment's identity and parameters.
        variant (RewardVariant): Decides whether the alive bonus is granted.
        max_steps (int): Episode horizon.
    """

    obs_dim: int = 1
    action_dim: int = 1
    default_max_steps: int = 1000
    state_labels: tuple[str, ...] = ()
    evaluates_genotype: bool = False

    def __init__(self, spec: EnvSpec, variant: RewardVariant = RewardVariant.V5):
        self.spec = spec
        self.variant = RewardVariant(variant)
        self.max_steps = spec.max_steps or self.default_max_steps
        self.state = self.initial_state()
        self._steps = 0
        self._active = False

    @abstractmethod
    def initial_state(self) -> np.ndarray:
        """The canonical, unperturbed initial state."""

    @abstractmethod
    def perturbation_mask(self) -> np.ndarray:
        """Boolean mask of the state components an initial perturbation offsets."""

    @abstractmethod
    def observe(self) -> np.ndarray:
        """Observation of the current state."""

    @abstractmethod
    def advance(self, action: np.ndarray, rng: np.random.Generator) -> tuple[float, bool]:
        """Advances the dynamics one tick; returns (progress, fell)."""

    @property
    def active(self) -> bool:
        return self._active

    def reset(self, rng: np.random.Generator, sigma_init: float = 0.0) -> np.ndarray:
        """
        Starts a new episode from a perturbed canonical state.

        Args:
            rng (np.random.Generator): Source of the perturbation draws.
            sigma_init (float, optional): Std of the Gaussian offset added to each
                perturbable component. Defaults to 0.0.

        Returns:
            np.ndarray: The initial observation.
        """
        if not np.isfinite(sigma_init) or sigma_init < 0:
            raise InvalidInputError(f"sigma_init must be finite and >= 0, got {sigma_init}")

        state = self.initial_state()
        mask = self.perturbation_mask()
        state[mask] += sigma_init * rng.standard_normal(int(mask.sum()))
        self.state = state
        self._steps = 0
        self._active = True
        return self.observe()

    def step(
        self, action, rng: np.random.Generator, sigma_act: float = 0.0
    ) -> StepResult:
        """
        Applies a perturbed, clamped action and advances one tick.

        Args:
            action (array-like): Raw action, one value per actuator.
            rng (np.random.Generator): Source of the action perturbation.
            sigma_act (float, optional): Std of the Gaussian added to each action
                component before clamping to [-1, 1]. Defaults to 0.0.

        Returns:
            StepResult: The outcome of the tick.

        Raises:
            ProtocolViolationError: If no episode is active.
            InvalidInputError: If the action has the wrong size or is not finite.
        """
        if not self._active:
            raise ProtocolViolationError(
                f"{self.spec.id.value}: step() called without an active episode"
            )
        action = np.asarray(action, dtype=float).reshape(-1)
        if action.size != self.action_dim:
            raise InvalidInputError(
                f"{self.spec.id.value}: expected {self.action_dim} action values, got {action.size}"
            )
        if not np.all(np.isfinite(action)):
            raise InvalidInputError(f"{self.spec.id.value}: action is not finite")
        if not np.isfinite(sigma_act) or sigma_act < 0:
            raise InvalidInputError(f"sigma_act must be finite and >= 0, got {sigma_act}")

        effective = np.clip(action + sigma_act * rng.standard_normal(self.action_dim), -1.0, 1.0)
        progress, fell = self.advance(effective, rng)

        step_index = self._steps
        self._steps += 1
        done = fell or self._steps >= self.max_steps
        if done:
            self._active = False

        alive_bonus = 1.0 if self.variant is RewardVariant.V0 and not fell else 0.0
        return StepResult(
            observation=self.observe(),
            progress_reward=float(progress),
            alive_bonus=alive_bonus,
            done=done,
            step_index=step_index,
            effective_action=effective,
            state=self.state.copy(),
            fell=fell,
        )


def dump_trajectory(path: str | Path, trajectory: Sequence[StepResult], env: Environment) -> Path:
    """
    Writes one episode as CSV: step, state components, effective action, rewards.

    Args:
        path (str | Path): Destination file.
        trajectory (Sequence[StepResult]): The steps of the episode.
        env (Environment): The environment that produced it, for the column names.

    Returns:
        Path: The written file.
    """
    action_labels = [f"action_{k}" for k in range(env.action_dim)]
    header = ["step", *env.state_labels, *action_labels, "progress_reward", "alive_bonus"]
    rows = [
        [
            step.step_index,
            *(float(v) for v in step.state),
            *(float(a) for a in step.effective_action),
            step.progress_reward,
            step.alive_bonus,
        ]
        for step in trajectory
    ]
    return write_csv_atomic(path, header, rows)

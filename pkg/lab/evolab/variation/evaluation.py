from dataclasses import dataclass
from dataclasses import field

import numpy as np

from evolab.envs.base import Environment
from evolab.envs.base import episode_return
from evolab.envs.base import StepResult
from evolab.policy.mlp import Controller
from evolab.policy.mlp import ParameterVector
from evolab.utils.errors import InvalidInputError
from evolab.variation.plan import sigma_act_at
from evolab.variation.plan import VariationPlan


@dataclass(frozen=True)
class EvaluationRecord:
    """
    Fitness of one candidate from one evaluation pass.

    Attributes:
        fitness (float): Mean of the episode returns.
        episode_returns (tuple[float, ...]): Return of every episode.
        episode_progress (tuple[float, ...]): Summed progress reward of every episode.
        episode_lengths (tuple[int, ...]): Steps survived in every episode.
        trajectories (tuple): Step records per episode, only when requested.
    """

    fitness: float
    episode_returns: tuple[float, ...]
    episode_progress: tuple[float, ...] = ()
    episode_lengths: tuple[int, ...] = ()
    trajectories: tuple = field(default=(), compare=False, repr=False)


def run_episode(
    params: ParameterVector,
    env: Environment,
    controller: Controller,
    plan: VariationPlan,
    generation: int,
    rng: np.random.Generator,
) -> list[StepResult]:
    """Runs one episode under the plan and returns its steps."""
    obs = env.reset(rng, plan.sigma_init)
    trajectory = []
    t = 0
    while True:
        action = controller.act(params, obs)
        sigma = sigma_act_at(plan, t, env.max_steps, generation)
        result = env.step(action, rng, sigma)
        trajectory.append(result)
        if result.done:
            return trajectory
        obs = result.observation
        t += 1


def evaluate(
    params: ParameterVector,
    env: Environment,
    plan: VariationPlan,
    generation: int,
    rng: np.random.Generator,
    controller: Controller | None = None,
    keep_trajectories: bool = False,
) -> EvaluationRecord:
    """
    Estimates the fitness of one genotype under an experimental condition.

    Runs `plan.episodes_per_eval` episodes back to back on `rng`; each starts
    from a state perturbed with `plan.sigma_init` and perturbs actions with the
    plan's schedule. Environments that score genotypes directly are called once.

    Args:
        params (ParameterVector): The genotype.
        env (Environment): An idle environment instance owned by the caller.
        plan (VariationPlan): Perturbation amplitudes, modality and episode count.
        generation (int): Current generation, drives the incremental2 ramp.
        rng (np.random.Generator): The only source of randomness used.
        controller (Controller | None, optional): Policy shape and normalizer;
            required for episodic environments.
        keep_trajectories (bool, optional): Retain every StepResult. Defaults to False.

    Returns:
        EvaluationRecord: Mean fitness plus per-episode details.
    """
    if env.evaluates_genotype:
        value = env.fitness(params)
        return EvaluationRecord(
            fitness=value, episode_returns=(value,), episode_progress=(0.0,), episode_lengths=(0,)
        )
    if controller is None:
        raise InvalidInputError(f"{env.spec.id.value} needs a controller to be evaluated")

    returns, progress, lengths, trajectories = [], [], [], []
    for _ in range(plan.episodes_per_eval):
        trajectory = run_episode(params, env, controller, plan, generation, rng)
        returns.append(episode_return(trajectory, env.variant))
        progress.append(float(sum(step.progress_reward for step in trajectory)))
        lengths.append(len(trajectory))
        if keep_trajectories:
            trajectories.append(tuple(trajectory))

    return EvaluationRecord(
        fitness=float(np.mean(returns)),
        episode_returns=tuple(returns),
        episode_progress=tuple(progress),
        episode_lengths=tuple(lengths),
        trajectories=tuple(trajectories),
    )

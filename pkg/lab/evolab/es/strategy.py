from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from dataclasses import field
from typing import Callable

import numpy as np

from evolab.envs import make_env
from evolab.envs.base import EnvSpec
from evolab.envs.base import RewardVariant
from evolab.es.logbook import GenerationLog
from evolab.es.operators import AdamState
from evolab.es.operators import es_update
from evolab.es.operators import sample_perturbations
from evolab.metrics.iev import iev_from_double_eval
from evolab.metrics.iev import IevSample
from evolab.policy.mlp import Controller
from evolab.policy.mlp import MlpSpec
from evolab.policy.mlp import ParameterVector
from evolab.policy.normalizer import build_normalizer
from evolab.utils.errors import EvolutionAborted
from evolab.utils.logging import fancy_step_tracker
from evolab.utils.logging import log_generation
from evolab.utils.seeding import Stream
from evolab.utils.seeding import stream_rng
from evolab.variation.evaluation import evaluate
from evolab.variation.evaluation import EvaluationRecord
from evolab.variation.plan import peak_sigma_act
from evolab.variation.plan import VariationPlan


@dataclass
class EvolutionResult:
    """
    Everything an evolution run produces.

    Attributes:
        best_params (ParameterVector): Center genotype with the highest center evaluation.
        best_fitness (float): That center evaluation.
        best_generation (int): Generation it was observed in.
        final_params (ParameterVector): Center genotype after the last update.
        logs (list[GenerationLog]): One record per generation.
        iev_samples (list[IevSample]): One sample per generation, when instrumented.
        fitness_pairs (list[tuple]): (generation, candidate, pass-1, pass-2 or None) rows.
        controller (Controller | None): Policy shape and normalizer, None for direct genotypes.
    """

    best_params: ParameterVector
    best_fitness: float
    best_generation: int
    final_params: ParameterVector
    logs: list[GenerationLog] = field(default_factory=list)
    iev_samples: list[IevSample] = field(default_factory=list)
    fitness_pairs: list[tuple] = field(default_factory=list)
    controller: Controller | None = None


@dataclass(frozen=True)
class EvaluationTask:
    env_spec: EnvSpec
    variant: RewardVariant
    plan: VariationPlan
    controller: Controller | None
    master_seed: int
    stream: Stream
    generation: int
    candidate: int
    params: ParameterVector


def run_evaluation_task(task: EvaluationTask) -> EvaluationRecord:
    """Evaluates one candidate on a private environment and its own keyed stream."""
    env = make_env(task.env_spec, task.variant)
    rng = stream_rng(task.master_seed, task.stream, task.generation, task.candidate)
    return evaluate(task.params, env, task.plan, task.generation, rng, task.controller)


class CandidateEvaluator:
    """
    Fans candidate evaluations out to worker processes.

    Results come back in submission order and each task carries its own
    random stream, so the output does not depend on the worker count.

    Attributes:
        workers (int): Number of worker processes; 1 evaluates in-process.
    """

    def __init__(self, workers: int = 1):
        self.workers = max(1, int(workers))
        self._executor = None

    def __enter__(self):
        if self.workers > 1:
            self._executor = ProcessPoolExecutor(max_workers=self.workers)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self._executor is not None:
            self._executor.shutdown(cancel_futures=exc_type is not None)
            self._executor = None

    def map(self, tasks: list[EvaluationTask]) -> list[EvaluationRecord]:
        if self._executor is None:
            return [run_evaluation_task(task) for task in tasks]
        chunksize = max(1, len(tasks) // (4 * self.workers))
        return list(self._executor.map(run_evaluation_task, tasks, chunksize=chunksize))


def build_controller(run_config) -> tuple[Controller | None, int]:
    """
    Prepares the policy for a run.

    Returns:
        tuple[Controller | None, int]: The controller (None when the environment
        scores genotypes directly) and the genotype length.
    """
    env = make_env(run_config.env, run_config.reward_variant)
    if env.evaluates_genotype:
        return None, env.dim

    spec = MlpSpec(
        obs_dim=env.obs_dim,
        action_dim=env.action_dim,
        hidden_dim=run_config.policy.hidden_dim,
    )
    normalizer = build_normalizer(
        env,
        run_config.es.normalizer_episodes,
        run_config.master_seed,
        sigma_init=run_config.variation.sigma_init,
    )
    return Controller(spec=spec, normalizer=normalizer), spec.param_count


def evolve(
    run_config,
    workers: int = 1,
    verbose: int = 0,
    on_generation: Callable[[GenerationLog, ParameterVector], None] | None = None,
) -> EvolutionResult:
    """
    Runs the evolution strategy described by a RunConfig.

    Every generation samples mirrored perturbations, evaluates each candidate
    once for the update (pass 1) and, when instrumented, once more on
    independent streams (pass 2) to measure IEV, evaluates the center
    genotype, then updates the center with Adam.

    Args:
        run_config (RunConfig): Environment, reward variant, policy, ES and variation settings.
        workers (int, optional): Worker processes for candidate evaluation. Defaults to 1.
        verbose (int, optional): The verbosity level. Defaults to 0 (no output).
        on_generation (Callable, optional): Called with each GenerationLog and the
            center genotype that was evaluated in that generation.

    Returns:
        EvolutionResult: Best and final genotypes, logs and fitness pairs.

    Raises:
        EvolutionAborted: If an evaluation fails; carries the logs completed so far.
    """
    es = run_config.es
    plan = run_config.variation.with_ramp(es.generations)
    seed = run_config.master_seed
    variant = RewardVariant(run_config.reward_variant)
    reference_env = make_env(run_config.env, variant)

    controller, dim = build_controller(run_config)
    theta = es.init_std * stream_rng(seed, Stream.INIT).standard_normal(dim)
    adam = AdamState.zeros(dim)

    result = EvolutionResult(
        best_params=theta.copy(),
        best_fitness=-np.inf,
        best_generation=-1,
        final_params=theta.copy(),
        controller=controller,
    )

    def tasks_for(stream: Stream, generation: int, candidates: np.ndarray) -> list[EvaluationTask]:
        return [
            EvaluationTask(
                env_spec=run_config.env,
                variant=variant,
                plan=plan,
                controller=controller,
                master_seed=seed,
                stream=stream,
                generation=generation,
                candidate=index,
                params=params,
            )
            for index, params in enumerate(candidates)
        ]

    with CandidateEvaluator(workers) as evaluator:
        for generation in range(es.generations):
            if verbose > 1:
                fancy_step_tracker(generation, es.generations)

            perturbations = sample_perturbations(
                dim, es.population_size, stream_rng(seed, Stream.SAMPLING, generation)
            )
            candidates = theta + es.noise_std * perturbations

            try:
                pass1 = evaluator.map(tasks_for(Stream.PASS1, generation, candidates))
                pass2 = None
                if es.iev_instrumentation:
                    pass2 = evaluator.map(tasks_for(Stream.PASS2, generation, candidates))
                center = evaluator.map(tasks_for(Stream.CENTER, generation, theta[None, :]))[0]
            except Exception as exc:
                raise EvolutionAborted(
                    f"evaluation failed in generation {generation}: {exc}",
                    partial_logs=list(result.logs),
                ) from exc

            fitness1 = np.array([record.fitness for record in pass1])
            sample = None
            if pass2 is not None:
                fitness2 = np.array([record.fitness for record in pass2])
                sample = iev_from_double_eval(fitness1, fitness2, generation)
                result.iev_samples.append(sample)
                result.fitness_pairs.extend(
                    (generation, index, f1, f2)
                    for index, (f1, f2) in enumerate(zip(fitness1.tolist(), fitness2.tolist()))
                )
            else:
                result.fitness_pairs.extend(
                    (generation, index, f1, None) for index, f1 in enumerate(fitness1.tolist())
                )

            if center.fitness > result.best_fitness:
                result.best_fitness = center.fitness
                result.best_params = theta.copy()
                result.best_generation = generation
            evaluated_theta = theta

            theta, adam = es_update(theta, perturbations, fitness1, adam, es)

            log = GenerationLog(
                generation=generation,
                best_fitness=float(fitness1.max()),
                mean_fitness=float(fitness1.mean()),
                iev=None if sample is None else sample.iev,
                snr=None if sample is None else sample.snr,
                sigma_act_effective=(
                    0.0
                    if reference_env.evaluates_genotype
                    else float(peak_sigma_act(plan, reference_env.max_steps, generation))
                ),
                center_eval_fitness=center.fitness,
            )
            result.logs.append(log)
            log_generation(log, verbose)
            if on_generation is not None:
                on_generation(log, evaluated_theta)

    result.final_params = theta
    return result

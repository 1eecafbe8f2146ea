"""
Post-evaluation of evolved genotypes.

Protocol A measures performance under the conditions most runs were trained
in: 10 episodes with sigma_init 0.03 and sigma_act 0.01. Protocol B measures
robustness: 10 episodes at each of 10 action-perturbation levels from 0.01 to
0.55. Both draw from the POSTEVAL stream keyed by (level, episode), so the
outcome does not depend on the worker count.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from evolab.envs import make_env
from evolab.envs.base import dump_trajectory
from evolab.es.strategy import CandidateEvaluator
from evolab.es.strategy import EvaluationTask
from evolab.harness.runner import load_run
from evolab.harness.runner import replication_dir
from evolab.harness.runner import replication_seed
from evolab.policy.io import load_checkpoint
from evolab.policy.mlp import Controller
from evolab.policy.mlp import ObsNormalizer
from evolab.utils.csvio import write_csv_atomic
from evolab.utils.errors import InvalidInputError
from evolab.utils.logging import fancy_print
from evolab.utils.seeding import Stream
from evolab.utils.seeding import stream_rng
from evolab.variation.evaluation import evaluate
from evolab.variation.evaluation import EvaluationRecord
from evolab.variation.plan import Modality
from evolab.variation.plan import VariationPlan

DEFAULT_SIGMA_INIT = 0.03

ROBUSTNESS_LEVELS: tuple[float, ...] = (
    0.01,
    0.07,
    0.13,
    0.19,
    0.25,
    0.31,
    0.37,
    0.43,
    0.49,
    0.55,
)

PERFORMANCE_HEADER = (
    "replication",
    "episode",
    "sigma_init",
    "sigma_act",
    "return",
    "progress",
    "length",
)
PERFORMANCE_SUMMARY_HEADER = (
    "replication",
    "mean_return",
    "mean_progress",
    "episodes",
    "sigma_init",
)
ROBUSTNESS_HEADER = ("sigma_act", "mean_return", "mean_progress", "episodes", "sigma_init")
ROBUSTNESS_EPISODES_HEADER = (
    "replication",
    "sigma_act",
    "episode",
    "return",
    "progress",
    "length",
)


@dataclass(frozen=True)
class PostEvalProtocol:
    """
    A fixed post-evaluation schedule.

    Attributes:
        tag (str): "A" or "B".
        episodes_per_level (int): Episodes at every action-perturbation level.
        sigma_init (float): Initial-state perturbation of every episode.
        sigma_act_levels (tuple[float, ...]): Fixed action-perturbation amplitudes, ascending.
    """

    tag: str
    episodes_per_level: int
    sigma_init: float
    sigma_act_levels: tuple[float, ...]

    @property
    def total_episodes(self) -> int:
        return self.episodes_per_level * len(self.sigma_act_levels)


def make_protocol(tag: str, sigma_init_override: float | None = None) -> PostEvalProtocol:
    """
    Builds protocol A or B.

    Args:
        tag (str): "A" or "B".
        sigma_init_override (float | None, optional): Replaces the 0.03 initial-state
            perturbation, e.g. 0.1 for protocol B.

    Raises:
        InvalidInputError: On an unknown tag or a negative override.
    """
    sigma_init = DEFAULT_SIGMA_INIT if sigma_init_override is None else float(sigma_init_override)
    if sigma_init < 0:
        raise InvalidInputError(f"sigma_init must be >= 0, got {sigma_init}")
    tag = str(tag).upper()
    if tag == "A":
        return PostEvalProtocol("A", 10, sigma_init, (0.01,))
    if tag == "B":
        return PostEvalProtocol("B", 10, sigma_init, ROBUSTNESS_LEVELS)
    raise InvalidInputError(f"unknown post-evaluation protocol {tag!r}; expected A or B")


def _episode_records(
    params,
    controller: Controller | None,
    config,
    seed: int,
    protocol: PostEvalProtocol,
    evaluator: CandidateEvaluator,
) -> list[list[EvaluationRecord]]:
    """One single-episode record per (level, episode)."""
    records = []
    for level_index, level in enumerate(protocol.sigma_act_levels):
        plan = VariationPlan(
            sigma_init=protocol.sigma_init,
            action_modality=Modality.FIXED,
            sigma_act=level,
            episodes_per_eval=1,
        )
        tasks = [
            EvaluationTask(
                env_spec=config.env,
                variant=config.reward_variant,
                plan=plan,
                controller=controller,
                master_seed=seed,
                stream=Stream.POSTEVAL,
                generation=level_index,
                candidate=episode,
                params=params,
            )
            for episode in range(protocol.episodes_per_level)
        ]
        records.append(evaluator.map(tasks))
    return records


def _dump_trajectories(params, controller, config, seed, protocol, rep_dir: Path) -> None:
    """Replays every episode in-process on the same streams and writes its steps."""
    env = make_env(config.env, config.reward_variant)
    if env.evaluates_genotype:
        return
    for level_index, level in enumerate(protocol.sigma_act_levels):
        plan = VariationPlan(sigma_init=protocol.sigma_init, sigma_act=level)
        for episode in range(protocol.episodes_per_level):
            rng = stream_rng(seed, Stream.POSTEVAL, level_index, episode)
            record = evaluate(params, env, plan, level_index, rng, controller, True)
            dump_trajectory(
                rep_dir / "trajectories" / f"{protocol.tag}_l{level_index:02d}_e{episode:02d}.csv",
                record.trajectories[0],
                env,
            )


def cmd_posteval(
    run_dir: str | Path,
    protocol: str = "A",
    sigma_init_override: float | None = None,
    workers: int = 1,
    checkpoint: str = "best",
    dump_trajectories: bool = False,
    verbose: int = 0,
) -> Path:
    """
    Post-evaluates the checkpoint of every replication of a run.

    Args:
        run_dir (str | Path): A directory written by cmd_evolve.
        protocol (str, optional): "A" (performance) or "B" (robustness). Defaults to "A".
        sigma_init_override (float | None, optional): Initial-state perturbation
            to use instead of 0.03; recorded in the report.
        workers (int, optional): Worker processes for the episodes.
        checkpoint (str, optional): Which checkpoint to load, "best" or "final".
        dump_trajectories (bool, optional): Also write one CSV per episode under
            `repNN/trajectories/`. Defaults to False.
        verbose (int, optional): The verbosity level. Defaults to 0 (no output).

    Returns:
        Path: `posteval_A.csv` (per-episode returns) or `posteval_B.csv`
        (mean return per sigma_act level).

    Raises:
        CheckpointNotFoundError: If a replication has no such checkpoint.
    """
    run_dir = Path(run_dir)
    config = load_run(run_dir)
    spec = make_protocol(protocol, sigma_init_override)

    per_replication = []
    with CandidateEvaluator(workers) as evaluator:
        for replication in range(config.replication_count):
            rep_dir = replication_dir(run_dir, replication)
            params, mlp, normalizer, _ = load_checkpoint(rep_dir / f"{checkpoint}.bin")
            controller = None
            if mlp is not None:
                if normalizer is None:
                    normalizer = ObsNormalizer.identity(mlp.obs_dim)
                controller = Controller(spec=mlp, normalizer=normalizer)
            seed = replication_seed(config, replication)

            if verbose > 0:
                fancy_print(f"POST-EVALUATION {spec.tag}: REPLICATION {replication + 1}")
            per_replication.append(
                _episode_records(params, controller, config, seed, spec, evaluator)
            )
            if dump_trajectories:
                _dump_trajectories(params, controller, config, seed, spec, rep_dir)

    if spec.tag == "A":
        return _write_performance(run_dir, spec, per_replication)
    return _write_robustness(run_dir, spec, per_replication)


def _write_performance(run_dir: Path, spec: PostEvalProtocol, per_replication) -> Path:
    sigma_act = spec.sigma_act_levels[0]
    episode_rows, summary_rows = [], []
    for replication, (records,) in enumerate(per_replication):
        for episode, record in enumerate(records):
            episode_rows.append(
                (
                    replication,
                    episode,
                    spec.sigma_init,
                    sigma_act,
                    record.fitness,
                    record.episode_progress[0],
                    record.episode_lengths[0],
                )
            )
        summary_rows.append(
            (
                replication,
                float(np.mean([r.fitness for r in records])),
                float(np.mean([r.episode_progress[0] for r in records])),
                len(records),
                spec.sigma_init,
            )
        )
    write_csv_atomic(run_dir / "posteval_A_summary.csv", PERFORMANCE_SUMMARY_HEADER, summary_rows)
    return write_csv_atomic(run_dir / "posteval_A.csv", PERFORMANCE_HEADER, episode_rows)


def _write_robustness(run_dir: Path, spec: PostEvalProtocol, per_replication) -> Path:
    episode_rows, level_rows = [], []
    for level_index, level in enumerate(spec.sigma_act_levels):
        returns, progress = [], []
        for replication, levels in enumerate(per_replication):
            for episode, record in enumerate(levels[level_index]):
                returns.append(record.fitness)
                progress.append(record.episode_progress[0])
                episode_rows.append(
                    (
                        replication,
                        level,
                        episode,
                        record.fitness,
                        record.episode_progress[0],
                        record.episode_lengths[0],
                    )
                )
        level_rows.append(
            (
                level,
                float(np.mean(returns)),
                float(np.mean(progress)),
                len(returns),
                spec.sigma_init,
            )
        )
    write_csv_atomic(run_dir / "posteval_B_episodes.csv", ROBUSTNESS_EPISODES_HEADER, episode_rows)
    return write_csv_atomic(run_dir / "posteval_B.csv", ROBUSTNESS_HEADER, level_rows)

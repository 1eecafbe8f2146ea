"""
Evolution runs on disk.

A run directory holds the exact configuration that produced it and one
`repNN/` sub-directory per replication:

    config.yaml
    replications.csv
    summary.yaml
    rep00/generation_log.csv
    rep00/fitness_pairs.csv
    rep00/best.bin (+ best.meta.yaml)
    rep00/final.bin (+ final.meta.yaml)
    rep00/checkpoint_g0009.bin ...
"""

from dataclasses import dataclass
from dataclasses import replace
from pathlib import Path

import numpy as np
import yaml

from evolab.es.logbook import write_fitness_pairs
from evolab.es.logbook import write_generation_log
from evolab.es.strategy import evolve
from evolab.es.strategy import EvolutionResult
from evolab.harness.config import dump_run_config
from evolab.harness.config import load_run_config
from evolab.harness.config import RunConfig
from evolab.policy.io import save_checkpoint
from evolab.stats.kruskal import summarize
from evolab.utils.csvio import write_csv_atomic
from evolab.utils.csvio import write_text_atomic
from evolab.utils.errors import CheckpointNotFoundError
from evolab.utils.errors import EvolutionAborted
from evolab.utils.logging import fancy_print
from evolab.utils.seeding import derive_seed
from evolab.utils.seeding import Stream

CONFIG_FILE = "config.yaml"
SUMMARY_FILE = "summary.yaml"
REPLICATIONS_FILE = "replications.csv"
GENERATION_LOG_FILE = "generation_log.csv"
FITNESS_PAIRS_FILE = "fitness_pairs.csv"

REPLICATIONS_HEADER = (
    "replication",
    "seed",
    "best_fitness",
    "best_generation",
    "final_center_fitness",
    "mean_iev",
)


@dataclass(frozen=True)
class ReplicationOutcome:
    replication: int
    seed: int
    best_fitness: float
    best_generation: int
    final_center_fitness: float
    mean_iev: float | None


def replication_dir(run_dir: str | Path, replication: int) -> Path:
    return Path(run_dir) / f"rep{replication:02d}"


def replication_seed(config: RunConfig, replication: int) -> int:
    return derive_seed(config.master_seed, Stream.REPLICATION, replication)


def load_run(run_dir: str | Path) -> RunConfig:
    """
    Reads the configuration stored in a run directory.

    Raises:
        CheckpointNotFoundError: If the directory holds no config.yaml.
    """
    path = Path(run_dir) / CONFIG_FILE
    if not path.is_file():
        raise CheckpointNotFoundError(f"{run_dir} is not a run directory (no {CONFIG_FILE})")
    return load_run_config(path)


def _persist_result(rep_dir: Path, result: EvolutionResult) -> None:
    write_generation_log(rep_dir / GENERATION_LOG_FILE, result.logs)
    write_fitness_pairs(rep_dir / FITNESS_PAIRS_FILE, result.fitness_pairs)

    spec = normalizer = None
    if result.controller is not None:
        spec, normalizer = result.controller.spec, result.controller.normalizer
    save_checkpoint(
        rep_dir / "best.bin",
        result.best_params,
        spec,
        normalizer,
        extra={"generation": result.best_generation, "center_fitness": result.best_fitness},
    )
    save_checkpoint(
        rep_dir / "final.bin",
        result.final_params,
        spec,
        normalizer,
        extra={"generation": len(result.logs)},
    )


def run_replication(
    config: RunConfig,
    replication: int,
    run_dir: str | Path,
    workers: int = 1,
    verbose: int = 0,
) -> ReplicationOutcome:
    """
    Runs one replication and writes its logs and checkpoints.

    Args:
        config (RunConfig): The experiment; its master seed is the run's, not the replication's.
        replication (int): 0-based replication index.
        run_dir (str | Path): The run directory.
        workers (int, optional): Worker processes for candidate evaluation.
        verbose (int, optional): The verbosity level. Defaults to 0 (no output).

    Returns:
        ReplicationOutcome: The numbers that go into replications.csv.

    Raises:
        EvolutionAborted: After the partial generation log has been written.
    """
    seed = replication_seed(config, replication)
    rep_config = replace(config, master_seed=seed)
    rep_dir = replication_dir(run_dir, replication)
    rep_dir.mkdir(parents=True, exist_ok=True)
    every = config.es.checkpoint_every

    def on_generation(log, theta):
        if every and (log.generation + 1) % every == 0:
            save_checkpoint(
                rep_dir / f"checkpoint_g{log.generation:04d}.bin",
                theta,
                extra={"generation": log.generation, "center_fitness": log.center_eval_fitness},
            )

    try:
        result = evolve(rep_config, workers=workers, verbose=verbose, on_generation=on_generation)
    except EvolutionAborted as exc:
        write_generation_log(rep_dir / GENERATION_LOG_FILE, exc.partial_logs)
        raise

    _persist_result(rep_dir, result)

    ievs = [sample.iev for sample in result.iev_samples]
    return ReplicationOutcome(
        replication=replication,
        seed=seed,
        best_fitness=result.best_fitness,
        best_generation=result.best_generation,
        final_center_fitness=result.logs[-1].center_eval_fitness,
        mean_iev=float(np.mean(ievs)) if ievs else None,
    )


def write_summary(run_dir: str | Path, config: RunConfig, outcomes: list[ReplicationOutcome]):
    """Writes replications.csv and the median/IQR summary of the best fitness."""
    run_dir = Path(run_dir)
    write_csv_atomic(
        run_dir / REPLICATIONS_FILE,
        REPLICATIONS_HEADER,
        [
            (
                o.replication,
                o.seed,
                o.best_fitness,
                o.best_generation,
                o.final_center_fitness,
                o.mean_iev,
            )
            for o in outcomes
        ],
    )
    best = [o.best_fitness for o in outcomes]
    stats = summarize(best)
    summary = {
        "name": config.name,
        "replications": len(outcomes),
        "best_fitness": best,
        "best_fitness_median": stats.median,
        "best_fitness_iqr": stats.iqr,
        "best_fitness_mean": stats.mean,
        "best_fitness_std": stats.std,
    }
    ievs = [o.mean_iev for o in outcomes if o.mean_iev is not None]
    if ievs:
        summary["mean_iev"] = float(np.mean(ievs))
    return write_text_atomic(run_dir / SUMMARY_FILE, yaml.safe_dump(summary, sort_keys=False))


def run_experiment(
    config: RunConfig,
    run_dir: str | Path,
    workers: int = 1,
    verbose: int = 0,
) -> list[ReplicationOutcome]:
    """
    Runs every replication of a configuration into `run_dir`.

    Returns:
        list[ReplicationOutcome]: One entry per replication, in order.
    """
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    write_text_atomic(run_dir / CONFIG_FILE, dump_run_config(config))

    outcomes = []
    for replication in range(config.replication_count):
        if verbose > 0:
            fancy_print(f"{config.name}: REPLICATION {replication + 1}/{config.replication_count}")
        outcomes.append(run_replication(config, replication, run_dir, workers, verbose))

    write_summary(run_dir, config, outcomes)
    return outcomes


def cmd_evolve(
    config_path: str | Path,
    run_dir: str | Path | None = None,
    workers: int = 1,
    seed: int | None = None,
    verbose: int = 0,
) -> Path:
    """
    Runs an experiment described by a YAML file.

    Args:
        config_path (str | Path): The run configuration.
        run_dir (str | Path | None, optional): Output directory. Defaults to
            `<output_dir>/<name>` from the configuration.
        workers (int, optional): Worker processes for candidate evaluation.
        seed (int | None, optional): Overrides the configured master seed.
        verbose (int, optional): The verbosity level. Defaults to 0 (no output).

    Returns:
        Path: The run directory.
    """
    config = load_run_config(config_path)
    if seed is not None:
        config = replace(config, master_seed=seed)
    run_dir = Path(run_dir) if run_dir is not None else Path(config.output_dir) / config.name
    run_experiment(config, run_dir, workers, verbose)
    return run_dir

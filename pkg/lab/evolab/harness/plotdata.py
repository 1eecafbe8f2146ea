"""
Tidy CSVs behind the usual figures, for plotting with external tools.

    iev_bar.csv           condition, mean_iev, mean_snr, replications
    iev_series.csv        condition, generation, iev
    performance_box.csv   condition, replication, fitness
    robustness_curve.csv  condition, sigma_act, mean_return, mean_progress
"""

from pathlib import Path

import numpy as np

from evolab.es.logbook import read_generation_log
from evolab.harness.runner import GENERATION_LOG_FILE
from evolab.harness.runner import load_run
from evolab.harness.runner import REPLICATIONS_FILE
from evolab.harness.runner import replication_dir
from evolab.metrics.iev import snr
from evolab.utils.csvio import write_csv_atomic
from evolab.utils.errors import CheckpointNotFoundError
from evolab.utils.extraction import require_float_columns

IEV_BAR_HEADER = ("condition", "mean_iev", "mean_snr", "replications")
IEV_SERIES_HEADER = ("condition", "generation", "iev")
PERFORMANCE_BOX_HEADER = ("condition", "replication", "fitness")
ROBUSTNESS_CURVE_HEADER = ("condition", "sigma_act", "mean_return", "mean_progress")


def _iev_by_generation(run_dir: Path, replications: int) -> dict[int, list[float]]:
    by_generation: dict[int, list[float]] = {}
    for replication in range(replications):
        for log in read_generation_log(replication_dir(run_dir, replication) / GENERATION_LOG_FILE):
            if log.iev is not None:
                by_generation.setdefault(log.generation, []).append(log.iev)
    return by_generation


def cmd_plotdata(run_dirs: list[str | Path], output_dir: str | Path) -> list[Path]:
    """
    Collects plot-ready tables from one or more run directories.

    Each run directory is one condition, named after its configuration.
    robustness_curve.csv is only written when some run has a protocol B report.

    Args:
        run_dirs (list[str | Path]): Directories written by cmd_evolve.
        output_dir (str | Path): Where the CSVs go.

    Returns:
        list[Path]: The files written.

    Raises:
        CheckpointNotFoundError: If a directory is not a run directory.
    """
    output_dir = Path(output_dir)
    bar, series, box, curve = [], [], [], []

    for run_dir in map(Path, run_dirs):
        config = load_run(run_dir)
        condition = config.name

        by_generation = _iev_by_generation(run_dir, config.replication_count)
        for generation in sorted(by_generation):
            series.append((condition, generation, float(np.mean(by_generation[generation]))))
        if by_generation:
            overall = float(np.mean([v for values in by_generation.values() for v in values]))
            bar.append((condition, overall, snr(overall), config.replication_count))

        replications_csv = run_dir / REPLICATIONS_FILE
        if not replications_csv.is_file():
            raise CheckpointNotFoundError(f"{run_dir} has no {REPLICATIONS_FILE}")
        columns = require_float_columns(replications_csv, ["replication", "best_fitness"])
        box.extend(
            (condition, int(replication), fitness)
            for replication, fitness in zip(columns["replication"], columns["best_fitness"])
        )

        robustness_csv = run_dir / "posteval_B.csv"
        if robustness_csv.is_file():
            columns = require_float_columns(
                robustness_csv, ["sigma_act", "mean_return", "mean_progress"]
            )
            levels = sorted(
                zip(columns["sigma_act"], columns["mean_return"], columns["mean_progress"])
            )
            curve.extend((condition, *level) for level in levels)

    written = [
        write_csv_atomic(output_dir / "iev_bar.csv", IEV_BAR_HEADER, bar),
        write_csv_atomic(output_dir / "iev_series.csv", IEV_SERIES_HEADER, series),
        write_csv_atomic(output_dir / "performance_box.csv", PERFORMANCE_BOX_HEADER, box),
    ]
    if curve:
        written.append(
            write_csv_atomic(output_dir / "robustness_curve.csv", ROBUSTNESS_CURVE_HEADER, curve)
        )
    return written

from collections import OrderedDict
from pathlib import Path

import numpy as np
import yaml

from evolab.es.logbook import read_generation_log
from evolab.harness.runner import GENERATION_LOG_FILE
from evolab.harness.runner import load_run
from evolab.harness.runner import replication_dir
from evolab.metrics.diagnostics import assess_variation_impact
from evolab.metrics.iev import iev_from_double_eval
from evolab.metrics.iev import IevSample
from evolab.metrics.iev import snr
from evolab.utils.csvio import write_csv_atomic
from evolab.utils.csvio import write_text_atomic
from evolab.utils.errors import FormatError
from evolab.utils.extraction import require_float_columns
from evolab.utils.logging import log_warning

IEV_REPORT_HEADER = ("replication", "generation", "iev", "snr")

PAIR_COLUMNS = ["generation", "fitness_1", "fitness_2"]


def samples_from_pairs(path: str | Path) -> tuple[list[IevSample], list[float]]:
    """
    Recomputes the IEV series from a fitness-pairs CSV.

    The file needs the columns generation, fitness_1 and fitness_2: one row per
    candidate, each evaluated twice on independent noise. Any other columns are
    ignored, so logs of other evolutionary algorithms can be analysed as well.

    Returns:
        tuple[list[IevSample], list[float]]: One sample per generation, in order of
        first appearance, and the mean pass-1 fitness of every generation.

    Raises:
        FormatError: If a column is missing or non-numeric, or a generation has
            fewer than two candidates.
    """
    columns = require_float_columns(path, PAIR_COLUMNS)
    grouped: OrderedDict[int, tuple[list[float], list[float]]] = OrderedDict()
    for generation, first, second in zip(
        columns["generation"], columns["fitness_1"], columns["fitness_2"]
    ):
        if not float(generation).is_integer():
            raise FormatError(f"{path}: generation {generation} is not an integer")
        pair = grouped.setdefault(int(generation), ([], []))
        pair[0].append(first)
        pair[1].append(second)

    samples, fitness = [], []
    for generation, (first, second) in grouped.items():
        if len(first) < 2:
            raise FormatError(f"{path}: generation {generation} has fewer than 2 candidates")
        samples.append(iev_from_double_eval(first, second, generation))
        fitness.append(float(np.mean(first)))
    return samples, fitness


def samples_from_run(run_dir: str | Path) -> list[tuple[list[IevSample], list[float]]]:
    """
    Reads the logged IEV series of every replication of a run.

    Raises:
        FormatError: If the run was not instrumented for IEV.
    """
    config = load_run(run_dir)
    series = []
    for replication in range(config.replication_count):
        logs = read_generation_log(replication_dir(run_dir, replication) / GENERATION_LOG_FILE)
        if any(log.iev is None for log in logs):
            raise FormatError(
                f"{run_dir}: replication {replication} was run without IEV instrumentation"
            )
        series.append(
            (
                [IevSample(iev=log.iev, snr=log.snr, generation=log.generation) for log in logs],
                [log.center_eval_fitness for log in logs],
            )
        )
    return series


def cmd_iev_report(
    source: str | Path,
    output: str | Path | None = None,
    window: int = 20,
    verbose: int = 0,
) -> Path:
    """
    Writes the per-generation IEV/SNR series, its mean and a variation advisory.

    Args:
        source (str | Path): A run directory, or a CSV of fitness pairs with the
            columns generation, fitness_1 and fitness_2.
        output (str | Path | None, optional): Report CSV. Defaults to
            `iev_report.csv` inside the run directory, or `<stem>_iev_report.csv`
            next to a pairs file. A `.yaml` summary is written next to it.
        window (int, optional): Generations inspected by the advisory. Defaults to 20.
        verbose (int, optional): Prints the advisory when > 0.

    Returns:
        Path: The report CSV.

    Raises:
        FormatError: On missing or non-numeric columns.
    """
    source = Path(source)
    if source.is_dir():
        series = samples_from_run(source)
        default_output = source / "iev_report.csv"
    else:
        series = [samples_from_pairs(source)]
        default_output = source.with_name(f"{source.stem}_iev_report.csv")
    output = Path(output) if output is not None else default_output

    rows = [
        (replication, sample.generation, sample.iev, sample.snr)
        for replication, (samples, _) in enumerate(series)
        for sample in samples
    ]
    write_csv_atomic(output, IEV_REPORT_HEADER, rows)

    per_replication = [float(np.mean([s.iev for s in samples])) for samples, _ in series]
    overall = float(np.mean([row[2] for row in rows]))
    advice = [
        assess_variation_impact(samples, fitness, window=window) for samples, fitness in series
    ]
    summary = {
        "source": str(source),
        "generations": len(series[0][0]),
        "mean_iev": overall,
        "mean_snr": snr(overall),
        "replication_mean_iev": per_replication,
        "advice": [
            {"replication": replication, "level": item.level.value, "message": item.message}
            for replication, item in enumerate(advice)
        ],
    }
    write_text_atomic(output.with_suffix(".yaml"), yaml.safe_dump(summary, sort_keys=False))

    for replication, item in enumerate(advice):
        log_warning(f"replication {replication}: {item.message}", verbose)
    return output

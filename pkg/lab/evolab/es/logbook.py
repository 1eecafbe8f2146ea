from dataclasses import astuple
from dataclasses import dataclass
from dataclasses import fields
from pathlib import Path
from typing import Sequence

from evolab.utils.csvio import read_csv_rows
from evolab.utils.csvio import write_csv_atomic
from evolab.utils.errors import FormatError


@dataclass(frozen=True)
class GenerationLog:
    """
    One generation of an evolution run.

    Attributes:
        generation (int): 0-based generation index.
        best_fitness (float): Highest pass-1 candidate fitness.
        mean_fitness (float): Mean pass-1 candidate fitness.
        iev (float | None): IEV between pass 1 and pass 2, when instrumented.
        snr (float | None): SNR of iev, when instrumented.
        sigma_act_effective (float): Peak action perturbation amplitude of the generation.
        center_eval_fitness (float): Fitness of the unperturbed center genotype.
    """

    generation: int
    best_fitness: float
    mean_fitness: float
    iev: float | None
    snr: float | None
    sigma_act_effective: float
    center_eval_fitness: float


GENERATION_LOG_HEADER = tuple(f.name for f in fields(GenerationLog))

FITNESS_PAIRS_HEADER = ("generation", "candidate", "fitness_1", "fitness_2")


def write_generation_log(path: str | Path, logs: Sequence[GenerationLog]) -> Path:
    return write_csv_atomic(path, GENERATION_LOG_HEADER, [astuple(log) for log in logs])


def _optional_float(value: str) -> float | None:
    return None if value == "" else float(value)


def read_generation_log(path: str | Path) -> list[GenerationLog]:
    """
    Reads a generation log written by `write_generation_log`.

    Raises:
        FormatError: If the header is not the fixed generation-log header.
    """
    header, rows = read_csv_rows(path)
    if tuple(header) != GENERATION_LOG_HEADER:
        raise FormatError(f"{path}: unexpected header {header}")
    try:
        return [
            GenerationLog(
                generation=int(row["generation"]),
                best_fitness=float(row["best_fitness"]),
                mean_fitness=float(row["mean_fitness"]),
                iev=_optional_float(row["iev"]),
                snr=_optional_float(row["snr"]),
                sigma_act_effective=float(row["sigma_act_effective"]),
                center_eval_fitness=float(row["center_eval_fitness"]),
            )
            for row in rows
        ]
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed row ({exc})") from exc


def write_fitness_pairs(path: str | Path, pairs: Sequence[tuple]) -> Path:
    """Writes (generation, candidate, fitness_1, fitness_2) rows."""
    return write_csv_atomic(path, FITNESS_PAIRS_HEADER, pairs)

import csv
from dataclasses import dataclass
from pathlib import Path

from evolab.utils.errors import FormatError


@dataclass
class ColumnContentResult:
    """
    A data class to represent the result of extracting columns from a CSV file.

    Attributes:
        content (dict[str, list[str]]): Raw cell values keyed by column name.
        found (bool): A flag indicating whether every requested column was present.
        missing (list[str]): Requested columns absent from the header.
    """

    content: dict[str, list[str]]
    found: bool
    missing: list[str]


def extract_columns(path: str | Path, columns: list[str]) -> ColumnContentResult:
    """
    Extracts the named columns of a headed CSV file.

    Args:
        path (str | Path): The CSV file to read.
        columns (list[str]): Column names to pull out.

    Returns:
        ColumnContentResult: The raw values of the columns that were found.
    """
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [name for name in columns if name not in header]
        present = [name for name in columns if name in header]
        content: dict[str, list[str]] = {name: [] for name in present}
        for row in reader:
            for name in present:
                content[name].append(row[name])

    return ColumnContentResult(content=content, found=not missing, missing=missing)


def require_float_columns(path: str | Path, columns: list[str]) -> dict[str, list[float]]:
    """
    Like `extract_columns`, but every column must exist and parse as a float.

    Raises:
        FormatError: If a column is missing, ragged or non-numeric.
    """
    result = extract_columns(path, columns)
    if not result.found:
        raise FormatError(f"{path}: missing column(s) {', '.join(result.missing)}")

    parsed: dict[str, list[float]] = {}
    for name, values in result.content.items():
        try:
            parsed[name] = [float(value) for value in values]
        except (TypeError, ValueError) as exc:
            raise FormatError(f"{path}: column {name!r} is not numeric ({exc})") from exc
    return parsed

import csv
import os
import tempfile
from pathlib import Path
from typing import Iterable
from typing import Sequence


def format_cell(value) -> str:
    """Formats one CSV cell; floats use repr so they round-trip exactly."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "item"):
        return format_cell(value.item())
    return str(value)


def write_csv_atomic(
    path: str | Path, header: Sequence[str], rows: Iterable[Sequence]
) -> Path:
    """
    Writes a headed CSV file in one shot through a temporary file and a rename.

    Args:
        path (str | Path): Destination file; parent directories are created.
        header (Sequence[str]): Column names.
        rows (Iterable[Sequence]): One sequence of cells per row, same length as header.

    Returns:
        Path: The destination path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                if len(row) != len(header):
                    raise ValueError(
                        f"{path.name}: row has {len(row)} cells, header has {len(header)}"
                    )
                writer.writerow([format_cell(cell) for cell in row])
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def write_text_atomic(path: str | Path, text: str) -> Path:
    """Writes a text file through a temporary file and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def write_bytes_atomic(path: str | Path, payload: bytes) -> Path:
    """Writes a binary file through a temporary file and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def read_csv_rows(path: str | Path) -> tuple[list[str], list[dict[str, str]]]:
    """Reads a headed CSV file into its header and a list of row dicts."""
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        rows = list(reader)
        return list(reader.fieldnames or []), rows

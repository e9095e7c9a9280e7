"""Load and write unit datasets as CSV files through pandas."""

__all__ = ["load_csv", "write_csv", "load_example"]

import re
from pathlib import Path

import numpy as np
import pandas as pd

from util.constants import EXAMPLES
from util.core import Dataset
from util.errors import DatasetParseError

_DATA_DIR = Path(__file__).resolve().parent.parent / "data"

_HEADER_PATTERN = re.compile(r"^([xy])(\d+)$")


def _check_header(header: list[str]) -> tuple[int, int]:
    """Validate `dmu,x1..xm,y1..ys` and return (m, s)."""
    seen = set()
    for j, raw in enumerate(header):
        label = raw.strip()
        if not label:
            raise DatasetParseError("Missing header", row=1, column=f"#{j + 1}")
        if label in seen:
            raise DatasetParseError("Duplicate header", row=1, column=label)
        seen.add(label)
    if header[0].strip().lower() != "dmu":
        raise DatasetParseError("First header must be 'dmu'", row=1, column=header[0].strip())

    kinds = []
    for raw in header[1:]:
        match = _HEADER_PATTERN.match(raw.strip().lower())
        if match is None:
            raise DatasetParseError("Headers after 'dmu' must read x1..xm, y1..ys", 1, raw.strip())
        kinds.append((match.group(1), int(match.group(2))))
    m = sum(1 for kind, _ in kinds if kind == "x")
    s = len(kinds) - m
    expected = [("x", i + 1) for i in range(m)] + [("y", r + 1) for r in range(s)]
    if kinds != expected:
        raise DatasetParseError("Columns must be ordered x1..xm then y1..ys", row=1)
    if m == 0 or s == 0:
        raise DatasetParseError("Need at least one x column and one y column", row=1)
    return m, s


def _read_cells(source) -> pd.DataFrame:
    try:
        return pd.read_csv(
            source, header=None, dtype=str, keep_default_na=False, skip_blank_lines=True
        )
    except pd.errors.EmptyDataError:
        raise DatasetParseError("Dataset file is empty") from None
    except pd.errors.ParserError as exc:
        line = re.search(r"line (\d+)", str(exc))
        raise DatasetParseError(
            "Ragged row: more cells than headers", row=int(line.group(1)) if line else None
        ) from None


def load_csv(path) -> Dataset:
    """
    Load a dataset from a CSV file with header `dmu,x1..xm,y1..ys` and one row per unit.

    Parameters:
        path (str | Path | file-like): Location of the CSV file, or an open text stream.

    Returns:
        Dataset: Units in file order, named by the dmu column.
    """
    if isinstance(path, (str, Path)) and not Path(path).exists():
        raise FileNotFoundError(f"Missing {Path(path).name}")
    cells = _read_cells(path)
    header = [str(v) for v in cells.iloc[0].tolist()]
    m, s = _check_header(header)
    body = cells.iloc[1:]
    if body.empty:
        raise DatasetParseError("Dataset has no units")

    values = np.zeros((len(body), m + s))
    names = []
    for k, (_, row) in enumerate(body.iterrows()):
        line = k + 2
        if row.isna().any():
            raise DatasetParseError("Ragged row: fewer cells than headers", row=line)
        name = row.iloc[0].strip()
        if not name:
            raise DatasetParseError("Missing unit name", row=line, column="dmu")
        names.append(name)
        for j in range(m + s):
            cell = row.iloc[j + 1].strip()
            try:
                values[k, j] = float(cell)
            except ValueError:
                raise DatasetParseError(
                    f"Non-numeric value '{cell}'", row=line, column=header[j + 1].strip()
                ) from None
            if not np.isfinite(values[k, j]):
                raise DatasetParseError(
                    f"Non-finite value '{cell}'", row=line, column=header[j + 1].strip()
                )
    return Dataset(X=values[:, :m].T, Y=values[:, m:].T, names=tuple(names))


def write_csv(ds: Dataset, path=None) -> str | None:
    """
    Write a dataset in the format read by load_csv. Returns the CSV text when path is None.
    Floats are written with their shortest round-trip representation.
    """
    frame = pd.DataFrame({"dmu": list(ds.names)})
    for i in range(ds.m):
        frame[f"x{i + 1}"] = ds.X[i]
    for r in range(ds.s):
        frame[f"y{r + 1}"] = ds.Y[r]
    return frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")


def load_example(name: str) -> Dataset:
    """Load one of the bundled datasets ("4.1" or "4.2")."""
    if name not in EXAMPLES:
        raise ValueError(f"Unknown example '{name}'. Choose from {', '.join(EXAMPLES)}.")
    return load_csv(_DATA_DIR / EXAMPLES[name])

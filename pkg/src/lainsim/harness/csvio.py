"""Deterministic CSV writing: stable column order, 9-significant-digit floats."""

from __future__ import annotations

import csv
import math
from pathlib import Path


def format_value(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".9g")
    return str(value)


def write_csv(path, header: list[str], rows: list[tuple]) -> Path:
    """Write rows with a fixed header; floats get 9 significant digits.

    Rows are written in the order given; scenario code is responsible
    for sweep-major, seed-minor ordering so reruns are byte-identical.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    width = len(header)
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                if len(row) != width:
                    raise ValueError(f"row width {len(row)} != header width {width}")
                writer.writerow([format_value(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc
    return path


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows:
        return [], []
    return rows[0], rows[1:]

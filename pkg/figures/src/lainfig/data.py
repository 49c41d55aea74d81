"""CSV loading and the aggregations each plot family puts on canvas.

Aggregation is deliberately transparent: medians for detection bars
(undetected runs count as +inf), plain means elsewhere, and raw series
for curve families.  Whatever number lands on the canvas is exactly
what these functions return, so tests can recompute them from the CSV.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np


class MissingColumns(ValueError):
    def __init__(self, missing, path):
        self.missing = sorted(missing)
        super().__init__(f"{path} lacks required columns: {', '.join(self.missing)}")


def load_table(path) -> dict[str, list[str]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows:
        return {}
    header, data = rows[0], rows[1:]
    return {name: [row[i] for row in data] for i, name in enumerate(header)}


def require(table: dict, columns, path) -> None:
    missing = [c for c in columns if c not in table]
    if missing:
        raise MissingColumns(missing, path)


def floats(table: dict, column: str) -> np.ndarray:
    return np.array([float(v) for v in table[column]])


def detection_values(table: dict) -> np.ndarray:
    """Detection slots with the undetected sentinel mapped to +inf."""
    raw = floats(table, "detection_slots")
    return np.where(raw < 0, np.inf, raw)


def grouped_median(table: dict, group_cols: list[str], value) -> dict[tuple, float]:
    """Median of `value` per distinct key; insertion-ordered by first sight."""
    out: dict[tuple, list[float]] = {}
    n = len(next(iter(table.values()))) if table else 0
    vals = value if isinstance(value, np.ndarray) else floats(table, value)
    for i in range(n):
        key = tuple(table[c][i] for c in group_cols)
        out.setdefault(key, []).append(float(vals[i]))
    return {k: float(np.median(v)) for k, v in out.items()}


def grouped_mean(table: dict, group_cols: list[str], value_col: str) -> dict[tuple, float]:
    out: dict[tuple, list[float]] = {}
    n = len(next(iter(table.values()))) if table else 0
    vals = floats(table, value_col)
    for i in range(n):
        key = tuple(table[c][i] for c in group_cols)
        v = float(vals[i])
        if not math.isnan(v):
            out.setdefault(key, []).append(v)
    return {k: float(np.mean(v)) for k, v in out.items()}


def series_by_group(table: dict, group_cols: list[str], x_col: str,
                    y_col: str) -> dict[tuple, tuple[np.ndarray, np.ndarray]]:
    """Raw (x, y) series per group, in CSV row order."""
    out: dict[tuple, tuple[list, list]] = {}
    n = len(next(iter(table.values()))) if table else 0
    xs = floats(table, x_col)
    ys = floats(table, y_col)
    for i in range(n):
        key = tuple(table[c][i] for c in group_cols)
        bucket = out.setdefault(key, ([], []))
        bucket[0].append(xs[i])
        bucket[1].append(ys[i])
    return {k: (np.array(x), np.array(y)) for k, (x, y) in out.items()}


def moving_average(y: np.ndarray, window: int) -> np.ndarray:
    """Trailing moving average with a warmup that averages what exists."""
    if window <= 1:
        return y.copy()
    out = np.empty_like(y, dtype=float)
    acc = 0.0
    for i, v in enumerate(y):
        acc += v
        if i >= window:
            acc -= y[i - window]
        out[i] = acc / min(i + 1, window)
    return out

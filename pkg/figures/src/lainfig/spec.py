"""Plot specifications: which CSV, which family, where the image goes."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import yaml

FAMILIES = (
    "detection_bars",
    "threshold_lines",
    "convergence_curves",
    "loss_curves",
    "sigma_sensitivity",
    "delay_bars",
    "tsr_bars",
    "scale_sweep",
)


@dataclass
class PlotSpec:
    family: str
    input_csv: str
    output_image: str
    smoothing_window: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown plot family {self.family!r}; known: {FAMILIES}")
        if self.smoothing_window < 1:
            raise ValueError("smoothing window must be >= 1")


def load_spec(path) -> PlotSpec:
    raw = yaml.safe_load(Path(path).read_text())
    if not isinstance(raw, dict):
        raise ValueError("plot spec must be a mapping")
    known = {"family", "input_csv", "output_image", "smoothing_window"}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown plot spec keys: {sorted(unknown)}")
    return PlotSpec(**raw)

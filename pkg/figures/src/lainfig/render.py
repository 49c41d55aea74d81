"""Deterministic figure rendering from plot specs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .data import load_table  # noqa: E402
from .families import RENDERERS  # noqa: E402
from .spec import FAMILIES, PlotSpec  # noqa: E402

FIGSIZE = {"sigma_sensitivity": (9.0, 3.6), "scale_sweep": (9.0, 3.6)}
DPI = 120


def render(spec: PlotSpec) -> dict:
    """Draw one figure; returns the exact values placed on the canvas."""
    table = load_table(spec.input_csv)
    fig = plt.figure(figsize=FIGSIZE.get(spec.family, (6.4, 4.2)), dpi=DPI)
    try:
        drawn = RENDERERS[spec.family](fig, table, spec, spec.input_csv)
        fig.suptitle(spec.family.replace("_", " "), fontsize=10)
        fig.tight_layout()
        out = Path(spec.output_image)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out)
    finally:
        plt.close(fig)
    return drawn


# Which scenario CSV feeds which families, for `render --all`.
DEFAULT_SOURCES = {
    "detection_bars": "trust_detection.csv",
    "threshold_lines": "trust_threshold.csv",
    "convergence_curves": "training_convergence.csv",
    "loss_curves": "training_convergence.csv",
    "sigma_sensitivity": "sigma_sensitivity.csv",
    "delay_bars": "algo_comparison.csv",
    "tsr_bars": "algo_comparison.csv",
    "scale_sweep": "scale_sweep.csv",
}


def render_all(results_dir, output_dir=None, smoothing_window: int = 25) -> list[str]:
    """Render every family whose source CSV exists under results_dir."""
    results = Path(results_dir)
    out_dir = Path(output_dir) if output_dir else results
    rendered = []
    for family in FAMILIES:
        source = results / DEFAULT_SOURCES[family]
        if not source.exists():
            continue
        window = smoothing_window if family in ("convergence_curves", "loss_curves") else 1
        spec = PlotSpec(family=family, input_csv=str(source),
                        output_image=str(out_dir / f"{family}.png"),
                        smoothing_window=window)
        render(spec)
        rendered.append(spec.output_image)
    return rendered

"""One renderer per plot family.

Every renderer takes (axes-or-figure, table, spec) and returns a
mapping from series label to the exact values drawn, which the tests
compare against independent recomputation from the CSV.
"""

from __future__ import annotations

import numpy as np

from .data import (detection_values, floats, grouped_mean, grouped_median,
                   moving_average, require, series_by_group)

_FINITE_CAP_NOTE = "undetected runs drawn at the horizon cap"


def _sorted_unique(values) -> list:
    return sorted(set(values))


def _annotate_empty(ax, message="no data in CSV"):
    ax.text(0.5, 0.5, message, ha="center", va="center",
            transform=ax.transAxes, color="tab:red")


def detection_bars(fig, table, spec, path):
    ax = fig.subplots()
    if not table:
        _annotate_empty(ax)
        return {}
    require(table, ["scheme", "p1", "p2", "p3", "detection_slots"], path)
    med = grouped_median(table, ["p1", "p2", "p3", "scheme"], detection_values(table))
    triples = _sorted_unique(zip(table["p1"], table["p2"], table["p3"]))
    schemes = _sorted_unique(table["scheme"])
    width = 0.8 / max(1, len(schemes))
    drawn = {}
    x = np.arange(len(triples))
    finite = [v for v in med.values() if np.isfinite(v)]
    cap = (max(finite) * 1.2 + 1) if finite else 1.0
    for j, scheme in enumerate(schemes):
        heights = [med.get((*t, scheme), np.nan) for t in triples]
        capped = [min(h, cap) if np.isfinite(h) else cap for h in heights]
        ax.bar(x + j * width, capped, width=width, label=scheme)
        drawn[scheme] = heights
    ax.set_xticks(x + width * (len(schemes) - 1) / 2)
    ax.set_xticklabels([f"({a},{b},{c})" for a, b, c in triples], rotation=30,
                       ha="right", fontsize=7)
    ax.set_xlabel("malicious behavior probabilities (p1, p2, p3)")
    ax.set_ylabel("median slots to flag all malicious UAVs")
    ax.legend()
    return drawn


def threshold_lines(fig, table, spec, path):
    ax = fig.subplots()
    if not table:
        _annotate_empty(ax)
        return {}
    require(table, ["scheme", "thr", "detection_slots"], path)
    med = grouped_median(table, ["thr", "scheme"], detection_values(table))
    thresholds = _sorted_unique(table["thr"])
    schemes = _sorted_unique(table["scheme"])
    drawn = {}
    for scheme in schemes:
        ys = [med.get((t, scheme), np.nan) for t in thresholds]
        ax.plot([float(t) for t in thresholds], ys, marker="o", label=scheme)
        drawn[scheme] = ys
    ax.set_xlabel("trust threshold")
    ax.set_ylabel("median slots to flag all malicious UAVs")
    ax.legend()
    return drawn


def _curves(fig, table, spec, path, y_col, y_label):
    ax = fig.subplots()
    if not table:
        _annotate_empty(ax)
        return {}
    require(table, ["algorithm", "learning_rate", "n_demands", "seed",
                    "episode", y_col], path)
    series = series_by_group(table, ["algorithm", "learning_rate", "n_demands",
                                     "seed"], "episode", y_col)
    drawn = {}
    for key in sorted(series):
        x, y = series[key]
        label = f"{key[0]} lr={key[1]} demands={key[2]} seed={key[3]}"
        ax.plot(x, y, alpha=0.35, linewidth=0.8, label=f"{label} (raw)")
        if spec.smoothing_window > 1:
            ax.plot(x, moving_average(y, spec.smoothing_window), linewidth=1.6,
                    label=f"{label} (ma{spec.smoothing_window})")
        drawn[label] = y
    ax.set_xlabel("episode")
    ax.set_ylabel(y_label)
    if len(drawn) <= 12:
        ax.legend(fontsize=6)
    return drawn


def convergence_curves(fig, table, spec, path):
    return _curves(fig, table, spec, path, "reward_sum", "episode reward")


def loss_curves(fig, table, spec, path):
    return _curves(fig, table, spec, path, "mean_loss", "mean training loss")


def sigma_sensitivity(fig, table, spec, path):
    axes = fig.subplots(1, 2)
    if not table:
        for ax in axes:
            _annotate_empty(ax)
        return {}
    require(table, ["varsigma", "n_uavs", "reward_sum", "mean_e2e_s"], path)
    drawn = {}
    for ax, col, label in ((axes[0], "reward_sum", "mean evaluation reward"),
                           (axes[1], "mean_e2e_s", "mean E2E delay (s)")):
        mean = grouped_mean(table, ["n_uavs", "varsigma"], col)
        sigmas = sorted(_sorted_unique(table["varsigma"]), key=float)
        for nu in _sorted_unique(table["n_uavs"]):
            ys = [mean.get((nu, s), np.nan) for s in sigmas]
            ax.plot([float(s) for s in sigmas], ys, marker="s", label=f"{nu} UAVs")
            drawn[f"{col}/{nu}"] = ys
        ax.set_xlabel("reward balance constant")
        ax.set_ylabel(label)
        ax.legend(fontsize=7)
    return drawn


def _algorithm_bars(fig, table, spec, path, y_col, y_label):
    ax = fig.subplots()
    if not table:
        _annotate_empty(ax)
        return {}
    require(table, ["algorithm", "n_demands", y_col], path)
    mean = grouped_mean(table, ["algorithm", "n_demands"], y_col)
    demands = sorted(_sorted_unique(table["n_demands"]), key=float)
    algorithms = _sorted_unique(table["algorithm"])
    width = 0.8 / max(1, len(algorithms))
    x = np.arange(len(demands))
    drawn = {}
    for j, algo in enumerate(algorithms):
        ys = [mean.get((algo, d), np.nan) for d in demands]
        ax.bar(x + j * width, ys, width=width, label=algo)
        drawn[algo] = ys
    ax.set_xticks(x + width * (len(algorithms) - 1) / 2)
    ax.set_xticklabels(demands)
    ax.set_xlabel("number of demands")
    ax.set_ylabel(y_label)
    ax.legend(fontsize=7)
    return drawn


def delay_bars(fig, table, spec, path):
    return _algorithm_bars(fig, table, spec, path, "mean_e2e_s", "mean E2E delay (s)")


def tsr_bars(fig, table, spec, path):
    return _algorithm_bars(fig, table, spec, path, "tsr", "transmission success ratio")


def scale_sweep(fig, table, spec, path):
    axes = fig.subplots(1, 2)
    if not table:
        for ax in axes:
            _annotate_empty(ax)
        return {}
    require(table, ["n_uavs", "n_demands", "n_malicious", "tsr", "mean_e2e_s"], path)
    drawn = {}
    mean_delay = grouped_mean(table, ["n_uavs", "n_demands"], "mean_e2e_s")
    demands = sorted(_sorted_unique(table["n_demands"]), key=float)
    for nu in _sorted_unique(table["n_uavs"]):
        ys = [mean_delay.get((nu, d), np.nan) for d in demands]
        axes[0].plot([float(d) for d in demands], ys, marker="o", label=f"{nu} UAVs")
        drawn[f"delay/{nu}"] = ys
    axes[0].set_xlabel("number of demands")
    axes[0].set_ylabel("mean E2E delay (s)")
    axes[0].legend(fontsize=7)

    mean_tsr = grouped_mean(table, ["n_uavs", "n_malicious"], "tsr")
    malicious = sorted(_sorted_unique(table["n_malicious"]), key=float)
    for nu in _sorted_unique(table["n_uavs"]):
        ys = [mean_tsr.get((nu, m), np.nan) for m in malicious]
        axes[1].plot([float(m) for m in malicious], ys, marker="o", label=f"{nu} UAVs")
        drawn[f"tsr/{nu}"] = ys
    axes[1].set_xlabel("number of malicious UAVs")
    axes[1].set_ylabel("mean TSR")
    axes[1].legend(fontsize=7)
    return drawn


RENDERERS = {
    "detection_bars": detection_bars,
    "threshold_lines": threshold_lines,
    "convergence_curves": convergence_curves,
    "loss_curves": loss_curves,
    "sigma_sensitivity": sigma_sensitivity,
    "delay_bars": delay_bars,
    "tsr_bars": tsr_bars,
    "scale_sweep": scale_sweep,
}

"""Figure rendering for traces, sweeps, and summary tables.

Figures are side outputs next to the delimited files; the CSVs stay the
canonical record. Long traces are decimated for drawing only.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

MAX_DRAWN_POINTS = 200000


def render_trace(trace, peaks, path) -> None:
    fig, ax = plt.subplots(figsize=(8.0, 4.0))
    step = max(1, len(trace.tau) // MAX_DRAWN_POINTS)
    ax.plot(trace.tau[::step], trace.p[::step], lw=0.7, color="tab:blue")
    if peaks:
        ax.plot(
            [pk.time for pk in peaks],
            [pk.probability for pk in peaks],
            linestyle="none", marker=".", color="tab:red", ms=6,
        )
    ax.set_xlabel("tau")
    ax.set_ylabel("P(tau)")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(trace.description)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def render_optimization(result, path) -> None:
    fig, (ax_t, ax_p) = plt.subplots(2, 1, figsize=(8.0, 6.0), sharex=True)
    ok = ~np.isnan(result.times)
    label = "delta" if result.scheme == "webm" else "omega"
    ax_t.plot(result.params[ok], result.times[ok], lw=0.8, color="tab:blue")
    ax_t.set_ylabel("transfer time")
    ax_p.plot(result.params[ok], result.probs[ok], lw=0.8, color="tab:green")
    ax_p.set_ylabel("peak probability")
    ax_p.set_xlabel(label)
    if result.best_index is not None:
        ax_t.plot([result.best_param], [result.best_time], "r*", ms=12)
        ax_p.plot([result.best_param], [result.best_probability], "r*", ms=12)
    ax_t.set_title(
        f"{result.scheme}/{result.model}/{result.coupling_range} n={result.n_nodes} "
        f"threshold={result.threshold:g}"
    )
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def render_table_summary(tables, path) -> None:
    names = sorted(tables)
    fig, axes = plt.subplots(2, 2, figsize=(10.0, 6.0))
    for name, ax in zip(names, axes.ravel()):
        spec = tables[name]
        ax.axis("off")
        cells = [[f"{v:.4g}" for v in row] for row in spec["values"]]
        tab = ax.table(
            cellText=cells,
            rowLabels=list(spec["rows"]),
            colLabels=list(spec["cols"]),
            loc="center",
        )
        tab.scale(1.0, 1.4)
        ax.set_title(spec["caption"], fontsize=10)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)

"""Summary figures rendered from measurement records.

Each figure shows the per-method mean of one quantity as a function of
alpha, averaged over all pairs in the record set.  Written alongside the
CSV output of a batch run.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .experiments import QUANTITIES
from .morphs import METHODS

_COLORS = {"dilation": "#4c72b0", "voronoi": "#55a868", "mixed": "#c44e52"}
_LABELS = {
    "area_ratio": "area / ideal area",
    "perimeter_ratio": "perimeter / ideal perimeter",
    "components": "components",
    "holes": "holes",
}


def _mean_curves(records, quantity):
    curves = {}
    for method in METHODS:
        buckets: dict[float, list[float]] = {}
        for rec in records:
            if rec.method == method:
                buckets.setdefault(rec.alpha, []).append(float(getattr(rec, quantity)))
        if buckets:
            alphas = sorted(buckets)
            curves[method] = (alphas, [sum(buckets[a]) / len(buckets[a]) for a in alphas])
    return curves


def write_report_figures(records, out_dir) -> list[Path]:
    """One PNG per quantity; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for quantity in QUANTITIES:
        curves = _mean_curves(records, quantity)
        if not curves:
            continue
        fig, ax = plt.subplots(figsize=(5.0, 3.4))
        for method, (alphas, means) in curves.items():
            ax.plot(alphas, means, marker="o", markersize=3,
                    color=_COLORS[method], label=method)
        ax.set_xlabel("alpha")
        ax.set_ylabel(_LABELS[quantity])
        ax.legend(fontsize=8)
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        path = out_dir / f"{quantity}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written

"""Figures written next to the CSV reports."""

from __future__ import annotations

import math
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_RC = {
    "axes.labelsize": 10,
    "font.size": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def figsize(scale=1.0, width_in=6.0):
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    return (width_in * scale, width_in * scale * golden)


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def accuracy_vs_level(results, path, title=None):
    """Median accuracy over seeds against the uncertainty level, one line per model."""
    table = defaultdict(lambda: defaultdict(list))
    for r in results:
        table[r.model][r.c].append(r.accuracy)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=figsize())
        for model in sorted(table):
            levels = sorted(table[model])
            ax.plot(
                levels,
                [np.median(table[model][c]) for c in levels],
                marker="o",
                label=model,
            )
        ax.set_xlabel("uncertainty level c")
        ax.set_ylabel("median accuracy")
        ax.set_ylim(0, 1.02)
        if title:
            ax.set_title(title)
        ax.legend(loc="best")
        return _save(fig, path)


def training_time(results, path):
    """Mean training time per model."""
    table = defaultdict(list)
    for r in results:
        table[r.model].append(r.train_seconds)
    models = sorted(table)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=figsize(0.8))
        ax.bar(range(len(models)), [np.mean(table[m]) for m in models], color="0.4")
        ax.set_xticks(range(len(models)))
        ax.set_xticklabels(models, rotation=30, ha="right")
        ax.set_ylabel("training time (s)")
        return _save(fig, path)


def uncertain_series(dataset, index, path, original=None):
    """One uncertain series with its deviation bars, optionally over the clean series."""
    best = dataset.best[index]
    delta = dataset.delta[index]
    t = np.arange(best.size)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=figsize())
        ax.errorbar(t, best, yerr=delta, color="C0", ecolor="C3", elinewidth=0.8, capsize=2, label="uncertain")
        if original is not None:
            ax.plot(t, original, color="C1", label="original")
        ax.set_xlabel("timestep")
        ax.set_title(f"{dataset.name} #{index} (label {dataset.labels[index]})")
        ax.legend(loc="best")
        return _save(fig, path)


def shapelets(dataset, found, path, limit=5):
    """Highlight the top shapelets on their source series."""
    found = list(found)[:limit]
    with plt.rc_context(_RC):
        fig, axes = plt.subplots(len(found), 1, figsize=(6, 1.6 * len(found) + 0.4), squeeze=False)
        for ax, s in zip(axes[:, 0], found):
            src = dataset.best[s.source_index]
            ax.plot(src, color="0.6", lw=1)
            span = np.arange(s.offset, s.offset + s.length)
            ax.errorbar(span, s.values.best, yerr=s.values.delta, color="C3", lw=2.5, capsize=2)
            ax.set_ylabel(f"IG {s.quality:.3f}")
            ax.set_title(
                f"series {s.source_index}, offset {s.offset}, length {s.length}", fontsize=8
            )
        axes[-1, 0].set_xlabel("timestep")
        return _save(fig, path)

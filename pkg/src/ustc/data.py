"""Dataset files, uncertainty injection and synthetic datasets.

Input files follow the UCR archive TSV layout: one series per line, the
class label first, then the observations, tab separated.

Uncertain datasets are written as tab-separated lines of a label followed
by ``best:delta`` pairs. Floats are written with ``repr`` so reading a file
back gives the exact same values.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .uncertain import UncertainDataset


class DataFormatError(ValueError):
    """Malformed dataset file."""


@dataclass(frozen=True)
class RawDataset:
    series: np.ndarray  # (n, m)
    labels: np.ndarray  # (n,) of str
    name: str = ""

    def __post_init__(self):
        series = np.asarray(self.series, dtype=float)
        if series.ndim != 2 or series.shape[0] < 1 or series.shape[1] < 1:
            raise ValueError(f"expected a non-empty (n, m) array, got shape {series.shape}")
        labels = np.asarray(self.labels).astype(str)
        if labels.shape != (series.shape[0],):
            raise ValueError(f"{series.shape[0]} series but {labels.size} labels")
        if any(not lab for lab in labels):
            raise ValueError("labels must be non-empty strings")
        object.__setattr__(self, "series", series)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self):
        return self.series.shape[0]

    @property
    def m(self):
        return self.series.shape[1]


def _dataset_name(path):
    base = os.path.basename(str(path))
    for suffix in ("_TRAIN", "_TEST"):
        stem = os.path.splitext(base)[0]
        if stem.upper().endswith(suffix):
            return stem[: -len(suffix)]
    return os.path.splitext(base)[0]


def load_ucr_tsv(path, name=None) -> RawDataset:
    """Read a UCR-style TSV file."""
    labels, rows = [], []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split("\t")
            if width is None:
                width = len(fields)
                if width < 2:
                    raise DataFormatError(f"{path}:{lineno}: need a label and at least one value")
            elif len(fields) != width:
                raise DataFormatError(
                    f"{path}:{lineno}: ragged row, {len(fields)} fields where earlier rows have {width}"
                )
            row = []
            for col, text in enumerate(fields[1:], start=2):
                try:
                    row.append(float(text))
                except ValueError:
                    raise DataFormatError(
                        f"{path}:{lineno}: column {col}: non-numeric value {text!r}"
                    ) from None
            labels.append(fields[0].strip())
            rows.append(row)
    if not rows:
        raise DataFormatError(f"{path}: empty file")
    return RawDataset(np.array(rows), np.array(labels), name or _dataset_name(path))


def save_ucr_tsv(dataset: RawDataset, path):
    with open(path, "w") as fh:
        for label, row in zip(dataset.labels, dataset.series):
            fh.write("\t".join([str(label)] + [repr(float(v)) for v in row]) + "\n")


def write_uncertain_tsv(dataset: UncertainDataset, path):
    with open(path, "w") as fh:
        for label, b, d in zip(dataset.labels, dataset.best, dataset.delta):
            pairs = (f"{float(x)!r}:{float(e)!r}" for x, e in zip(b, d))
            fh.write("\t".join([str(label), *pairs]) + "\n")


def read_uncertain_tsv(path, name=None) -> UncertainDataset:
    labels, best, delta = [], [], []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split("\t")
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise DataFormatError(
                    f"{path}:{lineno}: ragged row, {len(fields)} fields where earlier rows have {width}"
                )
            b_row, d_row = [], []
            for col, text in enumerate(fields[1:], start=2):
                try:
                    b, d = text.split(":")
                    b_row.append(float(b))
                    d_row.append(float(d))
                except ValueError:
                    raise DataFormatError(
                        f"{path}:{lineno}: column {col}: expected best:delta, got {text!r}"
                    ) from None
            labels.append(fields[0])
            best.append(b_row)
            delta.append(d_row)
    if not labels:
        raise DataFormatError(f"{path}: empty file")
    return UncertainDataset(best, delta, labels, name or _dataset_name(path))


def inject_uncertainty(dataset: RawDataset, c: float, seed: int) -> UncertainDataset:
    """Add synthetic uncertainty at level ``c``.

    For each timestep ``i`` let ``sigma_i`` be the population standard
    deviation of that column. Each observation gets a scale
    ``s = c * |N(0, sigma_i)|`` and noise ``e ~ N(0, s)``; the uncertain
    value is ``(x + e) ± s``. The two draws per observation come from a
    ``numpy`` generator seeded with ``seed``, in row-major order.
    """
    if not np.isfinite(c) or c < 0:
        raise ValueError(f"uncertainty level must be finite and >= 0, got {c}")
    x = dataset.series
    sigma_i = x.std(axis=0)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(x.shape + (2,))
    scale = c * np.abs(sigma_i * z[..., 0])
    noise = scale * z[..., 1]
    return UncertainDataset(x + noise, scale, dataset.labels, dataset.name)


# -- synthetic data ----------------------------------------------------------


def planted_pattern(n_per_class=10, m=30, pattern=(0.0, 5.0, 0.0), noise=1.0, seed=0, name="planted"):
    """Two classes of Gaussian noise; class ``"A"`` carries ``pattern`` at a random offset."""
    rng = np.random.default_rng(seed)
    pattern = np.asarray(pattern, dtype=float)
    x = rng.normal(0.0, noise, size=(2 * n_per_class, m))
    for r in range(n_per_class):
        at = rng.integers(0, m - pattern.size + 1)
        x[r, at : at + pattern.size] = pattern
    labels = np.array(["A"] * n_per_class + ["B"] * n_per_class)
    return RawDataset(x, labels, name)


def smooth_subspace_like(n_per_class=50, m=15, width=5, seed=0, name="SmoothSubspaceLike"):
    """Three-class data where each class is smooth on its own block of timesteps.

    Outside its block a series is i.i.d. uniform noise on ``[0, 1]``; inside,
    class ``j`` (blocks ``[j * width, (j + 1) * width)``) follows a slow
    random walk started uniformly on ``[0, 1]``. This imitates the shape of
    the UCR SmoothSubspace problem; it is not that dataset.
    """
    rng = np.random.default_rng(seed)
    n_classes = 3
    if n_classes * width > m:
        raise ValueError(f"{n_classes} blocks of width {width} do not fit in length {m}")
    rows, labels = [], []
    for j in range(n_classes):
        for _ in range(n_per_class):
            row = rng.uniform(0.0, 1.0, size=m)
            walk = rng.uniform(0.0, 1.0) + np.cumsum(rng.normal(0.0, 0.05, size=width))
            row[j * width : (j + 1) * width] = walk
            rows.append(row)
            labels.append(str(j + 1))
    return RawDataset(np.array(rows), np.array(labels), name)


def shuffled(dataset: RawDataset, seed=0) -> RawDataset:
    order = np.random.default_rng(seed).permutation(dataset.n)
    return RawDataset(dataset.series[order], dataset.labels[order], dataset.name)

"""PDF-model uncertain values, series and datasets.

An uncertain observation is stored as a best guess plus a non-negative
maximum deviation (``best ± delta``). Series and datasets keep the two
channels as separate read-only float arrays so the distance code can stay
vectorized; indexing a series gives back :class:`UncertainValue` objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class UncertainValue:
    """An uncertain scalar ``best ± delta``."""

    best: float
    delta: float = 0.0

    def __post_init__(self):
        best = float(self.best)
        delta = float(self.delta)
        if not (math.isfinite(best) and math.isfinite(delta)):
            raise ValueError(f"uncertain value must be finite, got {best} ± {delta}")
        if delta < 0:
            raise ValueError(f"delta must be non-negative, got {delta}")
        object.__setattr__(self, "best", best)
        object.__setattr__(self, "delta", delta)

    def __add__(self, other):
        return uadd(self, other)

    def __sub__(self, other):
        return usub(self, other)

    def __pow__(self, n):
        return upow(self, n)

    def __repr__(self):
        return f"UncertainValue({self.best!r} ± {self.delta!r})"

    @property
    def lower(self) -> float:
        return self.best - self.delta

    @property
    def upper(self) -> float:
        return self.best + self.delta


def uadd(x: UncertainValue, y: UncertainValue) -> UncertainValue:
    """Sum of two uncertain values; deviations add."""
    return UncertainValue(x.best + y.best, x.delta + y.delta)


def usub(x: UncertainValue, y: UncertainValue) -> UncertainValue:
    """Difference of two uncertain values.

    Deviations still add, so ``x - x`` is ``0 ± 2 delta``, not ``0 ± 0``.
    """
    return UncertainValue(x.best - y.best, x.delta + y.delta)


def upow(x: UncertainValue, n: int) -> UncertainValue:
    """Integer power of an uncertain value.

    The propagated deviation is usually written ``|n (delta/best) best**n|``,
    which is undefined at ``best == 0``. We use the equivalent
    ``|n best**(n-1)| delta`` which is total for ``n >= 1``.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"power must be an integer >= 1, got {n}")
    n = int(n)
    return UncertainValue(x.best**n, abs(n * x.best ** (n - 1)) * x.delta)


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


class UncertainSeries:
    """A fixed-length sequence of uncertain observations."""

    __slots__ = ("best", "delta")

    def __init__(self, best, delta=None):
        best = _readonly(best)
        if best.ndim != 1 or best.size < 1:
            raise ValueError("an uncertain series needs a 1-d array of length >= 1")
        delta = _readonly(np.zeros_like(best) if delta is None else delta)
        if delta.shape != best.shape:
            raise ValueError(f"best/delta shape mismatch: {best.shape} vs {delta.shape}")
        _check_channels(best, delta)
        object.__setattr__(self, "best", best)
        object.__setattr__(self, "delta", delta)

    def __setattr__(self, name, value):
        raise AttributeError("UncertainSeries is immutable")

    @classmethod
    def from_values(cls, values: Iterable[UncertainValue]) -> "UncertainSeries":
        values = list(values)
        return cls([v.best for v in values], [v.delta for v in values])

    def __len__(self):
        return self.best.size

    def __getitem__(self, i):
        if isinstance(i, slice):
            return UncertainSeries(self.best[i], self.delta[i])
        return UncertainValue(self.best[i], self.delta[i])

    def __iter__(self):
        for b, d in zip(self.best, self.delta):
            yield UncertainValue(b, d)

    def __eq__(self, other):
        if not isinstance(other, UncertainSeries):
            return NotImplemented
        return np.array_equal(self.best, other.best) and np.array_equal(
            self.delta, other.delta
        )

    def __hash__(self):
        return hash((self.best.tobytes(), self.delta.tobytes()))

    def __repr__(self):
        return f"UncertainSeries(m={len(self)})"


class UncertainDataset:
    """Labelled collection of equal-length uncertain series.

    Parameters
    ----------
    best, delta : array-like, shape (n, m)
        Best guesses and deviations.
    labels : sequence, length n
        Class identifiers, kept as given (usually strings).
    name : str
        Dataset name used in reports.
    """

    def __init__(self, best, delta, labels: Sequence, name: str = ""):
        best = _readonly(best)
        delta = _readonly(delta)
        if best.ndim != 2 or best.shape[0] < 1 or best.shape[1] < 1:
            raise ValueError(f"expected a non-empty (n, m) array, got shape {best.shape}")
        if delta.shape != best.shape:
            raise ValueError(f"best/delta shape mismatch: {best.shape} vs {delta.shape}")
        _check_channels(best, delta)
        labels = np.array(labels)
        if labels.shape != (best.shape[0],):
            raise ValueError(
                f"{best.shape[0]} series but {labels.size} labels"
            )
        labels.setflags(write=False)
        self.best = best
        self.delta = delta
        self.labels = labels
        self.name = name

    @classmethod
    def from_series(cls, series: Sequence[UncertainSeries], labels, name=""):
        if not series:
            raise ValueError("dataset needs at least one series")
        lengths = {len(s) for s in series}
        if len(lengths) != 1:
            raise ValueError(f"series lengths differ: {sorted(lengths)}")
        return cls(
            np.stack([s.best for s in series]),
            np.stack([s.delta for s in series]),
            labels,
            name,
        )

    @classmethod
    def certain(cls, values, labels, name=""):
        """Dataset with zero uncertainty everywhere."""
        values = np.asarray(values, dtype=float)
        return cls(values, np.zeros_like(values), labels, name)

    @property
    def n(self) -> int:
        return self.best.shape[0]

    @property
    def m(self) -> int:
        return self.best.shape[1]

    @property
    def classes(self) -> np.ndarray:
        return np.unique(self.labels)

    def __len__(self):
        return self.n

    def __getitem__(self, i) -> UncertainSeries:
        return UncertainSeries(self.best[i], self.delta[i])

    def __iter__(self):
        for i in range(self.n):
            yield self[i]

    def require_classes(self, at_least=2):
        k = len(self.classes)
        if k < at_least:
            raise ValueError(
                f"dataset {self.name or '<unnamed>'} has {k} distinct label(s); "
                f"need at least {at_least}"
            )

    def __repr__(self):
        return f"UncertainDataset(name={self.name!r}, n={self.n}, m={self.m})"


def _check_channels(best, delta):
    if not (np.all(np.isfinite(best)) and np.all(np.isfinite(delta))):
        raise ValueError("best and delta must be finite")
    if np.any(delta < 0):
        raise ValueError("delta must be non-negative")

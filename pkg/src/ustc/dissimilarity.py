"""Distances between uncertain series.

``ued`` propagates uncertainty through the squared Euclidean distance::

    best  = sum (a_i - b_i)^2
    delta = 2 * sum |a_i - b_i| * (da_i + db_i)

It is kept squared (no root); every downstream use is order based.
DUST (uniform and normal flavours) and plain squared ED are the baselines;
they return certain values.
"""

from __future__ import annotations

import enum

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import ordering as _ord
from .ordering import OrderingStrategy
from .uncertain import UncertainSeries, UncertainValue


class DustFlavor(str, enum.Enum):
    UNIFORM = "uniform"
    NORMAL = "normal"


class Measure(str, enum.Enum):
    ED = "ed"
    UED = "ued"
    DUST_UNIFORM = "dust-uniform"
    DUST_NORMAL = "dust-normal"

    @property
    def uncertain(self) -> bool:
        """Whether the measure outputs uncertain values."""
        return self is Measure.UED

    @property
    def dust_flavor(self):
        return {
            Measure.DUST_UNIFORM: DustFlavor.UNIFORM,
            Measure.DUST_NORMAL: DustFlavor.NORMAL,
        }.get(self)


def _same_length(a, b):
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")


def ued(a: UncertainSeries, b: UncertainSeries) -> UncertainValue:
    _same_length(a, b)
    best, delta = _ued_terms(a.best, a.delta, b.best, b.delta)
    return UncertainValue(best, delta)


def ed_sq(a, b) -> float:
    """Squared Euclidean distance between two real sequences."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    _same_length(a, b)
    return float(np.sum((a - b) ** 2))


def dust_point(x: UncertainValue, y: UncertainValue, flavor: DustFlavor) -> float:
    """Pointwise DUST with ``sigma = max(dx, dy)``.

    When both deltas are zero the plain absolute difference is returned.
    """
    return float(_dust_terms(x.best, x.delta, y.best, y.delta, DustFlavor(flavor)))


def dust(a: UncertainSeries, b: UncertainSeries, flavor: DustFlavor) -> float:
    """Root-sum-of-squares aggregate of pointwise DUST values."""
    _same_length(a, b)
    terms = _dust_terms(a.best, a.delta, b.best, b.delta, DustFlavor(flavor))
    return float(np.sqrt(np.sum(terms**2)))


def ued_subseq(T: UncertainSeries, S: UncertainSeries, ordering: OrderingStrategy) -> UncertainValue:
    """UED between ``S`` and its closest window of ``T``.

    The minimum is taken under ``ordering``; ties go to the earliest window.
    """
    best, delta, _ = subsequence_distance(T, S, Measure.UED, ordering)
    return UncertainValue(best, delta)


def subsequence_distance(T: UncertainSeries, S: UncertainSeries, measure, ordering: OrderingStrategy):
    """Distance from ``S`` to the closest window of ``T`` under any measure.

    Returns ``(best, delta, offset)``.
    """
    if len(S) > len(T):
        raise ValueError(f"subsequence of length {len(S)} longer than series of length {len(T)}")
    best, delta = window_distances(
        T.best[None], T.delta[None], S.best[None], S.delta[None], Measure(measure)
    )
    idx = int(_ord.argmin(best[0, 0], delta[0, 0], ordering))
    return float(best[0, 0, idx]), float(delta[0, 0, idx]), idx


# -- vectorized kernels ------------------------------------------------------


def _ued_terms(ab, ad, bb, bd):
    diff = ab - bb
    return np.sum(diff**2, axis=-1), 2.0 * np.sum(np.abs(diff) * (ad + bd), axis=-1)


def _dust_terms(xb, xd, yb, yd, flavor):
    gap = np.abs(xb - yb)
    sigma = np.maximum(xd, yd)
    if flavor is DustFlavor.UNIFORM:
        scale = 2.0 * sigma
    else:
        scale = 2.0 * sigma * (1.0 + sigma**2)
    certain = sigma == 0
    return np.where(certain, gap, gap / np.where(certain, 1.0, scale))


def window_distances(series_best, series_delta, cand_best, cand_delta, measure: Measure):
    """Distances from every candidate to every window of every series.

    Parameters
    ----------
    series_best, series_delta : ndarray, shape (n, m)
    cand_best, cand_delta : ndarray, shape (c, l)
        Candidates of a common length ``l <= m``.

    Returns
    -------
    best, delta : ndarray, shape (c, n, m - l + 1)
        ``delta`` is all zeros for the certain measures.
    """
    length = cand_best.shape[-1]
    wb = sliding_window_view(series_best, length, axis=-1)[None]
    wd = sliding_window_view(series_delta, length, axis=-1)[None]
    cb = cand_best[:, None, None, :]
    cd = cand_delta[:, None, None, :]
    if measure is Measure.UED:
        return _ued_terms(wb, wd, cb, cd)
    if measure is Measure.ED:
        best = np.sum((wb - cb) ** 2, axis=-1)
    else:
        terms = _dust_terms(wb, wd, cb, cd, measure.dust_flavor)
        best = np.sqrt(np.sum(terms**2, axis=-1))
    return best, np.zeros_like(best)


def nearest_windows(series_best, series_delta, cand_best, cand_delta, measure, ordering):
    """Per candidate and series, the distance to the closest window.

    Returns ``(best, delta)`` arrays of shape ``(c, n)``.
    """
    best, delta = window_distances(series_best, series_delta, cand_best, cand_delta, measure)
    idx = _ord.argmin(best, delta, ordering)[..., None]
    return (
        np.take_along_axis(best, idx, axis=-1)[..., 0],
        np.take_along_axis(delta, idx, axis=-1)[..., 0],
    )

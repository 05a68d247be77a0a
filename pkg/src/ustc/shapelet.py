"""Top-k uncertain shapelet selection and the uncertain shapelet transform.

Selection walks every series of the training set in order, enumerates its
subsequences by increasing length then offset, and scores each candidate by
the information gain of the best threshold split of the dataset on its
distances. The search stops as soon as the wall-clock contract is used up
(after at least one candidate), and the ``k`` best candidates found so far
are returned.

The transform maps every series to its distances to the selected shapelets
and standardizes the best-guess and delta channels of each column
separately.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import ordering as _ord
from .dissimilarity import Measure, nearest_windows
from .ordering import OrderingKind, OrderingStrategy
from .uncertain import UncertainDataset, UncertainSeries, UncertainValue

# gains closer than this are treated as ties when ranking
GAIN_DECIMALS = 12

# upper bound on the (candidates x series x windows x length) block
# evaluated in one vectorized step
_BLOCK_ELEMENTS = 1 << 21


@dataclass(frozen=True)
class Shapelet:
    values: UncertainSeries
    source_index: int
    offset: int
    quality: float
    threshold: Optional[UncertainValue] = None

    @property
    def length(self) -> int:
        return len(self.values)

    @property
    def total_delta(self) -> float:
        return float(np.sum(self.values.delta))

    def identity(self):
        return (self.source_index, self.length, self.offset)

    def to_dict(self):
        return {
            "source_index": self.source_index,
            "offset": self.offset,
            "length": self.length,
            "quality": self.quality,
            "threshold": None
            if self.threshold is None
            else {"best": self.threshold.best, "delta": self.threshold.delta},
            "best": self.values.best.tolist(),
            "delta": self.values.delta.tolist(),
        }


@dataclass(frozen=True)
class SplitThreshold:
    threshold: UncertainValue
    gain: float
    position: int = 0  # number of items in the near side


@dataclass(frozen=True)
class SelectionConfig:
    """Parameters of the shapelet search.

    ``max_len`` defaults to ``m - 1`` once the series length is known;
    ``contract`` is in seconds, ``math.inf`` for an exhaustive search.
    """

    k: int = 10
    min_len: int = 3
    max_len: Optional[int] = None
    contract: float = 600.0
    ordering: OrderingStrategy = _ord.SIMPLE
    measure: Measure = Measure.UED

    def __post_init__(self):
        object.__setattr__(self, "measure", Measure(self.measure))
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        if not self.contract > 0:
            raise ValueError(f"time contract must be positive, got {self.contract}")
        if not self.measure.uncertain and self.ordering.kind is not OrderingKind.NATURAL:
            # certain distances: every strategy reduces to the natural order
            object.__setattr__(self, "ordering", _ord.NATURAL)

    def bounds(self, m: int):
        max_len = m - 1 if self.max_len is None else self.max_len
        if not 3 <= self.min_len <= max_len <= m - 1:
            raise ValueError(
                f"need 3 <= min_len <= max_len <= m - 1, got min_len={self.min_len}, "
                f"max_len={max_len}, m={m}"
            )
        return self.min_len, max_len


@dataclass
class SearchStats:
    """Bookkeeping filled in by :func:`select_shapelets`."""

    evaluated: int = 0
    total_candidates: int = 0
    elapsed: float = 0.0
    slowest_block: float = 0.0
    exhausted: bool = False  # stopped by the contract


@dataclass
class UncertainFeatureMatrix:
    """Transformed dataset.

    ``best`` and ``delta`` hold the standardized channels; the delta
    channel is a z-score and can be negative. ``raw_best`` and
    ``raw_delta`` keep the unscaled distances. The column statistics are
    only set on matrices produced by :func:`transform_fit`.
    """

    best: np.ndarray
    delta: np.ndarray
    raw_best: np.ndarray
    raw_delta: np.ndarray
    col_best_mean: Optional[np.ndarray] = None
    col_best_std: Optional[np.ndarray] = None
    col_delta_mean: Optional[np.ndarray] = None
    col_delta_std: Optional[np.ndarray] = None

    @property
    def shape(self):
        return self.best.shape

    @property
    def fitted(self) -> bool:
        return self.col_best_mean is not None

    def raw_row(self, i):
        """Unscaled distances of series ``i`` as uncertain values."""
        return [UncertainValue(b, d) for b, d in zip(self.raw_best[i], self.raw_delta[i])]

    def flattened(self) -> np.ndarray:
        return np.hstack([self.best, self.delta])


def gen_candidates(T: UncertainSeries, min_len: int, max_len: int):
    """All subsequences with length in ``[min_len, max_len]``.

    Ordered by increasing length, then increasing offset. Yields
    ``(offset, subsequence)`` pairs.
    """
    m = len(T)
    if not 1 <= min_len <= max_len <= m:
        raise ValueError(f"need 1 <= min_len <= max_len <= {m}, got {min_len}, {max_len}")
    for length in range(min_len, max_len + 1):
        for offset in range(m - length + 1):
            yield offset, T[offset : offset + length]


def candidate_count(m: int, min_len: int, max_len: int) -> int:
    return sum(m - length + 1 for length in range(min_len, max_len + 1))


def _entropy(counts):
    total = counts.sum(axis=-1, keepdims=True)
    p = counts / np.where(total > 0, total, 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(p), 0.0)
    return -terms.sum(axis=-1)


def _split_block(best, delta, codes, n_classes, ordering):
    """Best threshold split for each row of ``(c, n)`` distance arrays.

    Returns ``(gain, position, threshold_best, threshold_delta)`` arrays.
    """
    c, n = best.shape
    if ordering.lexicographic:
        order = np.lexsort((delta, best), axis=-1)
    else:
        order = np.stack([_ord.argsort(best[r], delta[r], ordering) for r in range(c)])
    sb = np.take_along_axis(best, order, axis=-1)
    sd = np.take_along_axis(delta, order, axis=-1)
    if ordering.lexicographic:
        distinct = (sb[:, 1:] != sb[:, :-1]) | (sd[:, 1:] != sd[:, :-1])
    else:
        distinct = _ord.compare_arrays(sb[:, :-1], sd[:, :-1], sb[:, 1:], sd[:, 1:], ordering) != 0

    onehot = np.eye(n_classes)[codes[order]]
    left = np.cumsum(onehot, axis=1)[:, :-1]
    total = onehot.sum(axis=1, keepdims=True)
    right = total - left
    pos = np.arange(1, n)
    gain = (
        _entropy(total)
        - pos / n * _entropy(left)
        - (n - pos) / n * _entropy(right)
    )
    rank_gain = np.where(distinct, np.round(gain, GAIN_DECIMALS), -np.inf)
    balance = np.abs(2 * pos - n)
    choice = np.lexsort(
        (np.broadcast_to(pos, gain.shape), np.broadcast_to(balance, gain.shape), -rank_gain),
        axis=-1,
    )[:, 0]
    rows = np.arange(c)
    ok = distinct.any(axis=-1)
    best_gain = np.where(ok, gain[rows, choice], 0.0)
    position = np.where(ok, choice + 1, n)
    return (
        np.clip(best_gain, 0.0, math.log2(max(n_classes, 2))),
        position,
        sb[rows, position - 1],
        sd[rows, position - 1],
    )


def _encode(labels):
    classes, codes = np.unique(np.asarray(labels), return_inverse=True)
    return classes, codes.reshape(-1)


def best_split(distances: Sequence[UncertainValue], labels, ordering: OrderingStrategy) -> SplitThreshold:
    """Information-gain-maximizing threshold split of labelled distances.

    Distances are sorted under ``ordering``; each boundary between two
    non-equal neighbours puts everything up to it on the near side. The
    threshold is the last distance on the near side. Gain ties go to the
    more balanced split, then the smaller threshold.
    """
    if len(distances) != len(labels):
        raise ValueError(f"{len(distances)} distances but {len(labels)} labels")
    if len(distances) < 2:
        raise ValueError("need at least two distances to split")
    classes, codes = _encode(labels)
    if len(classes) < 2:
        raise ValueError("cannot split a single-class set")
    best = np.array([[d.best for d in distances]])
    delta = np.array([[d.delta for d in distances]])
    gain, pos, tb, td = _split_block(best, delta, codes, len(classes), ordering)
    return SplitThreshold(UncertainValue(tb[0], td[0]), float(gain[0]), int(pos[0]))


def assess_candidate(cand: UncertainSeries, D: UncertainDataset, cfg: SelectionConfig) -> float:
    """Information gain of the best split of ``D`` on distances to ``cand``."""
    return _assess(cand, D, cfg).gain


def _assess(cand, D, cfg):
    if len(cand) > D.m:
        raise ValueError(f"candidate of length {len(cand)} longer than series of length {D.m}")
    D.require_classes()
    classes, codes = _encode(D.labels)
    best, delta = nearest_windows(
        D.best, D.delta, cand.best[None], cand.delta[None], cfg.measure, cfg.ordering
    )
    gain, pos, tb, td = _split_block(best, delta, codes, len(classes), cfg.ordering)
    return SplitThreshold(UncertainValue(tb[0], td[0]), float(gain[0]), int(pos[0]))


def _block_size(n, m, length, ordering):
    if not ordering.lexicographic:
        return 1
    per_candidate = n * (m - length + 1) * length
    return max(1, _BLOCK_ELEMENTS // per_candidate)


def _rank_key(record):
    gain, total_delta, source, length, offset = record[:5]
    return (-round(gain, GAIN_DECIMALS), total_delta, source, length, offset)


def select_shapelets(
    D: UncertainDataset,
    cfg: SelectionConfig,
    stats: Optional[SearchStats] = None,
    clock=time.perf_counter,
) -> list:
    """Top-``k`` shapelets of ``D`` found within the time contract.

    Ties in quality prefer the candidate with the smaller summed delta,
    then the lower ``(source_index, length, offset)``. The result is sorted
    by decreasing quality.
    """
    if D.n < 1:
        raise ValueError("empty dataset")
    D.require_classes()
    min_len, max_len = cfg.bounds(D.m)
    stats = stats if stats is not None else SearchStats()
    stats.evaluated, stats.slowest_block = 0, 0.0
    stats.total_candidates = D.n * candidate_count(D.m, min_len, max_len)
    classes, codes = _encode(D.labels)
    n_classes = len(classes)

    start = clock()
    deadline = start + cfg.contract
    records = []
    done = False
    for source in range(D.n):
        for length in range(min_len, max_len + 1):
            cb_all = sliding_window_view(D.best[source], length)
            cd_all = sliding_window_view(D.delta[source], length)
            n_off = cb_all.shape[0]
            step = _block_size(D.n, D.m, length, cfg.ordering)
            for lo in range(0, n_off, step):
                t0 = clock()
                hi = min(lo + step, n_off)
                cb, cd = cb_all[lo:hi], cd_all[lo:hi]
                best, delta = nearest_windows(D.best, D.delta, cb, cd, cfg.measure, cfg.ordering)
                gain, _, tb, td = _split_block(best, delta, codes, n_classes, cfg.ordering)
                totals = cd.sum(axis=-1)
                stats.slowest_block = max(stats.slowest_block, clock() - t0)
                for j in range(hi - lo):
                    records.append(
                        (float(gain[j]), float(totals[j]), source, length, lo + j, float(tb[j]), float(td[j]))
                    )
                    stats.evaluated += 1
                    if clock() >= deadline:
                        done = True
                        break
                if done:
                    break
            if done:
                break
        if done:
            break
    stats.elapsed = clock() - start
    stats.exhausted = done and stats.evaluated < stats.total_candidates

    top = heapq.nsmallest(cfg.k, records, key=_rank_key)
    return [
        Shapelet(
            values=D[source][offset : offset + length],
            source_index=source,
            offset=offset,
            quality=gain,
            threshold=UncertainValue(tb, td),
        )
        for gain, _, source, length, offset, tb, td in top
    ]


# -- transform ---------------------------------------------------------------


def shapelet_distances(D: UncertainDataset, shapelets, measure=Measure.UED, ordering=_ord.SIMPLE):
    """Raw ``(n, k)`` best and delta distances from every series to every shapelet."""
    if not shapelets:
        raise ValueError("need at least one shapelet")
    measure = Measure(measure)
    if not measure.uncertain:
        ordering = _ord.NATURAL
    best = np.empty((D.n, len(shapelets)))
    delta = np.empty_like(best)
    for j, s in enumerate(shapelets):
        if s.length > D.m:
            raise ValueError(
                f"shapelet {j} has length {s.length}, longer than series of length {D.m}"
            )
        b, d = nearest_windows(
            D.best, D.delta, s.values.best[None], s.values.delta[None], measure, ordering
        )
        best[:, j], delta[:, j] = b[0], d[0]
    return best, delta


def _column_stats(x):
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std[np.ptp(x, axis=0) == 0] = 0.0
    return mean, std


def _standardize(x, mean, std):
    scale = np.where(std > 0, std, 1.0)
    return np.where(std > 0, (x - mean) / scale, 0.0)


def transform_fit(D: UncertainDataset, shapelets, measure=Measure.UED, ordering=_ord.SIMPLE) -> UncertainFeatureMatrix:
    """Transform ``D`` and standardize each column on ``D`` itself.

    Population standard deviation; constant columns map to 0.
    """
    raw_b, raw_d = shapelet_distances(D, shapelets, measure, ordering)
    bm, bs = _column_stats(raw_b)
    dm, ds = _column_stats(raw_d)
    return UncertainFeatureMatrix(
        best=_standardize(raw_b, bm, bs),
        delta=_standardize(raw_d, dm, ds),
        raw_best=raw_b,
        raw_delta=raw_d,
        col_best_mean=bm,
        col_best_std=bs,
        col_delta_mean=dm,
        col_delta_std=ds,
    )


def transform_apply(
    D: UncertainDataset, shapelets, fitted: UncertainFeatureMatrix, measure=Measure.UED, ordering=_ord.SIMPLE
) -> UncertainFeatureMatrix:
    """Transform ``D`` reusing the column statistics of a fitted matrix."""
    if not fitted.fitted:
        raise ValueError("transform_apply needs a matrix produced by transform_fit")
    raw_b, raw_d = shapelet_distances(D, shapelets, measure, ordering)
    return UncertainFeatureMatrix(
        best=_standardize(raw_b, fitted.col_best_mean, fitted.col_best_std),
        delta=_standardize(raw_d, fitted.col_delta_mean, fitted.col_delta_std),
        raw_best=raw_b,
        raw_delta=raw_d,
    )

"""Orderings over uncertain measures.

Three strategies compare ``UncertainValue`` objects:

* ``simple``: lexicographic on ``(best, delta)``,
* ``stochastic``: relaxed first-order stochastic dominance of Gaussian CDFs
  evaluated on a ``k + 1`` point grid,
* ``interval``: possibility degree of interval numbers, ``x <= y`` when
  ``Pr[x <= y] > 0.5``.

``natural`` is the plain order on reals and is only valid for zero-delta
values (ED and DUST outputs).

Every comparator returns :class:`Ordering3` and is total: inconclusive
stochastic or interval comparisons fall back to the simple order. The
scalar functions are the reference API; the ``*_arrays`` helpers are the
vectorized forms used by the shapelet search and produce identical
decisions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cmp_to_key

import numpy as np
from scipy.special import erf

from .uncertain import UncertainValue

_SQRT2 = math.sqrt(2.0)


class Ordering3(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class OrderingKind(str, enum.Enum):
    SIMPLE = "simple"
    STOCHASTIC = "stochastic"
    INTERVAL = "interval"
    NATURAL = "natural"


@dataclass(frozen=True)
class OrderingStrategy:
    """Comparison strategy plus the CDF grid size used by ``stochastic``."""

    kind: OrderingKind = OrderingKind.SIMPLE
    k: int = 100

    def __post_init__(self):
        object.__setattr__(self, "kind", OrderingKind(self.kind))
        if self.kind is OrderingKind.STOCHASTIC and self.k < 2:
            raise ValueError(f"stochastic ordering needs k >= 2, got {self.k}")

    @property
    def lexicographic(self) -> bool:
        # interval decisions coincide with the simple order, see cmp_interval
        return self.kind is not OrderingKind.STOCHASTIC

    def __str__(self):
        return self.kind.value


SIMPLE = OrderingStrategy(OrderingKind.SIMPLE)
INTERVAL = OrderingStrategy(OrderingKind.INTERVAL)
STOCHASTIC = OrderingStrategy(OrderingKind.STOCHASTIC)
NATURAL = OrderingStrategy(OrderingKind.NATURAL)


def cmp_simple(x: UncertainValue, y: UncertainValue) -> Ordering3:
    if x.best < y.best or (x.best == y.best and x.delta < y.delta):
        return Ordering3.LESS
    if x.best == y.best and x.delta == y.delta:
        return Ordering3.EQUAL
    return Ordering3.GREATER


def cmp_natural(x: UncertainValue, y: UncertainValue) -> Ordering3:
    if x.delta != 0 or y.delta != 0:
        raise ValueError("natural ordering only applies to values with zero delta")
    return Ordering3((x.best > y.best) - (x.best < y.best))


def _cdf(t, best, delta):
    """Gaussian CDF, or a step function where ``delta == 0``."""
    certain = delta == 0
    scale = np.where(certain, 1.0, delta) * _SQRT2
    with np.errstate(over="ignore"):
        smooth = 0.5 * (1.0 + erf((t - best) / scale))
    return np.where(certain, np.asarray(t >= best, dtype=float), smooth)


def gaussian_cdf(t: float, x: UncertainValue) -> float:
    """CDF at ``t`` of a normal variable with mean ``x.best`` and std ``x.delta``.

    A zero delta gives the degenerate step function (0 below the best guess,
    1 from it on).
    """
    return float(_cdf(np.float64(t), np.float64(x.best), np.float64(x.delta)))


def cdf_grid(bx, dx, by, dy, k: int) -> np.ndarray:
    """``k + 1`` evenly spaced points spanning both intervals.

    Inputs broadcast; the grid is on a new trailing axis.
    """
    lo = np.minimum(bx - dx, by - dy)[..., None]
    hi = np.maximum(bx + dx, by + dy)[..., None]
    i = np.arange(k + 1)
    return lo + i * (hi - lo) / k


def _simple_arrays(bx, dx, by, dy):
    less = (bx < by) | ((bx == by) & (dx < dy))
    equal = (bx == by) & (dx == dy)
    return np.where(less, -1, np.where(equal, 0, 1)).astype(np.int8)


def _stochastic_arrays(bx, dx, by, dy, k):
    bx, dx, by, dy = np.broadcast_arrays(*(np.asarray(a, float) for a in (bx, dx, by, dy)))
    t = cdf_grid(bx, dx, by, dy, k)
    cx = _cdf(t, bx[..., None], dx[..., None])
    cy = _cdf(t, by[..., None], dy[..., None])
    above = np.count_nonzero(cx > cy, axis=-1)
    below = np.count_nonzero(cx < cy, axis=-1)
    out = np.array(np.sign(below - above), dtype=np.int8)
    tie = out == 0
    if np.any(tie):
        out[tie] = _simple_arrays(bx[tie], dx[tie], by[tie], dy[tie])
    return out


def cmp_stochastic(x: UncertainValue, y: UncertainValue, k: int = 100) -> Ordering3:
    """Relaxed stochastic order.

    Counts grid points where ``CDF_x > CDF_y`` against points where
    ``CDF_x < CDF_y``; the majority decides (a CDF that sits higher means
    a stochastically smaller variable). Even counts fall back to
    :func:`cmp_simple`.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return Ordering3(int(_stochastic_arrays(x.best, x.delta, y.best, y.delta, k)))


def _geq_prob_arrays(bx, dx, by, dy):
    # ((bx + dx) - (by - dy)) / (2dx + 2dy), rearranged so that swapping the
    # arguments negates the numerator's leading term exactly
    spread = dx + dy
    num = (bx - by) + spread
    den = 2.0 * spread
    safe = np.where(den > 0, den, 1.0)
    with np.errstate(over="ignore"):
        p = np.clip(num / safe, 0.0, 1.0)
    return np.where(den > 0, p, np.asarray(bx >= by, dtype=float))


def interval_geq_prob(x: UncertainValue, y: UncertainValue) -> float:
    """Possibility degree ``Pr[x >= y]`` of two interval numbers.

    With intervals ``[best - delta, best + delta]`` this is
    ``(upper_x - lower_y) / (width_x + width_y)`` clamped to ``[0, 1]``.
    Two certain values give 1 if ``x.best >= y.best`` else 0.
    """
    return float(_geq_prob_arrays(x.best, x.delta, y.best, y.delta))


def cmp_interval(x: UncertainValue, y: UncertainValue) -> Ordering3:
    """``x < y`` iff ``Pr[y >= x] > 0.5``.

    ``Pr[y >= x] = 0.5`` exactly, and pairs of certain values, fall back to
    :func:`cmp_simple`. Note that ``Pr[y >= x] > 0.5`` holds iff
    ``x.best < y.best``, so the decisions always agree with the simple order.
    """
    if x.delta + y.delta == 0:
        return cmp_simple(x, y)
    p = interval_geq_prob(y, x)
    if p > 0.5:
        return Ordering3.LESS
    if p < 0.5:
        return Ordering3.GREATER
    return cmp_simple(x, y)


def compare(x: UncertainValue, y: UncertainValue, strategy: OrderingStrategy) -> Ordering3:
    kind = strategy.kind
    if kind is OrderingKind.SIMPLE:
        return cmp_simple(x, y)
    if kind is OrderingKind.INTERVAL:
        return cmp_interval(x, y)
    if kind is OrderingKind.STOCHASTIC:
        return cmp_stochastic(x, y, strategy.k)
    return cmp_natural(x, y)


def sort_key(strategy: OrderingStrategy):
    """Key function for ``sorted`` over ``UncertainValue`` objects."""
    return cmp_to_key(lambda x, y: int(compare(x, y, strategy)))


# -- vectorized forms --------------------------------------------------------


def compare_arrays(bx, dx, by, dy, strategy: OrderingStrategy) -> np.ndarray:
    """Elementwise comparison of broadcastable best/delta arrays as int8."""
    if strategy.kind is OrderingKind.STOCHASTIC:
        return _stochastic_arrays(bx, dx, by, dy, strategy.k)
    if strategy.kind is OrderingKind.NATURAL:
        _require_certain(dx, dy)
    return _simple_arrays(*np.broadcast_arrays(bx, dx, by, dy))


def _require_certain(*deltas):
    if any(np.any(np.asarray(d) != 0) for d in deltas):
        raise ValueError("natural ordering only applies to values with zero delta")


def argmin(best, delta, strategy: OrderingStrategy) -> np.ndarray:
    """Index of the minimum along the last axis.

    The minimum is the earliest element no other element is strictly less
    than. For the lexicographic strategies that is the plain earliest
    minimum. The relaxed stochastic order is not guaranteed transitive; if
    every element is beaten by some other element, the earliest element
    beaten by the fewest others is returned.
    """
    best = np.asarray(best, float)
    delta = np.asarray(delta, float)
    if strategy.kind is OrderingKind.NATURAL:
        _require_certain(delta)
    if strategy.lexicographic:
        tied = best == best.min(axis=-1, keepdims=True)
        return np.argmin(np.where(tied, delta, np.inf), axis=-1)

    lead = best.shape[:-1]
    b2 = best.reshape(-1, best.shape[-1])
    d2 = delta.reshape(b2.shape)
    rows = np.arange(b2.shape[0])
    champ = np.zeros(b2.shape[0], dtype=np.intp)
    for w in range(1, b2.shape[1]):
        c = _stochastic_arrays(b2[:, w], d2[:, w], b2[rows, champ], d2[rows, champ], strategy.k)
        champ = np.where(c < 0, w, champ)
    vs_champ = _stochastic_arrays(
        b2, d2, b2[rows, champ][:, None], d2[rows, champ][:, None], strategy.k
    )
    result = np.argmax(vs_champ == 0, axis=-1)
    for r in np.flatnonzero((vs_champ < 0).any(axis=-1)):
        m = _stochastic_arrays(b2[r][:, None], d2[r][:, None], b2[r][None], d2[r][None], strategy.k)
        beaten_by = np.count_nonzero(m < 0, axis=0)
        result[r] = np.argmin(beaten_by)
    return result.reshape(lead)


def argsort(best, delta, strategy: OrderingStrategy) -> np.ndarray:
    """Stable ascending order of a 1-d collection of uncertain values."""
    best = np.asarray(best, float)
    delta = np.asarray(delta, float)
    if strategy.kind is OrderingKind.NATURAL:
        _require_certain(delta)
    if strategy.lexicographic:
        return np.lexsort((delta, best))
    table = comparison_matrix(best, delta, strategy).tolist()
    return np.array(sorted(range(best.size), key=cmp_to_key(lambda i, j: table[i][j])), dtype=np.intp)


def comparison_matrix(best, delta, strategy: OrderingStrategy) -> np.ndarray:
    """``M[i, j] = compare(v_i, v_j)`` for a 1-d collection."""
    return compare_arrays(best[:, None], delta[:, None], best[None, :], delta[None, :], strategy)

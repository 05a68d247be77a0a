"""Gaussian Naive Bayes, plain and uncertainty-aware.

GNB works on real vectors; uncertain rows are first flattened into
``[bests..., deltas...]``.

UGNB treats every training observation as a Gaussian ``N(best, delta^2)``
and moment-matches the per-class mixture, so the class variance is the
variance of the best guesses plus the mean squared delta. A test
observation ``best ± delta`` is scored with the convolved likelihood
``N(best; mu, var + delta^2)``. With all deltas zero both reduce to GNB.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .uncertain import UncertainValue

VAR_SMOOTHING = 1e-9


@dataclass(frozen=True)
class GaussianNBModel:
    classes: np.ndarray
    priors: np.ndarray
    mean: np.ndarray  # (n_classes, n_features)
    variance: np.ndarray  # (n_classes, n_features), floor included
    variance_floor: float

    @property
    def n_features(self) -> int:
        return self.mean.shape[1]

    def predict(self, proba) -> np.ndarray:
        """Most probable class for each row of a posterior matrix."""
        return self.classes[np.argmax(np.atleast_2d(proba), axis=1)]


def flatten(row) -> np.ndarray:
    """``[(b1 ± d1), (b2 ± d2)]`` -> ``[b1, b2, d1, d2]``."""
    row = list(row)
    if not row:
        raise ValueError("cannot flatten an empty row")
    return np.array([v.best for v in row] + [v.delta for v in row], dtype=float)


def flatten_matrix(best, delta) -> np.ndarray:
    return np.hstack([np.asarray(best, float), np.asarray(delta, float)])


def _classes(y):
    y = np.asarray(y)
    classes, codes = np.unique(y, return_inverse=True)
    if len(classes) < 2:
        raise ValueError(f"need at least two classes to fit, got {len(classes)}")
    return classes, codes.reshape(-1)


def _floor(X):
    top = float(np.max(np.var(X, axis=0))) if X.size else 0.0
    return VAR_SMOOTHING * top if top > 0 else VAR_SMOOTHING


def gnb_fit(X, y) -> GaussianNBModel:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] != len(y):
        raise ValueError(f"{X.shape[0]} rows but {len(y)} labels")
    classes, codes = _classes(y)
    floor = _floor(X)
    mean = np.stack([X[codes == c].mean(axis=0) for c in range(len(classes))])
    var = np.stack([X[codes == c].var(axis=0) for c in range(len(classes))]) + floor
    priors = np.bincount(codes, minlength=len(classes)) / len(codes)
    return GaussianNBModel(classes, priors, mean, var, floor)


def _log_joint(model, x, extra_var=0.0):
    var = model.variance[None] + extra_var
    ll = -0.5 * np.sum(np.log(2 * np.pi * var) + (x - model.mean[None]) ** 2 / var, axis=-1)
    return np.log(model.priors)[None] + ll


def _normalize(log_joint):
    return np.exp(log_joint - logsumexp(log_joint, axis=-1, keepdims=True))


def _check_dims(model, x):
    if x.shape[-1] != model.n_features:
        raise ValueError(f"model has {model.n_features} features, input has {x.shape[-1]}")


def gnb_predict_proba(model: GaussianNBModel, x) -> np.ndarray:
    """Posterior class probabilities for one vector or a matrix of rows."""
    x = np.asarray(x, dtype=float)
    _check_dims(model, x)
    single = x.ndim == 1
    proba = _normalize(_log_joint(model, np.atleast_2d(x)[:, None, :]))
    return proba[0] if single else proba


def _uncertain_arrays(X):
    if isinstance(X, tuple):
        best, delta = X
        return np.atleast_2d(np.asarray(best, float)), np.atleast_2d(np.asarray(delta, float))
    rows = [list(r) for r in X]
    return (
        np.array([[v.best for v in r] for r in rows], dtype=float),
        np.array([[v.delta for v in r] for r in rows], dtype=float),
    )


def ugnb_fit(X, y) -> GaussianNBModel:
    """Fit on uncertain rows.

    ``X`` is either a sequence of rows of :class:`UncertainValue` or a
    ``(best, delta)`` pair of ``(n, k)`` arrays.
    """
    best, delta = _uncertain_arrays(X)
    if best.shape[0] != len(y):
        raise ValueError(f"{best.shape[0]} rows but {len(y)} labels")
    classes, codes = _classes(y)
    floor = _floor(best)
    sq = delta**2
    groups = [codes == c for c in range(len(classes))]
    mean = np.stack([best[g].mean(axis=0) for g in groups])
    var = np.stack([best[g].var(axis=0) + sq[g].mean(axis=0) for g in groups]) + floor
    priors = np.bincount(codes, minlength=len(classes)) / len(codes)
    return GaussianNBModel(classes, priors, mean, var, floor)


def ugnb_predict_proba(model: GaussianNBModel, x) -> np.ndarray:
    """Posterior for one uncertain row or many.

    ``x`` is a row of :class:`UncertainValue`, a list of such rows, or a
    ``(best, delta)`` pair of arrays.
    """
    if isinstance(x, tuple):
        best, delta = (np.asarray(a, float) for a in x)
        single = best.ndim == 1
    else:
        x = list(x)
        single = bool(x) and isinstance(x[0], UncertainValue)
        best, delta = _uncertain_arrays([x] if single else x)
    best, delta = np.atleast_2d(best), np.atleast_2d(delta)
    _check_dims(model, best)
    proba = _normalize(_log_joint(model, best[:, None, :], delta[:, None, :] ** 2))
    return proba[0] if single else proba

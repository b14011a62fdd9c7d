"""Simple kriging under a working model and its mean squared error under
the true model.

With correlation matrices ``R_t`` (true) and ``R_w`` (working), correlation
vectors ``c_t`` and ``c_w`` to the prediction site, and true variance
``sigma_t^2``, the working-model predictor ``c_w' R_w^-1 Z`` has error

    sigma_t^2 (1 - 2 c_w' R_w^-1 c_t + c_w' R_w^-1 R_t R_w^-1 c_w)

which reduces to ``sigma_t^2 (1 - c_t' R_t^-1 c_t)`` when the models agree.

Factorizations are the expensive part.  A caller-owned :class:`FactorCache`
keyed by model reuses one Cholesky factor across prediction sites; the
location set is fixed per cache.
"""

from dataclasses import dataclass, field
import math
from typing import Dict, Optional
import warnings

import numpy as np

from .covmodels import LocationSet, correlation_vector, covariance_matrix
from .errors import ValidationError
from . import linalg

CLAMP_TOL = 1e-10


def model_key(model):
    """Hashable identity of a correlation function (variance excluded, NaN-safe)."""
    shapes = tuple(None if math.isnan(v) else v for v in (model.shape1, model.shape2))
    return (model.family, model.scale) + shapes + (model.dim,)


class FactorCache:
    """Cholesky factors and correlation matrices of models on one location set."""

    def __init__(self, locs):
        self.locs = locs if isinstance(locs, LocationSet) else LocationSet(locs)
        self._factors = {}
        self._matrices = {}

    def matrix(self, model):
        key = model_key(model)
        if key not in self._matrices:
            self._matrices[key] = covariance_matrix(model, self.locs)
        return self._matrices[key]

    def factor(self, model):
        key = model_key(model)
        if key not in self._factors:
            self._factors[key] = linalg.cholesky(self.matrix(model))
        return self._factors[key]


def _cache(locs, cache):
    if cache is None:
        return FactorCache(locs)
    if cache.locs is not locs and not np.array_equal(cache.locs.points, np.asarray(getattr(locs, "points", locs))):
        raise ValidationError("factor cache belongs to a different location set")
    return cache


def _site_index(locs, s0):
    s0 = np.asarray(s0, dtype=float).reshape(-1)
    hits = np.flatnonzero(np.all(locs.points == s0, axis=1))
    return int(hits[0]) if hits.size else None


def blup_weights(working, locs, s0, cache=None):
    """Kriging weights ``R_w^-1 c_w``; a unit vector when ``s0`` is observed."""
    locs = locs if isinstance(locs, LocationSet) else LocationSet(locs)
    j = _site_index(locs, s0)
    if j is not None:
        w = np.zeros(locs.n)
        w[j] = 1.0
        return w
    cache = _cache(locs, cache)
    return linalg.solve(cache.factor(working), correlation_vector(working, locs, s0))


def predict(working, locs, values, s0, cache=None):
    """Simple-kriging prediction ``w' Z`` at ``s0``."""
    return float(blup_weights(working, locs, s0, cache) @ np.asarray(values, dtype=float))


def _clamp(v, scale):
    if v >= 0:
        return v
    if v < -CLAMP_TOL * scale:
        raise ArithmeticError(f"negative mean squared error {v:.3e} beyond round-off")
    if v < -CLAMP_TOL * scale * 1e-3:
        warnings.warn(f"clamping negative mean squared error {v:.3e} to 0", RuntimeWarning, stacklevel=3)
    return 0.0


def mse_true(model, locs, s0, cache=None):
    """``sigma^2 (1 - c' R^-1 c)`` of the correctly specified predictor.

    An empty location set gives the unconditional variance.
    """
    if locs is None or (not isinstance(locs, LocationSet) and len(locs) == 0):
        return model.variance
    locs = locs if isinstance(locs, LocationSet) else LocationSet(locs)
    if _site_index(locs, s0) is not None:
        return 0.0
    cache = _cache(locs, cache)
    c = correlation_vector(model, locs, s0)
    y = linalg.forward(cache.factor(model), c)
    v = model.variance * (1.0 - float(y @ y))
    return _clamp(v, model.variance)


def mse_misspecified(true_model, working_model, locs, s0, cache=None):
    """True-model mean squared error of the working-model predictor."""
    locs = locs if isinstance(locs, LocationSet) else LocationSet(locs)
    if _site_index(locs, s0) is not None:
        return 0.0
    if model_key(true_model) == model_key(working_model):
        return mse_true(true_model, locs, s0, cache)
    cache = _cache(locs, cache)
    c_t = correlation_vector(true_model, locs, s0)
    c_w = correlation_vector(working_model, locs, s0)
    w = linalg.solve(cache.factor(working_model), c_w)
    R_t = cache.matrix(true_model)
    v = true_model.variance * (1.0 - 2.0 * float(w @ c_t) + float(w @ (R_t @ w)))
    return _clamp(v, true_model.variance)


def ratio_u1(true_model, working_model, locs, s0, cache=None):
    """Efficiency ratio: true-model error of the working predictor over the optimal error.

    The result does not depend on the working model's variance.  To evaluate
    the role-swapped ratio (working model taken as truth) swap the arguments.
    """
    num = mse_misspecified(true_model, working_model, locs, s0, cache)
    den = mse_true(true_model, locs, s0, cache)
    return num / den


def ratio_u2(true_model, working_model, locs, s0, cache=None):
    """Self-assessment ratio: the working model's own error claim over its true error."""
    num = mse_true(working_model, locs, s0, cache)
    den = mse_misspecified(true_model, working_model, locs, s0, cache)
    return num / den


@dataclass(frozen=True)
class PredictionAssessment:
    weights: np.ndarray
    prediction: Optional[float]
    mse_under: Dict[str, float] = field(default_factory=dict)
    u1: Optional[float] = None
    u2: Optional[float] = None


def assess(true_model, working_model, locs, s0, values=None, cache=None):
    """Weights, prediction and both error ratios for one site."""
    locs = locs if isinstance(locs, LocationSet) else LocationSet(locs)
    cache = _cache(locs, cache)
    w = blup_weights(working_model, locs, s0, cache)
    pred = None if values is None else float(w @ np.asarray(values, dtype=float))
    m_true = mse_true(true_model, locs, s0, cache)
    m_work = mse_true(working_model, locs, s0, cache)
    m_miss = mse_misspecified(true_model, working_model, locs, s0, cache)
    u1 = m_miss / m_true if m_true > 0 else None
    u2 = m_work / m_miss if m_miss > 0 else None
    return PredictionAssessment(w, pred, {"true": m_true, "working": m_work, "misspecified": m_miss}, u1, u2)

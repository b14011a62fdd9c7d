"""Gaussian likelihood, profile likelihood and inference for the GC
microergodic parameter ``sigma^2 lam / gamma^delta``.

Only the scale ``gamma`` is estimated; ``delta`` and ``lam`` are held fixed.
The variance is profiled out in closed form, ``sigma2_hat(gamma) =
Z' R(gamma)^-1 Z / n``, and the profile

    PL(gamma) = -(log(2 pi) + n log sigma2_hat(gamma) + log|R(gamma)| + n) / 2

is maximized over a bounded interval.  ``log(2 pi)`` is deliberately not
multiplied by ``n``; the constant does not move the maximizer.
"""

from dataclasses import dataclass
import math
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import optimize, special
from scipy.spatial.distance import pdist

from .covmodels import LocationSet, covariance_matrix, generalized_cauchy
from .errors import FitError, NotPositiveDefinite, ValidationError
from . import linalg

GRID_POINTS = 32
_BIG = 1e300


def log_likelihood(Z, locs, sigma2, gamma, delta, lam, full_output=False):
    """Exact Gaussian log-likelihood of a zero-mean GC model.

    Returns ``-inf`` when the correlation matrix cannot be factorized; with
    ``full_output`` a ``(value, ok)`` pair is returned instead.
    """
    Z = np.asarray(Z, dtype=float)
    if not sigma2 > 0:
        raise ValidationError("sigma2 must be positive")
    model = generalized_cauchy(delta, lam, gamma, dim=locs.d)
    try:
        f = linalg.cholesky(covariance_matrix(model, locs))
    except NotPositiveDefinite:
        return (-math.inf, False) if full_output else -math.inf
    n = len(Z)
    val = -0.5 * (n * math.log(2 * math.pi * sigma2) + linalg.log_det(f) + linalg.quad_form(f, Z) / sigma2)
    return (val, True) if full_output else val


class ProfileLikelihood:
    """Profile likelihood of one dataset as a function of the GC scale.

    Pairwise distances raised to ``delta`` are computed once, so each
    evaluation costs one matrix fill and one Cholesky factorization.
    """

    def __init__(self, Z, locs, delta, lam):
        if not isinstance(locs, LocationSet):
            locs = LocationSet(locs)
        self.Z = np.asarray(Z, dtype=float)
        if self.Z.shape != (locs.n,):
            raise ValidationError("data length must match the number of locations")
        self.locs = locs
        self.delta = float(delta)
        self.lam = float(lam)
        self.n = locs.n
        self._dpow = pdist(locs.points) ** self.delta
        upper = np.triu_indices(self.n, 1)
        # pdist order is the row-major upper triangle; store it in the lower one
        self._lower = (upper[1], upper[0])
        self.evaluations = 0

    def factor(self, gamma):
        """Cholesky factor of ``R(gamma)``; raises :class:`NotPositiveDefinite`."""
        n = self.n
        R = np.zeros((n, n))
        if n > 1:
            vals = np.exp(-(self.lam / self.delta) * np.log1p(self._dpow * gamma ** -self.delta))
            R[self._lower] = vals
        np.fill_diagonal(R, 1.0)
        return linalg.cholesky(R)

    def sigma2(self, gamma):
        return linalg.quad_form(self.factor(gamma), self.Z) / self.n

    def terms(self, gamma):
        """``(sigma2_hat, log|R|)`` at ``gamma``."""
        f = self.factor(gamma)
        return linalg.quad_form(f, self.Z) / self.n, linalg.log_det(f)

    def __call__(self, gamma):
        """Profile log-likelihood at ``gamma``; ``-inf`` where it is undefined."""
        self.evaluations += 1
        try:
            s2, ld = self.terms(gamma)
        except NotPositiveDefinite:
            return -math.inf
        if not s2 > 0:
            return -math.inf
        return -0.5 * (math.log(2 * math.pi) + self.n * math.log(s2) + ld + self.n)


def profile_sigma2(Z, locs, gamma, delta, lam):
    """Closed-form variance estimate ``Z' R(gamma)^-1 Z / n``."""
    return ProfileLikelihood(Z, locs, delta, lam).sigma2(gamma)


def profile_loglik(Z, locs, gamma, delta, lam):
    return ProfileLikelihood(Z, locs, delta, lam)(gamma)


@dataclass(frozen=True)
class MLFit:
    gamma_hat: float
    sigma2_hat: float
    profile_loglik: float
    search_interval: Tuple[float, float]
    iterations: int
    at_boundary: bool
    converged: bool = True

    def microergodic(self, delta, lam):
        return self.sigma2_hat * lam / self.gamma_hat**delta


def fit_scale(Z, locs, delta, lam, interval, tol=None, objective: Optional[Callable] = None):
    """Maximize the profile likelihood over ``gamma`` in ``interval``.

    A 32-point grid pre-scan picks the best cell; Brent's bounded method
    (golden section with parabolic steps) refines it on the two neighbouring
    cells to absolute tolerance ``tol`` (default ``1e-8 * width``).

    Parameters
    ----------
    objective : callable, optional
        Replaces the profile likelihood (test seam); must map ``gamma`` to a
        value to maximize.

    Raises
    ------
    FitError
        If every evaluation is ``-inf``.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not (0 < lo <= hi < math.inf):
        raise ValidationError("need 0 < lower <= upper < inf")
    pl = ProfileLikelihood(Z, locs, delta, lam) if objective is None else None
    f = objective if objective is not None else pl
    tol = 1e-8 * (hi - lo) if tol is None else tol
    count = 0

    def neg(g):
        nonlocal count
        count += 1
        v = f(g)
        return -v if math.isfinite(v) else _BIG

    if lo == hi:
        g_hat, best = lo, -neg(lo)
        converged = True
    else:
        grid = np.linspace(lo, hi, GRID_POINTS)
        vals = np.array([neg(g) for g in grid])
        if np.all(vals >= _BIG):
            raise FitError("profile likelihood undefined on the whole search grid")
        i = int(np.argmin(vals))
        a, b = grid[max(i - 1, 0)], grid[min(i + 1, GRID_POINTS - 1)]
        res = optimize.minimize_scalar(neg, bounds=(a, b), method="bounded",
                                       options={"xatol": tol, "maxiter": 500})
        g_hat, fval = float(res.x), float(res.fun)
        converged = bool(res.success)
        if vals[i] < fval:
            g_hat, fval = float(grid[i]), float(vals[i])
        best = -fval
    if not math.isfinite(best) or best <= -_BIG:
        raise FitError("profile likelihood undefined at the optimum")
    s2 = pl.sigma2(g_hat) if pl is not None else math.nan
    at_boundary = (g_hat - lo <= tol or hi - g_hat <= tol) and lo != hi
    return MLFit(g_hat, s2, best, (lo, hi), count, bool(at_boundary), converged)


def normalized_stat(sigma2_hat, x, gamma0, sigma20, delta, n, lam=None):
    """``sqrt(n/2) (sigma2_hat gamma0^delta / (sigma20 x^delta) - 1)``.

    ``lam`` cancels between estimate and truth and is accepted only for
    signature symmetry with the microergodic parameter.
    """
    return math.sqrt(n / 2) * (sigma2_hat * gamma0**delta / (sigma20 * x**delta) - 1.0)


@dataclass(frozen=True)
class MicroergodicInterval:
    lower: float
    upper: float
    estimate: float
    level: float
    invertible: bool = True

    def covers(self, theta):
        return self.invertible and self.lower <= theta <= self.upper


def microergodic_ci(fit, delta, lam, n, level=0.95):
    """Interval for ``sigma^2 lam / gamma^delta`` from its normal limit law.

    With ``w = z_(1+level)/2 sqrt(2/n)`` the interval is
    ``[theta_hat / (1 + w), theta_hat / (1 - w)]`` (upper end infinite once
    ``w >= 1``); it contains ``theta`` exactly when
    ``|theta_hat / theta - 1| <= w``.
    """
    if not 0 < level < 1:
        raise ValidationError("level must be in (0, 1)")
    theta = fit.sigma2_hat * lam / fit.gamma_hat**delta
    w = float(special.ndtri(0.5 + level / 2)) * math.sqrt(2.0 / n)
    if not theta > 0:
        return MicroergodicInterval(0.0, 0.0, theta, level, invertible=False)
    upper = theta / (1 - w) if w < 1 else math.inf
    return MicroergodicInterval(theta / (1 + w), upper, theta, level)

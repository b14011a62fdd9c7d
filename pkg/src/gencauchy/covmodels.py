"""Isotropic covariance models: generalized Cauchy, Matern, generalized
Wendland and squared exponential.

Every model is a frozen :class:`CovarianceModel`.  Correlations are evaluated
as functions of the Euclidean distance ``r``; covariances are ``variance``
times the correlation.

Parameter conventions (``shape1``, ``shape2``):

=========  ==========  ===========  ===========
family     scale       shape1       shape2
=========  ==========  ===========  ===========
``GC``     gamma       delta        lambda
``MT``     alpha       nu           (unused)
``GW``     beta        kappa        mu
``SqExp``  alpha       (unused)     (unused)
=========  ==========  ===========  ===========

The GC correlation is ``(1 + (r/gamma)^delta)^(-lambda/delta)``, the Matern
correlation ``2^(1-nu)/G(nu) (r/alpha)^nu K_nu(r/alpha)``, and the squared
exponential ``exp(-r^2/alpha)``.  The GW correlation is the normalized beta
integral

    (1/B(2k, mu+1)) int_{r/beta}^1 u (u^2 - (r/beta)^2)^(k-1) (1-u)^mu du

(zero for ``r >= beta``), evaluated with the truncated power ``(1-x)^mu``
when ``kappa = 0``, the Wendland polynomials for ``kappa = 1, 2, 3``, and the
Gauss hypergeometric representation

    K (1-x^2)^(kappa+mu) 2F1(mu/2, (mu+1)/2; mu+kappa+1; 1-x^2),
    K = G(kappa) G(2kappa+mu+1) / (G(2kappa) G(mu+kappa+1) 2^(mu+1))

for every other ``kappa`` (this covers the half-integer "missing" Wendland
cases).  ``method="quadrature"`` evaluates the beta integral directly.
"""

from dataclasses import InitVar, dataclass, replace
from enum import Enum
import math
from typing import Optional

import numpy as np
from scipy import integrate, optimize, special
from scipy.spatial.distance import pdist, squareform, cdist

from .errors import CalibrationError, ValidationError
from . import specfun

PRACTICAL_RANGE_LEVEL = 0.05


class Family(str, Enum):
    GC = "GC"
    MT = "MT"
    GW = "GW"
    SQEXP = "SqExp"


@dataclass(frozen=True)
class CovarianceModel:
    """A stationary isotropic covariance model.

    Construct with ``validate=False`` to probe parameter regions outside the
    validity domain (for example long-memory GC models in experiments).
    """

    family: Family
    variance: float
    scale: float
    shape1: float = math.nan
    shape2: float = math.nan
    dim: int = 1
    validate: InitVar[bool] = True

    def __post_init__(self, validate):
        object.__setattr__(self, "family", Family(self.family))
        for name in ("variance", "scale", "shape1", "shape2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "dim", int(self.dim))
        if validate:
            check_model(self)

    def with_scale(self, scale):
        return replace(self, scale=scale)

    def with_variance(self, variance):
        return replace(self, variance=variance)

    def __str__(self):
        f = self.family
        if f is Family.GC:
            body = f"delta={self.shape1:g}, lam={self.shape2:g}, gamma={self.scale:g}"
        elif f is Family.MT:
            body = f"nu={self.shape1:g}, alpha={self.scale:g}"
        elif f is Family.GW:
            body = f"mu={self.shape2:g}, kappa={self.shape1:g}, beta={self.scale:g}"
        else:
            body = f"alpha={self.scale:g}"
        return f"{f.value}({body}, sigma2={self.variance:g}, d={self.dim})"


def check_model(model):
    """Raise :class:`ValidationError` unless ``model`` is a valid covariance."""
    errors = []
    if not (model.variance > 0 and math.isfinite(model.variance)):
        errors.append("variance must be positive")
    if not (model.scale > 0 and math.isfinite(model.scale)):
        errors.append("scale must be positive")
    if model.dim not in (1, 2, 3):
        errors.append("dim must be 1, 2 or 3")
    fam = model.family
    if fam is Family.GC:
        if not 0 < model.shape1 <= 2:
            errors.append("GC requires delta in (0, 2]")
        if not model.shape2 > 0:
            errors.append("GC requires lambda > 0")
    elif fam is Family.MT:
        if not model.shape1 > 0:
            errors.append("Matern requires nu > 0")
    elif fam is Family.GW:
        kappa, mu = model.shape1, model.shape2
        if not kappa >= 0:
            errors.append("GW requires kappa >= 0")
        elif not mu >= (model.dim + 1) / 2 + kappa:
            errors.append("GW requires mu >= (d+1)/2 + kappa")
    if errors:
        raise ValidationError(f"invalid {fam.value} model: " + "; ".join(errors))


def generalized_cauchy(delta, lam, gamma, variance=1.0, dim=1, validate=True):
    return CovarianceModel(Family.GC, variance, gamma, delta, lam, dim, validate)


def matern(nu, alpha, variance=1.0, dim=1, validate=True):
    return CovarianceModel(Family.MT, variance, alpha, nu, math.nan, dim, validate)


def generalized_wendland(mu, kappa, beta, variance=1.0, dim=1, validate=True):
    return CovarianceModel(Family.GW, variance, beta, kappa, mu, dim, validate)


def squared_exponential(alpha, variance=1.0, dim=1, validate=True):
    return CovarianceModel(Family.SQEXP, variance, alpha, math.nan, math.nan, dim, validate)


@dataclass(frozen=True)
class LocationSet:
    """Ordered, pairwise-distinct points in ``[0, 1]^d``."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ValidationError("a location set needs at least one point")
        if pts.shape[1] not in (1, 2, 3):
            raise ValidationError("locations must be 1-, 2- or 3-dimensional")
        if not np.all(np.isfinite(pts)) or pts.min() < 0 or pts.max() > 1:
            raise ValidationError("coordinates must lie in [0, 1]")
        if len(np.unique(pts, axis=0)) != len(pts):
            raise ValidationError("locations must be pairwise distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def d(self):
        return self.points.shape[1]

    def __len__(self):
        return self.n

    def subset(self, index):
        return LocationSet(self.points[np.asarray(index)])

    def distances(self):
        """Condensed pairwise distance vector (see :func:`scipy.spatial.distance.pdist`)."""
        return pdist(self.points)

    def distances_to(self, s0):
        s0 = np.atleast_2d(np.asarray(s0, dtype=float))
        return cdist(s0, self.points)[0]


# -- correlation functions ---------------------------------------------------

def _gc(r, delta, lam, gamma):
    return np.exp(-(lam / delta) * np.log1p((r / gamma) ** delta))


def _matern(r, nu, alpha):
    x = r / alpha
    out = np.ones_like(x)
    pos = x > 0
    xp = x[pos]
    if nu > 200:
        logk = np.array([specfun.log_bessel_k(nu, v) for v in xp])
    else:
        with np.errstate(divide="ignore"):
            logk = np.log(special.kve(nu, xp)) - xp
    # round-off in K_nu can push the value a few ulps above 1 near the origin
    out[pos] = np.minimum(np.exp((1 - nu) * math.log(2.0) - special.gammaln(nu) + nu * np.log(xp) + logk), 1.0)
    return out


def _wendland_poly(x, mu, k):
    if k == 0:
        p = np.ones_like(x)
    elif k == 1:
        p = 1 + (mu + 1) * x
    elif k == 2:
        p = 1 + (mu + 2) * x + (mu**2 + 4 * mu + 3) * x**2 / 3
    else:
        p = (1 + (mu + 3) * x + (2 * mu**2 + 12 * mu + 15) * x**2 / 5
             + (mu**3 + 9 * mu**2 + 23 * mu + 15) * x**3 / 15)
    return (1 - x) ** (mu + k) * p


def _gw_hypergeometric(x, mu, k):
    log_k = (special.gammaln(k) + special.gammaln(2 * k + mu + 1) - special.gammaln(2 * k)
             - special.gammaln(mu + k + 1) - (mu + 1) * math.log(2.0))
    y = 1 - x * x
    with np.errstate(divide="ignore"):
        return np.exp(log_k + (k + mu) * np.log(y)) * special.hyp2f1(mu / 2, (mu + 1) / 2, mu + k + 1, y)


def gw_beta_integral(x, mu, kappa, epsabs=1e-13):
    """Normalized GW beta integral at ``x = r/beta`` by adaptive quadrature.

    Uses ``u = sqrt(x^2 + t^2)``, which turns the integrand into
    ``t^(2 kappa - 1) (1 - sqrt(x^2 + t^2))^mu`` and removes the endpoint
    singularity when ``kappa < 1``.  Requires ``kappa > 0``.
    """
    if x >= 1:
        return 0.0
    log_b = special.betaln(2 * kappa, mu + 1)
    upper = math.sqrt(1 - x * x)

    def f(t):
        return math.exp((2 * kappa - 1) * math.log(t) + mu * math.log1p(-math.sqrt(x * x + t * t)) - log_b) \
            if 0 < t < upper else 0.0

    val, _ = integrate.quad(f, 0.0, upper, epsabs=epsabs, epsrel=1e-12, limit=400)
    return val


def _gw(r, mu, kappa, beta, method):
    x = r / beta
    out = np.zeros_like(x)
    inside = x < 1
    xi = x[inside]
    if method == "quadrature":
        if kappa == 0:
            out[inside] = (1 - xi) ** mu
        else:
            out[inside] = [gw_beta_integral(v, mu, kappa) for v in xi]
    elif kappa == 0 or (float(kappa).is_integer() and kappa <= 3):
        out[inside] = _wendland_poly(xi, mu, int(kappa))
    else:
        out[inside] = _gw_hypergeometric(xi, mu, kappa)
    out[x == 0] = 1.0
    return np.minimum(out, 1.0)


def correlation(model, r, method="auto"):
    """Correlation ``phi(r) / sigma^2`` of ``model`` at distances ``r >= 0``.

    Parameters
    ----------
    model : CovarianceModel
    r : float or array_like
        Non-negative distances.
    method : {"auto", "quadrature"}
        GW only: ``"quadrature"`` integrates the beta integral instead of
        using closed forms.

    Returns
    -------
    float or ndarray
        Same shape as ``r``.
    """
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r < 0):
        raise ValueError("distances must be non-negative")
    fam = model.family
    if fam is Family.GC:
        out = _gc(r, model.shape1, model.shape2, model.scale)
    elif fam is Family.MT:
        out = _matern(r, model.shape1, model.scale)
    elif fam is Family.GW:
        out = _gw(r, model.shape2, model.shape1, model.scale, method)
    else:
        out = np.exp(-(r * r) / model.scale)
    return float(out[0]) if scalar else out


def covariance(model, r):
    return model.variance * correlation(model, r)


def covariance_matrix(model, locs, scaled=False):
    """Correlation matrix ``[phi(||s_i - s_j||)]`` (times ``variance`` if ``scaled``).

    The condensed distance vector is mapped once and mirrored, so the result
    is exactly symmetric with a unit (or ``variance``) diagonal.
    """
    if not isinstance(locs, LocationSet):
        locs = LocationSet(locs)
    R = squareform(correlation(model, locs.distances()) if locs.n > 1 else np.empty(0))
    np.fill_diagonal(R, 1.0)
    if locs.n == 1:
        R = np.ones((1, 1))
    return model.variance * R if scaled else R


def correlation_vector(model, locs, s0):
    """Correlations between the prediction site ``s0`` and every location."""
    return correlation(model, locs.distances_to(s0))


# -- calibration and descriptors ---------------------------------------------

def practical_range_to_scale(family, target_range, shape1=math.nan, shape2=math.nan, dim=1,
                             level=PRACTICAL_RANGE_LEVEL):
    """Scale at which the correlation equals ``level`` (0.05) at ``target_range``.

    GC and the squared exponential are inverted analytically; Matern and GW
    use a bracketed root search on the unit-scale correlation.
    """
    family = Family(family)
    if not target_range > 0:
        raise ValidationError("practical range must be positive")
    if family is Family.GC:
        delta, lam = shape1, shape2
        return target_range / (level ** (-delta / lam) - 1.0) ** (1.0 / delta)
    if family is Family.SQEXP:
        return target_range**2 / -math.log(level)
    unit = CovarianceModel(family, 1.0, 1.0, shape1, shape2, dim)

    def resid(t):
        return correlation(unit, t) - level

    lo, hi = 0.0, 1.0
    if family is Family.MT:
        while resid(hi) > 0:
            hi *= 2.0
            if hi > 1e8:
                raise CalibrationError("could not bracket the practical range")
    if not (resid(lo) > 0 > resid(hi)):
        raise CalibrationError("practical range root not bracketed")
    t_star = optimize.brentq(resid, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    return target_range / t_star


def fractal_dimension(model):
    """Fractal dimension of sample paths, in ``[d, d+1)``."""
    d = model.dim
    fam = model.family
    if fam is Family.GC:
        return d + 1 - model.shape1 / 2 if model.shape1 < 2 else float(d)
    if fam is Family.MT:
        return d + 1 - model.shape1 if model.shape1 < 1 else float(d)
    if fam is Family.GW:
        return d + 0.5 - model.shape1 if model.shape1 < 0.5 else float(d)
    return float(d)


def hurst_coefficient(model) -> Optional[float]:
    """Hurst coefficient ``lambda/2`` for long-memory GC models, else None."""
    if model.family is Family.GC and model.shape2 <= model.dim:
        return model.shape2 / 2
    return None


def sqexp_limit_check(family, shapes, scale=1.0, r=None, delta=2.0, mu=None, dim=1):
    """Sup-distance between rescaled models and ``exp(-r^2/scale)``.

    For each shape value in ``shapes`` (lambda for GC, nu for Matern, kappa
    for GW) the model is rescaled so that it tends to the squared
    exponential as the shape grows:

    * GC: ``delta = 2``, ``gamma = sqrt(lambda * scale / 2)``;
    * Matern: ``alpha = sqrt(scale) / (2 sqrt(nu))``;
    * GW: ``beta = sqrt(scale) (mu + 2 kappa + 1) G(kappa + 1/2) / (2 G(kappa + 1))``
      with ``mu(kappa)`` defaulting to ``kappa + (d+1)/2 + 2``.  scipy's
      ``hyp2f1`` loses accuracy beyond ``kappa`` of about 50.

    An infinite shape returns 0 (the limit itself).

    Returns
    -------
    ndarray
        One sup-distance per shape value, over the grid ``r`` (default
        ``linspace(0, 2, 401)``).
    """
    family = Family(family)
    r = np.linspace(0.0, 2.0, 401) if r is None else np.asarray(r, dtype=float)
    target = np.exp(-r * r / scale)
    out = []
    for s in shapes:
        if math.isinf(s):
            out.append(0.0)
            continue
        if family is Family.GC:
            m = generalized_cauchy(delta, s, math.sqrt(s * scale / 2), dim=dim)
        elif family is Family.MT:
            m = matern(s, math.sqrt(scale) / (2 * math.sqrt(s)), dim=dim)
        elif family is Family.GW:
            mu_k = s + (dim + 1) / 2 + 2 if mu is None else mu(s)
            g = math.sqrt(scale) * (mu_k + 2 * s + 1) * math.exp(special.gammaln(s + 0.5) - special.gammaln(s + 1)) / 2
            m = generalized_wendland(mu_k, s, g, dim=dim)
        else:
            raise ValidationError("the squared exponential has no shape sequence")
        out.append(float(np.max(np.abs(correlation(m, r) - target))))
    return np.array(out)

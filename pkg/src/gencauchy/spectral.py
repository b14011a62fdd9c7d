"""Isotropic spectral densities and a reference Hankel-transform quadrature.

The isotropic spectral density of a radial covariance ``phi`` in ``R^d`` is

    phi_hat(z) = z^(1-d/2) / (2 pi)^(d/2) int_0^inf u^(d/2) J_(d/2-1)(u z) phi(u) du.

Closed forms exist for the Matern and generalized Wendland families.  The
generalized Cauchy density has no closed form; it is evaluated from a real
integral obtained after substituting ``u = gamma t``:

    phi_hat(z) = sigma^2 z^(-d) / (2^(d/2-1) pi^(d/2+1))
                 int_0^inf K_((d-2)/2)(u) u^(d/2) h(u / (gamma z)) du,

    h(s) = rho(s)^(-lambda/delta) sin(lambda theta(s) / delta),

where ``rho`` and ``theta`` are the modulus and argument of
``1 + s^delta cos(pi delta/2) + i s^delta sin(pi delta/2)``.  The Bessel
factor decays like ``exp(-u)``, so the integral is truncated at
``u = GC_TRUNCATION`` (``K`` is below ``1e-18`` of its peak there).

For large ``z`` the GC density follows ``rho_tail z^(-(d+delta))``.  The
switch from quadrature to that leading term happens at a crossover in
``gamma z`` found by scanning a logarithmic grid for the first point beyond
which both agree within ``GC_TAIL_AGREEMENT``.  The crossover depends only
on ``(delta, lambda, d)`` and is cached per triple.  When ``delta`` is small
or close to 2 the agreement is reached only at very large ``gamma z`` (or
never within the grid, in which case quadrature is always used).
"""

from dataclasses import dataclass
import functools
import math
import warnings

import numpy as np
from scipy import integrate, special

from . import specfun
from .errors import DomainError, EvaluationError, OracleFailure

GC_TRUNCATION = 60.0
GC_TAIL_AGREEMENT = 5e-3
GC_CALIBRATION_GRID = np.logspace(0.0, 9.0, 73)

METHODS = ("closed_form", "series", "oscillatory_quadrature", "tail_expansion")


@dataclass(frozen=True)
class SpectralEvaluation:
    z: float
    density: float
    method: str
    est_rel_error: float


def _result(z, value, method, rel_err, full_output):
    if full_output:
        return SpectralEvaluation(float(z), float(value), method, float(rel_err))
    return float(value)


# -- Matern -------------------------------------------------------------------

def matern_spectral(z, nu, alpha, variance=1.0, d=1, full_output=False):
    """Matern spectral density
    ``G(nu+d/2) sigma^2 alpha^d / (pi^(d/2) G(nu) (1 + alpha^2 z^2)^(nu+d/2))``.
    """
    if z < 0:
        raise DomainError("frequency must be non-negative")
    log_c = special.gammaln(nu + d / 2) - special.gammaln(nu) - (d / 2) * math.log(math.pi)
    value = variance * alpha**d * math.exp(log_c - (nu + d / 2) * math.log1p((alpha * z) ** 2))
    return _result(z, value, "closed_form", 4 * np.finfo(float).eps, full_output)


# -- generalized Wendland -------------------------------------------------------

def gw_constant(mu, kappa, d):
    """The constant ``L`` of the GW spectral density (finite at ``kappa = 0``)."""
    lam = (d + 1) / 2 + kappa
    # G(kappa)/G(2 kappa) written as 2 G(kappa+1)/G(2 kappa+1) so kappa = 0 works
    log_l = (special.gammaln(2 * kappa + mu + 1) + math.log(2.0) + special.gammaln(kappa + 1)
             - special.gammaln(2 * kappa + 1) + special.gammaln(2 * kappa + d)
             - d * math.log(2.0) - (d / 2) * math.log(math.pi) - special.gammaln(kappa + d / 2)
             - special.gammaln(mu + 2 * lam))
    return math.exp(log_l)


def gw_spectral(z, mu, kappa, beta, variance=1.0, d=1, full_output=False):
    """GW spectral density
    ``sigma^2 L beta^d 1F2(lam; lam + mu/2, lam + mu/2 + 1/2; -(z beta)^2/4)``
    with ``lam = (d+1)/2 + kappa``.

    The hypergeometric factor is summed as a power series (in extended
    precision once cancellation sets in) and replaced by its large-argument
    expansion past :func:`specfun.asymptotic_crossover`; see
    :func:`specfun.hyper_1f2`.
    """
    if z < 0:
        raise DomainError("frequency must be non-negative")
    lam = (d + 1) / 2 + kappa
    a, b, c = lam, lam + mu / 2, lam + mu / 2 + 0.5
    arg = -((z * beta) ** 2) / 4
    res = specfun.hyper_1f2(a, b, c, arg, full_output=True)
    value = variance * gw_constant(mu, kappa, d) * beta**d * res.value
    tail = -arg >= specfun.asymptotic_crossover(a, b, c) \
        and specfun._asymptotic(a, b, c, -arg) is not None
    method = "tail_expansion" if tail else "series"
    rel = res.est_abs_error / abs(res.value) if res.value else math.inf
    return _result(z, value, method, rel, full_output)


def gw_tail_constant(mu, kappa, beta, variance=1.0, d=1):
    """Constant ``c`` with ``gw_spectral(z) ~ c (z beta)^(-(d+1+2 kappa))``."""
    lam = (d + 1) / 2 + kappa
    b, c = lam + mu / 2, lam + mu / 2 + 0.5
    log_h = (special.gammaln(b) + special.gammaln(c) - special.gammaln(b - lam)
             - special.gammaln(c - lam) + lam * math.log(4.0))
    return variance * gw_constant(mu, kappa, d) * beta**d * math.exp(log_h)


# -- generalized Cauchy ------------------------------------------------------------

def gc_tail_constant(delta, lam, gamma, variance=1.0, d=1):
    """Leading tail coefficient
    ``2^delta sigma^2 lam G((delta+d)/2) G((delta+2)/2) sin(pi delta/2) / (delta gamma^delta pi^(d/2+1))``.
    """
    log_abs = (delta * math.log(2.0) + special.gammaln((delta + d) / 2)
               + special.gammaln((delta + 2) / 2) - delta * math.log(gamma)
               - (d / 2 + 1) * math.log(math.pi) - math.log(delta))
    return variance * lam * math.sin(math.pi * delta / 2) * math.exp(log_abs)


def gc_spectral_tail(z, delta, lam, gamma, variance=1.0, d=1):
    """Leading-order GC density ``rho_tail z^(-(d+delta))``."""
    if z <= 0:
        raise DomainError("frequency must be positive")
    return gc_tail_constant(delta, lam, gamma, variance, d) * z ** (-(d + delta))


def _h(s, delta, lam):
    sd = s**delta
    re = 1.0 + sd * math.cos(math.pi * delta / 2)
    im = sd * math.sin(math.pi * delta / 2)
    log_mod = 0.5 * math.log(re * re + im * im) if sd > 1e-8 else math.log1p(2 * sd * math.cos(math.pi * delta / 2) + sd * sd) / 2
    return math.exp(-(lam / delta) * log_mod) * math.sin((lam / delta) * math.atan2(im, re))


def _gc_quad(s, delta, lam, d, epsrel=1e-11):
    """``int_0^T K_((d-2)/2)(u) u^(d/2) h(u/s) du`` and its error estimate."""
    order = (d - 2) / 2
    if d == 1:
        kern = lambda u: math.sqrt(math.pi / 2) * math.exp(-u)
    elif d == 3:
        kern = lambda u: math.sqrt(math.pi / 2) * math.exp(-u) * u
    else:
        kern = lambda u: special.kv(order, u) * u ** (d / 2) if u > 0 else 0.0

    def f(u):
        return kern(u) * _h(u / s, delta, lam)

    pts = sorted({p for p in (s, 1.0, 10.0 * s) if 0 < p < GC_TRUNCATION})
    val, err = integrate.quad(f, 0.0, GC_TRUNCATION, points=pts, limit=500,
                              epsabs=0.0, epsrel=epsrel)
    return val, err


def _gc_prefactor(z, variance, d):
    return variance * z ** (-d) / (2 ** (d / 2 - 1) * math.pi ** (d / 2 + 1))


@functools.lru_cache(maxsize=256)
def gc_tail_crossover(delta, lam, d=1):
    """Crossover in ``gamma z`` beyond which the leading tail term is used.

    First point of :data:`GC_CALIBRATION_GRID` after which the quadrature and
    the tail agree within :data:`GC_TAIL_AGREEMENT` at every remaining grid
    point; ``inf`` if there is none.
    """
    ok = []
    for s in GC_CALIBRATION_GRID:
        val, _ = _gc_quad(s, delta, lam, d)
        quad = _gc_prefactor(s, 1.0, d) * val
        tail = gc_spectral_tail(s, delta, lam, 1.0, 1.0, d)
        ok.append(abs(quad / tail - 1.0) <= GC_TAIL_AGREEMENT)
    for i in range(len(ok)):
        if all(ok[i:]):
            return float(GC_CALIBRATION_GRID[i])
    return math.inf


def gc_spectral(z, delta, lam, gamma, variance=1.0, d=1, method="auto", full_output=False):
    """Generalized Cauchy spectral density at ``z > 0``.

    Parameters
    ----------
    method : {"auto", "quadrature", "tail"}
        ``"auto"`` integrates below :func:`gc_tail_crossover` and uses the
        leading tail term above it.

    Raises
    ------
    EvaluationError
        If the quadrature misses its ``1e-6`` relative target.
    """
    if z <= 0:
        raise DomainError("frequency must be positive")
    if not 0 < delta < 2:
        raise DomainError("the GC density integral needs delta in (0, 2)")
    if lam <= d:
        warnings.warn("GC density with lam <= d diverges as z -> 0; small-z values carry no accuracy claim",
                      RuntimeWarning, stacklevel=2)
    s = gamma * z
    if method == "tail" or (method == "auto" and s >= gc_tail_crossover(delta, lam, d)):
        value = gc_spectral_tail(z, delta, lam, gamma, variance, d)
        return _result(z, value, "tail_expansion", GC_TAIL_AGREEMENT, full_output)
    if method not in ("auto", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    val, err = _gc_quad(s, delta, lam, d)
    value = _gc_prefactor(z, variance, d) * val
    rel = err / abs(val) if val else math.inf
    if not rel <= 1e-6:
        raise EvaluationError(f"GC density quadrature reached only {rel:.2e} relative accuracy", partial=value)
    return _result(z, value, "oscillatory_quadrature", rel, full_output)


# -- reference Hankel quadrature ----------------------------------------------------

def _kernel(d, z):
    """``u -> u^(d/2) J_(d/2-1)(u z)`` with the elementary forms for odd ``d``."""
    if d == 1:
        c = math.sqrt(2 / (math.pi * z))
        return lambda u: c * math.cos(u * z)
    if d == 3:
        c = math.sqrt(2 / (math.pi * z))
        return lambda u: c * u * math.sin(u * z)
    return lambda u: u * special.j0(u * z)


def _kernel_zeros(d, z, count):
    k = np.arange(1, count + 1)
    if d == 1:
        return (k - 0.5) * math.pi / z
    if d == 3:
        return k * math.pi / z
    return special.jn_zeros(0, count) / z


def wynn_epsilon(partial_sums):
    """Wynn epsilon extrapolation of a sequence of partial sums.

    Returns the last even-column estimate and the difference from the
    previous one as an error indicator.
    """
    s = [float(v) for v in partial_sums]
    n = len(s)
    prev = [0.0] * (n + 1)
    cur = s[:]
    best, best_prev = s[-1], s[-2] if n > 1 else s[-1]
    col = 0
    while len(cur) > 1:
        nxt = []
        for i in range(len(cur) - 1):
            diff = cur[i + 1] - cur[i]
            if diff == 0.0:
                nxt.append(math.inf)
            else:
                nxt.append(prev[i + 1] + 1.0 / diff)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0 and cur and all(math.isfinite(v) for v in cur[-2:]):
            best = cur[-1]
            best_prev = cur[-2] if len(cur) > 1 else best_prev
    return best, abs(best - best_prev)


def heavy_tail_radius(lam, gamma, d, tol):
    """Radius ``R`` with ``int_R^inf u^(d/2) (u/gamma)^(-lam) du <= tol``.

    The bound uses ``|J| <= 1`` and needs ``lam > d/2 + 1``.
    """
    p = lam - d / 2 - 1
    if p <= 0:
        raise DomainError("the truncation bound needs lam > d/2 + 1")
    return (gamma**lam / (p * tol)) ** (1.0 / p)


def hankel_oracle(phi, z, d=1, r_max=None, tol=1e-8, max_intervals=4000):
    """Reference quadrature of the isotropic spectral density of ``phi``.

    The range is split at the zeros of the Bessel kernel and each piece is
    integrated adaptively.  With ``r_max`` given the integral stops there (use
    it for compactly supported ``phi``, or with :func:`heavy_tail_radius` for
    a bounded truncation).  Otherwise the partial sums over kernel half-periods
    are extrapolated with the Wynn epsilon algorithm.

    Parameters
    ----------
    phi : callable
        Scalar covariance function of the distance.
    tol : float
        Relative error target.

    Raises
    ------
    OracleFailure
        If the estimated error exceeds ``tol``; the caller must treat the
        comparison as inconclusive.
    """
    if z <= 0:
        raise DomainError("frequency must be positive")
    kern = _kernel(d, z)
    pref = z ** (1 - d / 2) / (2 * math.pi) ** (d / 2)
    f = lambda u: kern(u) * phi(u)
    zeros = _kernel_zeros(d, z, max_intervals)
    edges = [0.0]
    for x in zeros:
        if r_max is not None and x >= r_max:
            break
        edges.append(float(x))
    if r_max is not None:
        edges.append(float(r_max))
    total = 0.0
    qerr = 0.0
    partial = []
    for a, b in zip(edges[:-1], edges[1:]):
        with warnings.catch_warnings():
            # roundoff is reflected in the returned error estimate
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            v, e = integrate.quad(f, a, b, epsabs=0.0, epsrel=1e-13, limit=200)
        total += v
        qerr += e
        partial.append(total)
        if r_max is None and len(partial) >= 40 and len(partial) % 20 == 0:
            est, xerr = wynn_epsilon(partial[-40:])
            if xerr <= 0.1 * tol * abs(est):
                total = est
                qerr += xerr
                break
    else:
        if r_max is None:
            est, xerr = wynn_epsilon(partial[-40:])
            total, qerr = est, qerr + xerr
    value = pref * total
    err = pref * qerr
    if not err <= tol * abs(value):
        raise OracleFailure(f"oracle error {err:.2e} exceeds tolerance", partial=value, error_estimate=err)
    return value


# -- equivalence integral -----------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceIntegral:
    """Evidence about finiteness of ``int_c^inf z^(d-1) ((rho1 - rho0)/rho0)^2 dz``.

    ``tail_exponent`` is the log-log slope of the integrand over the last
    decade below ``z_max``; an exponent below ``-1`` is consistent with a
    finite integral.  This is a heuristic, not a decision procedure.
    """

    integral_estimate: float
    tail_exponent: float

    @property
    def consistent_with_finiteness(self):
        return self.tail_exponent < -1.0

    @property
    def classification(self):
        return "finite" if self.consistent_with_finiteness else "divergent"


def equivalence_integral(rho0_hat, rho1_hat, c, d, z_max, points_per_decade=16):
    """Integrate the spectral equivalence criterion on ``[c, z_max]``.

    Uses Simpson's rule in ``log z`` and a least-squares slope of
    ``log integrand`` against ``log z`` on ``[z_max/10, z_max]``.

    Raises
    ------
    DomainError
        If either density is not positive somewhere on the grid.
    """
    if not 0 < c < z_max:
        raise DomainError("need 0 < c < z_max")
    decades = math.log10(z_max / c)
    m = max(9, int(math.ceil(decades * points_per_decade)) | 1)
    zs = np.geomspace(c, z_max, m)
    f = np.empty(m)
    for i, z in enumerate(zs):
        r0, r1 = rho0_hat(z), rho1_hat(z)
        if not (r0 > 0 and r1 > 0):
            raise DomainError(f"non-positive spectral density at z={z:g}")
        f[i] = z ** (d - 1) * ((r1 - r0) / r0) ** 2
    integral = float(integrate.simpson(f * zs, x=np.log(zs)))
    last = zs >= z_max / 10 * (1 - 1e-12)
    fz, zz = f[last], zs[last]
    keep = fz > 0
    if keep.sum() < 2:
        slope = -math.inf
    else:
        slope = float(np.polyfit(np.log(zz[keep]), np.log(fz[keep]), 1)[0])
    return EquivalenceIntegral(integral, slope)

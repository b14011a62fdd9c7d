"""Microergodic parameters and compatibility of Gaussian measures.

Two zero-mean Gaussian processes on a bounded domain are *compatible* when
their laws are equivalent, which makes the misspecified predictor
asymptotically as good as the true one.  For the families in this package
the known sufficient conditions reduce to equal smoothness plus equality of
a single microergodic parameter, up to family-specific constants:

* GC vs GC (``d/2 < delta < 2``): ``sigma^2 lam / gamma^delta`` equal.
* Matern vs GC (``nu = delta/2``): ``sigma_m^2 / alpha^(2 nu) = B(delta) sigma^2 lam / gamma^delta``.
* GW vs GC (``kappa = (delta-1)/2``, ``mu > d + kappa + 1/2``, ``delta >= 1``):
  ``W(kappa, mu) sigma_w^2 mu / beta^(2 kappa + 1) = B(delta) sigma^2 lam / gamma^delta``.
* Matern vs GW (``nu = kappa + 1/2``, ``mu > d + kappa + 1/2``):
  ``sigma_m^2 / alpha^(2 nu) = W(kappa, mu) sigma_w^2 mu / beta^(2 kappa + 1)``.

with ``B(delta) = G(delta/2)^2 sin(pi delta/2) / (2^(1-delta) pi)`` and
``W(kappa, mu) = G(2 kappa + mu + 1) / G(mu + 1)``.  Outside the parameter
ranges where these conditions are known to apply the verdict is
``not_covered``, which is distinct from ``incompatible``.

Equalities are tested with a relative tolerance (``1e-12`` by default).
"""

from dataclasses import dataclass, field
import math
from typing import Tuple
import warnings

from scipy import special

from .covmodels import CovarianceModel, Family, generalized_wendland, matern
from .errors import ValidationError

DEFAULT_RTOL = 1e-12

COMPATIBLE = "compatible"
INCOMPATIBLE = "incompatible"
NOT_COVERED = "not_covered"


@dataclass(frozen=True)
class MicroergodicValue:
    value: float
    family: Family
    formula: str


@dataclass(frozen=True)
class Condition:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class CompatibilityVerdict:
    """Outcome of a compatibility check with the named conditions it evaluated."""

    status: str
    conditions: Tuple[Condition, ...] = field(default_factory=tuple)
    dimension_constraint: str = ""

    @property
    def compatible(self):
        return self.status == COMPATIBLE

    @property
    def failed(self):
        return [c.name for c in self.conditions if not c.passed]

    def __str__(self):
        lines = [f"verdict: {self.status}"]
        for c in self.conditions:
            mark = "pass" if c.passed else "FAIL"
            lines.append(f"  [{mark}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        if self.dimension_constraint:
            lines.append(f"  range: {self.dimension_constraint}")
        return "\n".join(lines)


def _verdict(conditions, coverage, constraint):
    conditions = tuple(conditions)
    if not coverage.passed:
        status = NOT_COVERED
    elif all(c.passed for c in conditions):
        status = COMPATIBLE
    else:
        status = INCOMPATIBLE
    return CompatibilityVerdict(status, (coverage,) + conditions, constraint)


def _close(a, b, rtol):
    return abs(a - b) <= rtol * max(abs(a), abs(b))


def bridge_constant(delta):
    """``G(delta/2)^2 sin(pi delta/2) / (2^(1-delta) pi)``, equal to 1 at ``delta = 1``."""
    return math.exp(2 * special.gammaln(delta / 2) - (1 - delta) * math.log(2.0)) \
        * math.sin(math.pi * delta / 2) / math.pi


def wendland_factor(kappa, mu):
    """``G(2 kappa + mu + 1) / G(mu + 1)``."""
    return math.exp(special.gammaln(2 * kappa + mu + 1) - special.gammaln(mu + 1))


def microergodic(model):
    """Microergodic parameter of a GC, Matern or GW model."""
    fam = model.family
    if fam is Family.GC:
        v = model.variance * model.shape2 / model.scale**model.shape1
        return MicroergodicValue(v, fam, "sigma2*lam/gamma^delta")
    if fam is Family.MT:
        v = model.variance / model.scale ** (2 * model.shape1)
        return MicroergodicValue(v, fam, "sigma2/alpha^(2nu)")
    if fam is Family.GW:
        v = model.variance * model.shape2 / model.scale ** (2 * model.shape1 + 1)
        return MicroergodicValue(v, fam, "sigma2*mu/beta^(2kappa+1)")
    raise ValidationError("the squared exponential has no single microergodic parameter")


def _order(m0, m1, first, second):
    if m0.family is first and m1.family is second:
        return m0, m1
    if m1.family is first and m0.family is second:
        return m1, m0
    raise ValidationError(f"expected a {first.value} and a {second.value} model")


def _dim(d, *models):
    return models[0].dim if d is None else int(d)


def gc_gc_compatible(m0, m1, d=None, rtol=DEFAULT_RTOL):
    """Compatibility of two GC models with the same ``delta``."""
    m0, m1 = _order(m0, m1, Family.GC, Family.GC)
    d = _dim(d, m0)
    constraint = "equal delta with d/2 < delta < 2, d in {1, 2, 3}"
    if m0.shape1 != m1.shape1:
        cov = Condition("coverage", False, "unequal delta is outside the known result")
        return _verdict([], cov, constraint)
    delta = m0.shape1
    cov = Condition("coverage", d in (1, 2, 3) and d / 2 < delta < 2, f"delta={delta:g}, d={d}")
    a, b = microergodic(m0).value, microergodic(m1).value
    eq = Condition("microergodic_equal", _close(a, b, rtol), f"{a:.12g} vs {b:.12g}")
    return _verdict([eq], cov, constraint)


def mt_gc_compatible(mt, gc, d=None, rtol=DEFAULT_RTOL):
    """Compatibility of a Matern and a GC model."""
    mt, gc = _order(mt, gc, Family.MT, Family.GC)
    d = _dim(d, gc)
    delta, nu = gc.shape1, mt.shape1
    cov = Condition("coverage", d / 2 < delta < 2, f"delta={delta:g}, d={d}")
    smooth = Condition("smoothness_match", _close(nu, delta / 2, rtol), f"nu={nu:g}, delta/2={delta / 2:g}")
    lhs = microergodic(mt).value
    rhs = bridge_constant(delta) * microergodic(gc).value
    eq = Condition("microergodic_equal", _close(lhs, rhs, rtol), f"{lhs:.12g} vs {rhs:.12g}")
    return _verdict([smooth, eq], cov, "nu = delta/2 with d/2 < delta < 2")


def gw_gc_compatible(gw, gc, d=None, rtol=DEFAULT_RTOL):
    """Compatibility of a GW and a GC model."""
    gw, gc = _order(gw, gc, Family.GW, Family.GC)
    d = _dim(d, gc)
    delta, kappa, mu = gc.shape1, gw.shape1, gw.shape2
    cov = Condition("coverage", d / 2 < delta < 2 and delta >= 1, f"delta={delta:g}, d={d}")
    smooth = Condition("smoothness_match", _close(kappa, (delta - 1) / 2, rtol) or kappa == (delta - 1) / 2,
                       f"kappa={kappa:g}, (delta-1)/2={(delta - 1) / 2:g}")
    shape = Condition("mu_bound", mu > d + kappa + 0.5, f"mu={mu:g}, d+kappa+1/2={d + kappa + 0.5:g}")
    lhs = wendland_factor(kappa, mu) * microergodic(gw).value
    rhs = bridge_constant(delta) * microergodic(gc).value
    eq = Condition("microergodic_equal", _close(lhs, rhs, rtol), f"{lhs:.12g} vs {rhs:.12g}")
    return _verdict([smooth, shape, eq], cov, "kappa = (delta-1)/2, mu > d+kappa+1/2, max(d/2, 1) <= delta < 2")


def mt_gw_compatible(mt, gw, d=None, rtol=DEFAULT_RTOL):
    """Compatibility of a Matern and a GW model."""
    mt, gw = _order(mt, gw, Family.MT, Family.GW)
    d = _dim(d, gw)
    nu, kappa, mu = mt.shape1, gw.shape1, gw.shape2
    cov = Condition("coverage", nu >= 0.5 and kappa >= 0, f"nu={nu:g}, kappa={kappa:g}")
    smooth = Condition("smoothness_match", _close(nu, kappa + 0.5, rtol), f"nu={nu:g}, kappa+1/2={kappa + 0.5:g}")
    shape = Condition("mu_bound", mu > d + kappa + 0.5, f"mu={mu:g}, d+kappa+1/2={d + kappa + 0.5:g}")
    lhs = microergodic(mt).value
    rhs = wendland_factor(kappa, mu) * microergodic(gw).value
    eq = Condition("microergodic_equal", _close(lhs, rhs, rtol), f"{lhs:.12g} vs {rhs:.12g}")
    return _verdict([smooth, shape, eq], cov, "nu = kappa + 1/2, mu > d+kappa+1/2")


def compatible(m0, m1, d=None, rtol=DEFAULT_RTOL):
    """Dispatch to the predicate for the pair's families (argument order is free)."""
    fams = {m0.family, m1.family}
    if fams == {Family.GC}:
        return gc_gc_compatible(m0, m1, d, rtol)
    if fams == {Family.MT, Family.GC}:
        return mt_gc_compatible(m0, m1, d, rtol)
    if fams == {Family.GW, Family.GC}:
        return gw_gc_compatible(m0, m1, d, rtol)
    if fams == {Family.MT, Family.GW}:
        return mt_gw_compatible(m0, m1, d, rtol)
    if fams == {Family.MT}:
        d = _dim(d, m0)
        cov = Condition("coverage", d in (1, 2, 3), f"d={d}")
        smooth = Condition("smoothness_match", m0.shape1 == m1.shape1, f"nu={m0.shape1:g} vs {m1.shape1:g}")
        a, b = microergodic(m0).value, microergodic(m1).value
        eq = Condition("microergodic_equal", _close(a, b, rtol), f"{a:.12g} vs {b:.12g}")
        return _verdict([smooth, eq], cov, "equal nu, d in {1, 2, 3}")
    if fams == {Family.GW}:
        d = _dim(d, m0)
        same = m0.shape1 == m1.shape1 and m0.shape2 == m1.shape2
        cov = Condition("coverage", same, "equal kappa and mu")
        a, b = microergodic(m0).value, microergodic(m1).value
        eq = Condition("microergodic_equal", _close(a, b, rtol), f"{a:.12g} vs {b:.12g}")
        return _verdict([eq], cov, "equal kappa and mu")
    cov = Condition("coverage", False, f"no result for {m0.family.value} vs {m1.family.value}")
    return _verdict([], cov, "")


def equivalent_gw_support(gc, kappa=None, mu=None, variance=1.0, d=None):
    """Support ``beta`` of the GW model compatible with ``gc``.

    ``kappa`` defaults to ``(delta-1)/2`` and ``mu`` to ``2 + kappa``.  Warns
    when ``mu <= d + kappa + 1/2``, where compatibility is not guaranteed.
    """
    if gc.family is not Family.GC:
        raise ValidationError("equivalent_gw_support needs a GC model")
    d = _dim(d, gc)
    delta = gc.shape1
    if kappa is None:
        kappa = (delta - 1) / 2
    if mu is None:
        mu = 2 + kappa
    if kappa < 0 or not math.isclose(kappa, (delta - 1) / 2, rel_tol=DEFAULT_RTOL, abs_tol=1e-15):
        raise ValidationError("kappa must equal (delta-1)/2 and be non-negative")
    if not variance > 0:
        raise ValidationError("variance must be positive")
    if mu <= d + kappa + 0.5:
        warnings.warn("mu <= d + kappa + 1/2: compatibility with the GC model is not guaranteed", stacklevel=2)
    bracket = (microergodic(gc).value / (variance * mu)) * bridge_constant(delta) / wendland_factor(kappa, mu)
    return bracket ** (-1.0 / (2 * kappa + 1))


def equivalent_gw_model(gc, kappa=None, mu=None, variance=1.0, d=None):
    """The GW model with the support from :func:`equivalent_gw_support`."""
    d = _dim(d, gc)
    kappa = (gc.shape1 - 1) / 2 if kappa is None else kappa
    mu = 2 + kappa if mu is None else mu
    beta = equivalent_gw_support(gc, kappa, mu, variance, d)
    return generalized_wendland(mu, kappa, beta, variance, dim=d)


def equivalent_mt_scale(gc, variance=1.0):
    """Matern scale ``alpha`` (with ``nu = delta/2``) compatible with ``gc``."""
    if gc.family is not Family.GC:
        raise ValidationError("equivalent_mt_scale needs a GC model")
    delta = gc.shape1
    if not gc.dim / 2 < delta < 2:
        raise ValidationError("need d/2 < delta < 2")
    target = bridge_constant(delta) * microergodic(gc).value
    return (variance / target) ** (1.0 / delta)


def equivalent_mt_model(gc, variance=1.0):
    return matern(gc.shape1 / 2, equivalent_mt_scale(gc, variance), variance, dim=gc.dim)


def sqexp_spectral_ratio_limit(a0, a1):
    """Limit of the spectral-density ratio of two squared-exponential models.

    Returns ``"zero"`` when ``alpha1 > alpha0``, ``"infinite"`` when
    ``alpha1 < alpha0`` and the variance ratio ``sigma1^2 / sigma0^2`` when
    the scales coincide.
    """
    if a0.family is not Family.SQEXP or a1.family is not Family.SQEXP:
        raise ValidationError("both models must be squared exponential")
    if a1.scale > a0.scale:
        return "zero"
    if a1.scale < a0.scale:
        return "infinite"
    return a1.variance / a0.variance

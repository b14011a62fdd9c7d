"""Real-valued special functions used by the covariance and spectral formulas.

Gamma, beta and the Bessel functions are thin, domain-checked wrappers over
:mod:`scipy.special`.  The generalized hypergeometric function ``1F2`` is
implemented here because the spectral density of the generalized Wendland
model needs it at large negative arguments, where the plain power series
cancels catastrophically.

``hyper_1f2`` evaluation regimes (``z`` is the argument):

* ``z >= 0`` or ``-z <= FLOAT_SERIES_LIMIT``: power series in double
  precision with Kahan-compensated summation.
* ``FLOAT_SERIES_LIMIT < -z`` below the asymptotic crossover: the same series
  summed in extended precision (``mpmath`` numbers), with the working
  precision raised by the number of digits lost to cancellation,
  roughly ``2*sqrt(-z)/ln(10)``.
* ``-z >= asymptotic_crossover(a, b, c)``: the large-argument expansion
  ``1F2(a; b, c; -X) = H(X) + E(X)`` where ``H`` is the algebraic series
  ``G(b)G(c)/(G(b-a)G(c-a)) X^-a 3F0(a, 1+a-b, 1+a-c;; -1/X)`` and ``E`` is
  the oscillatory series ``2 Re[exp(iy) sum_k e_k (iy)^(nu-k)]`` with
  ``y = 2 sqrt(X)``, ``nu = a - b - c + 1/2``.  Both series are divergent and
  are truncated at their smallest term; the result is accepted only when
  that term is below ``1e-15`` of the value, otherwise the extended-precision
  series is used instead.
"""

from dataclasses import dataclass
import math

import mpmath
import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError

FLOAT_SERIES_LIMIT = 16.0
ASYMPTOTIC_MIN_ARG = 400.0
MAX_TERMS = 20000
# relative error bound the large-argument expansion must meet to be used
ASYMPTOTIC_ACCEPT_RTOL = 1e-12

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SpecFunResult:
    value: float
    est_abs_error: float


def ln_gamma(x):
    """Natural log of the gamma function for ``x > 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or np.any(~np.isfinite(x)):
        raise DomainError("ln_gamma requires finite x > 0")
    out = special.gammaln(x)
    return float(out) if out.ndim == 0 else out


def beta(a, b):
    """Beta function ``B(a, b) = G(a) G(b) / G(a + b)``, evaluated in log space."""
    if a <= 0 or b <= 0:
        raise DomainError("beta requires a > 0 and b > 0")
    return math.exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))


def pochhammer(q, k):
    """Rising factorial ``(q)_k = G(q + k) / G(q)``."""
    k = int(k)
    if k < 0:
        raise DomainError("pochhammer requires k >= 0")
    if k <= 64:
        out = 1.0
        for j in range(k):
            out *= q + j
        return out
    return float(special.poch(q, k))


def bessel_k(nu, x):
    """Modified Bessel function of the second kind ``K_nu(x)``, ``x > 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("bessel_k requires x > 0")
    out = special.kv(abs(nu), x)
    return float(out) if out.ndim == 0 else out


def log_bessel_k(nu, x):
    """``log K_nu(x)`` that stays finite for very large orders.

    Uses the exponentially scaled routine when it is representable and the
    Debye uniform expansion (three correction terms) otherwise.
    """
    nu = abs(float(nu))
    x = float(x)
    if x <= 0:
        raise DomainError("log_bessel_k requires x > 0")
    kve = special.kve(nu, x)
    if np.isfinite(kve) and kve > 0 and nu < 200:
        return math.log(kve) - x
    z = x / nu
    sq = math.sqrt(1.0 + z * z)
    t = 1.0 / sq
    eta = sq + math.log(z / (1.0 + sq))
    t2 = t * t
    u1 = t * (3.0 - 5.0 * t2) / 24.0
    u2 = t2 * (81.0 - 462.0 * t2 + 385.0 * t2 * t2) / 1152.0
    u3 = t * t2 * (30375.0 - 369603.0 * t2 + 765765.0 * t2**2 - 425425.0 * t2**3) / 414720.0
    corr = 1.0 - u1 / nu + u2 / nu**2 - u3 / nu**3
    return 0.5 * math.log(math.pi / (2.0 * nu)) - nu * eta - 0.5 * math.log(sq) + math.log(corr)


def bessel_j(nu, x):
    """Bessel function of the first kind ``J_nu(x)`` for ``x >= 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("bessel_j requires x >= 0")
    if nu < -0.5:
        raise DomainError("bessel_j requires nu >= -1/2")
    out = special.jv(nu, x)
    return float(out) if out.ndim == 0 else out


def _is_nonpositive_int(v):
    return v <= 0 and float(v).is_integer()


def hyper_1f2_partial_sums(a, b, c, z, nterms):
    """First ``nterms`` partial sums of the ``1F2`` power series (double precision)."""
    out = np.empty(nterms)
    term = 1.0
    total = 0.0
    for k in range(nterms):
        total += term
        out[k] = total
        term *= (a + k) * z / ((b + k) * (c + k) * (k + 1))
    return out


def _series_float(a, b, c, z):
    total = 0.0
    comp = 0.0
    term = 1.0
    biggest = 1.0
    for k in range(MAX_TERMS):
        # Kahan summation
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        biggest = max(biggest, abs(term))
        if term == 0.0:
            return total, biggest * _EPS * (k + 1)
        term *= (a + k) * z / ((b + k) * (c + k) * (k + 1))
        if not math.isfinite(term):
            raise OverflowError("1F2 series overflowed")
        if abs(term) < 1e-17 * abs(total) and k > abs(z) ** 0.34:
            err = abs(term) + 4 * _EPS * biggest + _EPS * abs(total)
            return total, err
    raise ConvergenceError("1F2 series did not converge", partial=total, count=MAX_TERMS)


def _series_mp(a, b, c, z):
    lost = 2.0 * math.sqrt(abs(z)) / math.log(10.0)
    dps = int(25 + lost)
    with mpmath.workdps(dps):
        ma, mb, mc, mz = mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(c), mpmath.mpf(z)
        term = mpmath.mpf(1)
        total = mpmath.mpf(0)
        tiny = mpmath.mpf(10) ** (-20)
        for k in range(MAX_TERMS):
            total += term
            if term == 0:
                break
            term = term * (ma + k) * mz / ((mb + k) * (mc + k) * (k + 1))
            if k > math.sqrt(abs(z)) and abs(term) < tiny * abs(total):
                break
        else:
            raise ConvergenceError("1F2 series did not converge", partial=float(total), count=MAX_TERMS)
        value = float(total)
    return value, abs(value) * 4 * _EPS


def asymptotic_crossover(a, b, c):
    """Smallest ``X = -z`` at which the large-argument expansion is attempted."""
    scale = abs(a) + abs(b) + abs(c)
    return max(ASYMPTOTIC_MIN_ARG, 4.0 * scale * scale)


def _asymptotic(a, b, c, X):
    """Large-argument expansion of ``1F2(a; b, c; -X)``; returns (value, err) or None."""
    # algebraic part
    pref = special.rgamma(b - a) * special.rgamma(c - a)
    h_sum = 0.0
    h_err = 0.0
    if pref != 0.0:
        term = 1.0
        prev = math.inf
        for k in range(200):
            if abs(term) > prev:
                break
            h_sum += term
            prev = abs(term)
            term *= (a + k) * (1 + a - b + k) * (1 + a - c + k) / ((k + 1) * -X)
            if abs(term) < 1e-18 * abs(h_sum):
                prev = abs(term)
                break
        h_err = prev
        logp = special.gammaln(b) + special.gammaln(c) - a * math.log(X)
        h_scale = pref * math.exp(logp) * special.gammasgn(b) * special.gammasgn(c)
        h_sum *= h_scale
        h_err *= abs(h_scale)
    # oscillatory part; coefficients from the formal solution of the 1F2 ODE
    nu = a - b - c + 0.5
    b1 = 2 * b - 2
    b2 = 2 * c - 2
    y = 2.0 * math.sqrt(X)
    e_prev2, e_prev = 0.0, 1.0
    terms = [1.0]
    mags = [1.0]
    for k in range(1, 400):
        m1 = nu - k + 1
        m0 = nu - k + 2
        c1 = (m1 + b1) * (m1 + b2) + (m1 + 1) * (2 * m1 + 1 + b1 + b2)
        c0 = m0 * (m0 + b1) * (m0 + b2)
        ek = (c1 * e_prev + c0 * e_prev2) / (2 * k)
        mag = abs(ek) * y ** (-k)
        if mag > mags[-1] and k > 2:
            break
        terms.append(ek)
        mags.append(mag)
        e_prev2, e_prev = e_prev, ek
        if mag < 1e-18:
            break
    s = 0j
    for k, ek in enumerate(terms):
        s += ek * (1j) ** (-k) * y ** (-k)
    phase = y + 0.5 * math.pi * nu
    osc = 2.0 * (s * complex(math.cos(phase), math.sin(phase))).real
    log_e = (special.gammaln(b) + special.gammaln(c) - special.gammaln(a)
             + nu * math.log(y) - 0.5 * math.log(2 * math.pi) - (nu + 0.5) * math.log(2.0))
    e_scale = math.exp(log_e) * special.gammasgn(a) * special.gammasgn(b) * special.gammasgn(c)
    e_val = osc * e_scale
    # phase rounding scales with y
    e_err = (2.0 * mags[-1] + 4 * _EPS * y * abs(s)) * abs(e_scale)
    value = h_sum + e_val
    err = h_err + e_err + 4 * _EPS * (abs(h_sum) + abs(e_val))
    if err > ASYMPTOTIC_ACCEPT_RTOL * abs(value) + 1e-300:
        return None
    return value, err


def hyper_1f2(a, b, c, z, full_output=False):
    """Generalized hypergeometric function ``1F2(a; b, c; z)`` for real arguments.

    Parameters
    ----------
    a, b, c : float
        Parameters; ``b`` and ``c`` must not be non-positive integers.
    z : float
        Argument.
    full_output : bool
        If True return a :class:`SpecFunResult` with an absolute error estimate.

    Raises
    ------
    ConvergenceError
        If the series hits the term cap before converging.
    """
    if _is_nonpositive_int(b) or _is_nonpositive_int(c):
        raise DomainError("1F2 lower parameters must not be non-positive integers")
    z = float(z)
    if z == 0.0:
        res = (1.0, 0.0)
    elif z > 0 or -z <= FLOAT_SERIES_LIMIT or _is_nonpositive_int(a):
        res = _series_float(a, b, c, z)
    else:
        res = None
        if -z >= asymptotic_crossover(a, b, c):
            res = _asymptotic(a, b, c, -z)
        if res is None:
            res = _series_mp(a, b, c, z)
    if full_output:
        return SpecFunResult(float(res[0]), float(res[1]))
    return float(res[0])

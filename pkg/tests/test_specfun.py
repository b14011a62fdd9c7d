import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy import special

from gencauchy import specfun
from gencauchy.errors import DomainError

mpmath.mp.dps = 40


# -- gamma family -------------------------------------------------------------------

def test_ln_gamma_elementary_points():
    assert specfun.ln_gamma(1.0) == 0.0
    assert_allclose(specfun.ln_gamma(0.5), 0.5 * math.log(math.pi), rtol=1e-15)


def test_ln_gamma_against_extended_precision():
    assert_allclose(specfun.ln_gamma(3.1), float(mpmath.loggamma(3.1)), rtol=1e-14)
    assert_allclose(specfun.ln_gamma(3.1), 0.787375, rtol=1e-6)


def test_ln_gamma_vectorizes():
    x = np.array([0.25, 1.0, 7.5, 120.0])
    expected = [float(mpmath.loggamma(v)) for v in x]
    assert_allclose(specfun.ln_gamma(x), expected, rtol=1e-14)


@pytest.mark.parametrize("x", [0.0, -1.0, math.inf, math.nan])
def test_ln_gamma_rejects_bad_input(x):
    with pytest.raises(DomainError):
        specfun.ln_gamma(x)


def test_beta_elementary_points():
    assert_allclose(specfun.beta(1, 1), 1.0, rtol=1e-15)
    assert_allclose(specfun.beta(0.5, 0.5), math.pi, rtol=1e-14)


def test_beta_wendland_argument():
    kappa, mu = 0.1, 2.1
    assert_allclose(specfun.beta(2 * kappa, mu + 1), float(mpmath.beta(0.2, 3.1)), rtol=1e-13)


@given(st.floats(0.05, 50), st.floats(0.05, 50))
def test_beta_is_symmetric(a, b):
    assert_allclose(specfun.beta(a, b), specfun.beta(b, a), rtol=1e-14)


def test_pochhammer_values():
    assert specfun.pochhammer(7.3, 0) == 1.0
    assert specfun.pochhammer(3, 2) == 12.0
    assert_allclose(specfun.pochhammer(0.5, 3), 1.875, rtol=1e-15)
    assert_allclose(specfun.pochhammer(1.25, 100), float(mpmath.rf(1.25, 100)), rtol=1e-12)
    with pytest.raises(DomainError):
        specfun.pochhammer(1.0, -1)


# -- Bessel functions ---------------------------------------------------------------

def test_bessel_k_half_integer_closed_form():
    assert_allclose(specfun.bessel_k(0.5, 1.0), math.sqrt(math.pi / 2) * math.exp(-1), rtol=1e-14)
    assert_allclose(specfun.bessel_k(0.5, 1.0), 0.4610685, rtol=1e-7)


def test_bessel_k_recurrence_oracle():
    # K_{3/2} from K_{-1/2} = K_{1/2} via K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu
    x = 2.0
    k_half = math.sqrt(math.pi / (2 * x)) * math.exp(-x)
    k_three_halves = k_half + (2 * 0.5 / x) * k_half
    assert_allclose(specfun.bessel_k(1.5, x), k_three_halves, rtol=1e-14)
    assert_allclose(k_three_halves, math.sqrt(math.pi / 4) * math.exp(-2) * 1.5, rtol=1e-14)


def test_bessel_k_logarithmic_singularity():
    val = specfun.bessel_k(0, 0.1)
    assert val > 0
    assert_allclose(val, -math.log(0.05) - np.euler_gamma, rtol=5e-3)


@given(st.floats(0.0, 30.0), st.floats(0.01, 50.0))
def test_bessel_k_even_in_order(nu, x):
    assert specfun.bessel_k(nu, x) == specfun.bessel_k(-nu, x)


@pytest.mark.parametrize("nu,x", [(0.3, 0.5), (2.5, 10.0), (50.0, 3.0), (250.0, 40.0), (1000.0, 900.0)])
def test_log_bessel_k_against_extended_precision(nu, x):
    expected = float(mpmath.log(mpmath.besselk(nu, x)))
    assert_allclose(specfun.log_bessel_k(nu, x), expected, rtol=1e-10)


def test_bessel_j_values():
    assert specfun.bessel_j(0, 0) == 1.0
    assert abs(specfun.bessel_j(0.5, math.pi)) < 1e-15
    # ascending series summed to convergence
    series = sum((-1) ** k / (math.factorial(k) * math.factorial(k + 1)) * 0.5 ** (2 * k + 1) for k in range(30))
    assert_allclose(specfun.bessel_j(1, 1.0), series, rtol=1e-14)
    assert_allclose(series, 0.4400506, rtol=1e-7)


def test_bessel_domain_errors():
    with pytest.raises(DomainError):
        specfun.bessel_k(1.0, 0.0)
    with pytest.raises(DomainError):
        specfun.bessel_j(1.0, -1.0)


# -- 1F2 ----------------------------------------------------------------------------

def test_hyper_1f2_elementary_points():
    assert specfun.hyper_1f2(0.3, 1.7, 2.2, 0.0) == 1.0
    # with a = b the function reduces to 0F1(; c; z) = G(c) z^((1-c)/2) I_{c-1}(2 sqrt z)
    assert_allclose(specfun.hyper_1f2(1, 1, 1, 1.0), special.iv(0, 2.0), rtol=1e-15)
    assert_allclose(specfun.hyper_1f2(1, 1, 1, 1.0), 2.2795853023360673, rtol=1e-15)


def test_hyper_1f2_wendland_argument():
    lam, mu = 1.6, 2.1
    b = lam + mu / 2
    expected = float(mpmath.hyp1f2(lam, b, b + 0.5, -1))
    assert_allclose(specfun.hyper_1f2(lam, b, b + 0.5, -1.0), expected, rtol=1e-14)


@pytest.mark.parametrize("z", [-5.0, -80.0, -300.0, -2.5e3, -4e4, -1e6, -1e9])
@pytest.mark.parametrize("a,b,c", [(1.6, 2.65, 3.15), (0.5, 1.5, 2.0), (2.1, 4.0, 4.5)])
def test_hyper_1f2_all_regimes_against_mpmath(a, b, c, z):
    expected = float(mpmath.hyp1f2(a, b, c, z))
    res = specfun.hyper_1f2(a, b, c, z, full_output=True)
    scale = max(abs(expected), abs(z) ** (-a))
    assert abs(res.value - expected) <= 1e-9 * scale
    assert res.est_abs_error >= 0


def test_hyper_1f2_positive_argument_grows():
    assert_allclose(specfun.hyper_1f2(0.7, 1.3, 2.9, 40.0), float(mpmath.hyp1f2(0.7, 1.3, 2.9, 40)), rtol=1e-12)


def test_hyper_1f2_terminating_series():
    # a = -2 terminates after three terms
    z = -7.0
    b, c = 1.5, 2.5
    expected = 1 + (-2) * z / (b * c) + (-2) * (-1) * z**2 / (b * (b + 1) * c * (c + 1) * 2)
    assert_allclose(specfun.hyper_1f2(-2, b, c, z), expected, rtol=1e-14)


def test_hyper_1f2_partial_sums_converge_to_value():
    sums = specfun.hyper_1f2_partial_sums(1.2, 2.0, 3.0, -4.0, 60)
    assert_allclose(sums[-1], specfun.hyper_1f2(1.2, 2.0, 3.0, -4.0), rtol=1e-14)
    assert sums[0] == 1.0


def test_hyper_1f2_rejects_pole_parameters():
    with pytest.raises(DomainError):
        specfun.hyper_1f2(1.0, -2.0, 1.0, 0.5)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0.5, 4.0), st.floats(0.5, 4.0), st.floats(-1e5, -1.0))
def test_hyper_1f2_matches_extended_precision_property(a, b, c, z):
    expected = float(mpmath.hyp1f2(a, b, c, z))
    scale = max(abs(expected), abs(z) ** (-a), 1e-300)
    assert abs(specfun.hyper_1f2(a, b, c, z) - expected) <= 1e-8 * scale

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from gencauchy import covmodels as cm
from gencauchy import equivalence as eq
from gencauchy import predict as pr
from gencauchy import simulate as sim
from gencauchy.errors import ValidationError

GC = cm.generalized_cauchy(1.2, 5.0, 0.2875, variance=1.4)
GW = cm.generalized_wendland(2.1, 0.1, 0.2047)
MT = cm.matern(0.6, 0.09)


def brute_force_mse(true, working, points, s0):
    """Direct matrix-inverse evaluation of the misspecified kriging error."""
    locs = cm.LocationSet(points)
    Rt, Rw = cm.covariance_matrix(true, locs), cm.covariance_matrix(working, locs)
    ct, cw = cm.correlation_vector(true, locs, s0), cm.correlation_vector(working, locs, s0)
    w = np.linalg.inv(Rw) @ cw
    return true.variance * (1 - 2 * w @ ct + w @ Rt @ w)


# -- weights ---------------------------------------------------------------------------

def test_single_site_weight_is_correlation():
    locs = cm.LocationSet(np.array([[0.3]]))
    w = pr.blup_weights(GC, locs, [0.45])
    assert_allclose(w, [cm.correlation(GC, 0.15)], rtol=1e-14)


def test_observed_site_interpolates_exactly():
    locs = sim.sample_uniform_locations(25, 1, seed=1)
    values = np.arange(25.0)
    s0 = locs.points[7]
    assert_array_equal(pr.blup_weights(GW, locs, s0), np.eye(25)[7])
    assert pr.predict(GW, locs, values, s0) == 7.0
    assert pr.mse_true(GC, locs, s0) == 0.0
    assert pr.mse_misspecified(GC, GW, locs, s0) == 0.0


def test_equidistant_sites_get_equal_weights():
    c, r = np.array([0.5, 0.5]), 0.2
    angles = np.array([0.0, 2 * np.pi / 3, 4 * np.pi / 3])
    pts = c + r * np.column_stack([np.cos(angles), np.sin(angles)])
    w = pr.blup_weights(cm.generalized_cauchy(1.0, 3.0, 0.2, dim=2), cm.LocationSet(pts), c)
    assert_allclose(w, np.full(3, w[0]), rtol=1e-12)


# -- mean squared errors -----------------------------------------------------------------

def test_mse_without_data_is_variance():
    assert pr.mse_true(GC, None, [0.5]) == GC.variance
    assert pr.mse_true(GC, np.empty((0, 1)), [0.5]) == GC.variance


def test_mse_single_site_closed_forms():
    locs = cm.LocationSet(np.array([[0.2]]))
    s0, r = [0.35], 0.15
    pt, pw = cm.correlation(GC, r), cm.correlation(GW, r)
    assert_allclose(pr.mse_true(GC, locs, s0), GC.variance * (1 - pt**2), rtol=1e-13)
    miss = pr.mse_misspecified(GC, GW, locs, s0)
    assert_allclose(miss, GC.variance * (1 - 2 * pw * pt + pw**2), rtol=1e-13)
    assert miss >= pr.mse_true(GC, locs, s0)


def test_mse_matches_brute_force():
    locs = sim.sample_uniform_locations(60, 1, seed=2)
    s0 = [0.4321]
    assert_allclose(pr.mse_misspecified(GC, GW, locs, s0), brute_force_mse(GC, GW, locs.points, s0), rtol=1e-8)
    assert_allclose(pr.mse_misspecified(GW, MT, locs, s0), brute_force_mse(GW, MT, locs.points, s0), rtol=1e-8)


def test_working_equal_to_true_reduces_exactly():
    locs = sim.sample_uniform_locations(40, 1, seed=3)
    s0 = [0.777]
    a = pr.mse_misspecified(GC, GC.with_variance(9.0), locs, s0)
    assert_allclose(a, pr.mse_true(GC, locs, s0), rtol=1e-12)
    assert pr.ratio_u1(GC, GC, locs, s0) == 1.0
    assert pr.ratio_u2(GC, GC, locs, s0) == 1.0


def test_ratio_u1_ignores_working_variance():
    locs = sim.sample_uniform_locations(30, 1, seed=4)
    s0 = [0.51]
    assert_allclose(pr.ratio_u1(GC, GW, locs, s0), pr.ratio_u1(GC, GW.with_variance(5.0), locs, s0), rtol=1e-13)


def test_role_swap_by_argument_order():
    locs = sim.sample_uniform_locations(30, 1, seed=5)
    s0 = [0.51]
    swapped = pr.mse_misspecified(GW, GC, locs, s0) / pr.mse_true(GW, locs, s0)
    assert_allclose(pr.ratio_u1(GW, GC, locs, s0), swapped, rtol=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(2, 40), st.sampled_from(["gc-gw", "gc-mt", "mt-gw", "gw-gc", "gc-gc"]),
       st.floats(0.0, 1.0))
def test_misspecified_error_never_below_optimal(seed, n, pair, s0):
    models = {"gc": GC, "gw": GW, "mt": MT}
    a, b = pair.split("-")
    true, working = models[a], models[b]
    if a == b:
        working = cm.generalized_cauchy(1.2, 5.0, 0.1)
    locs = sim.sample_uniform_locations(n, 1, seed=seed, pool_size=200)
    assert pr.mse_misspecified(true, working, locs, [s0]) >= pr.mse_true(true, locs, [s0]) * (1 - 1e-9) - 1e-13


# -- cache and assessment ----------------------------------------------------------------

def test_factor_cache_reuses_factors():
    locs = sim.sample_uniform_locations(30, 1, seed=6)
    cache = pr.FactorCache(locs)
    first = cache.factor(GC)
    assert cache.factor(GC.with_variance(3.0)) is first
    a = pr.mse_misspecified(GC, GW, locs, [0.3], cache)
    assert_allclose(a, pr.mse_misspecified(GC, GW, locs, [0.3]), rtol=1e-14)


def test_factor_cache_refuses_other_locations():
    cache = pr.FactorCache(sim.sample_uniform_locations(10, 1, seed=7))
    with pytest.raises(ValidationError):
        pr.mse_true(GC, sim.sample_uniform_locations(10, 1, seed=8), [0.3], cache)


def test_assess_bundles_consistent_values():
    locs = sim.sample_uniform_locations(30, 1, seed=9)
    z = sim.simulate_gp(locs, GC, seed=9).values
    s0 = [0.123]
    res = pr.assess(GC, GW, locs, s0, z)
    assert_allclose(res.prediction, pr.predict(GW, locs, z, s0), rtol=1e-14)
    assert_allclose(res.u1, pr.ratio_u1(GC, GW, locs, s0), rtol=1e-14)
    assert_allclose(res.u2, pr.ratio_u2(GC, GW, locs, s0), rtol=1e-14)
    assert set(res.mse_under) == {"true", "working", "misspecified"}


def test_model_key_ignores_variance_and_handles_nan():
    assert pr.model_key(GC) == pr.model_key(GC.with_variance(2.0))
    sq = cm.squared_exponential(0.3)
    assert pr.model_key(sq) == pr.model_key(cm.squared_exponential(0.3))
    assert not math.isnan(hash(pr.model_key(sq)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0.0, 1.0))
def test_extra_observation_never_increases_error(seed, s0):
    pts = sim.sample_uniform_locations(31, 1, seed=seed, pool_size=200).points
    small, big = cm.LocationSet(pts[:30]), cm.LocationSet(pts)
    assert pr.mse_true(GC, big, [s0]) <= pr.mse_true(GC, small, [s0]) + 1e-12


@pytest.mark.slow
@pytest.mark.filterwarnings("ignore:mu <= d")
def test_ratios_move_toward_one_as_sample_grows():
    gc = cm.generalized_cauchy(1.2, 5.0, cm.practical_range_to_scale("GC", 0.3, 1.2, 5.0), dim=2)
    gw = eq.equivalent_gw_model(gc, variance=1.0, d=2)
    site = [0.26, 0.48]
    medians = []
    for n in (50, 100, 500):
        u = [pr.ratio_u1(gc, gw, sim.sample_uniform_locations(n, 2, seed=3, pool_size=5000, replicate=r), site)
             for r in range(15)]
        medians.append(abs(np.median(u) - 1))
    assert medians[2] < medians[0]

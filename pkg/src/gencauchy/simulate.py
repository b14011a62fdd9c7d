"""Seeded Gaussian-process simulation.

Every random quantity comes from a Philox counter-based stream keyed by
``(seed, replicate, purpose)``, so replicate ``i`` sees the same numbers no
matter which worker runs it or in what order.  Standard normals are the
inverse normal CDF of open-interval uniforms built from the raw 64-bit
output (53 random bits), which avoids rejection steps and keeps the mapping
from counter to variate fixed.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special

from .covmodels import CovarianceModel, LocationSet, covariance_matrix
from .errors import ValidationError
from . import linalg

NOISE = 0
LOCATIONS = 1
SUBSET = 2


def stream(seed, replicate=0, purpose=NOISE):
    """Independent Philox generator for ``(seed, replicate, purpose)``."""
    ss = np.random.SeedSequence([int(seed), int(replicate), int(purpose)])
    return np.random.Generator(np.random.Philox(ss))


def uniforms(gen, size):
    """Uniforms in the open interval (0, 1) from the raw generator output."""
    raw = gen.bit_generator.random_raw(size)
    return ((raw >> np.uint64(11)).astype(float) + 0.5) * 2.0**-53


def standard_normals(gen, size):
    return special.ndtri(uniforms(gen, size))


@dataclass(frozen=True)
class GpSample:
    values: np.ndarray
    locations: LocationSet
    model: CovarianceModel
    seed: int
    replicate: int = 0


def location_pool(pool_size, d, seed):
    """``pool_size`` uniform points in ``[0, 1]^d`` determined by ``seed``."""
    u = uniforms(stream(seed, 0, LOCATIONS), pool_size * d)
    return u.reshape(pool_size, d)


def sample_uniform_locations(n, d, seed, pool_size=None, replicate=0):
    """Draw ``n`` of ``pool_size`` uniform points without replacement.

    The pool depends only on ``seed``; the subset depends on
    ``(seed, replicate)``.  With ``n == pool_size`` the whole pool is
    returned in its original order.
    """
    pool_size = n if pool_size is None else pool_size
    if n < 1 or n > pool_size:
        raise ValidationError("need 1 <= n <= pool_size")
    pool = location_pool(pool_size, d, seed)
    if n == pool_size:
        return LocationSet(pool)
    keys = uniforms(stream(seed, replicate, SUBSET), pool_size)
    idx = np.argsort(keys, kind="stable")[:n]
    return LocationSet(pool[idx])


def simulate_gp(locs, model, seed, replicate=0, factor=None, nugget=0.0):
    """One realization ``Z = L eta`` with ``L L' = sigma^2 R + nugget I``.

    Parameters
    ----------
    factor : linalg.CholeskyFactor, optional
        Precomputed factor of the covariance (not correlation) matrix; reused
        across replicates sharing locations and model.
    nugget : float
        Explicit diagonal addition, 0 by default and never applied silently.
    """
    if factor is None:
        factor = covariance_factor(model, locs, nugget)
    eta = standard_normals(stream(seed, replicate, NOISE), locs.n)
    return GpSample(factor.L @ eta, locs, model, int(seed), int(replicate))


def covariance_factor(model, locs, nugget=0.0):
    C = covariance_matrix(model, locs, scaled=True)
    if nugget:
        C[np.diag_indices_from(C)] += nugget
    return linalg.cholesky(C)


def simulate_paired(locs, model_a, model_b, seed, replicate=0):
    """Two realizations driven by the same normal vector."""
    eta = standard_normals(stream(seed, replicate, NOISE), locs.n)
    La = covariance_factor(model_a, locs)
    Lb = La if model_b == model_a else covariance_factor(model_b, locs)
    return (GpSample(La.L @ eta, locs, model_a, int(seed), int(replicate)),
            GpSample(Lb.L @ eta, locs, model_b, int(seed), int(replicate)))

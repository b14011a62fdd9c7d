"""Dense symmetric positive-definite algebra built on a single Cholesky factor.

Factorization uses LAPACK ``dpotrf`` (blocked, no pivoting) and reports the
failing pivot instead of adding jitter.  Callers decide what a failure means:
the estimator treats it as an inadmissible scale value.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.linalg import lapack, solve_triangular

from .errors import NotPositiveDefinite


@dataclass(frozen=True)
class CholeskyFactor:
    """Lower-triangular ``L`` with ``A = L @ L.T``."""

    L: np.ndarray

    @property
    def n(self):
        return self.L.shape[0]

    def reconstruct(self):
        return self.L @ self.L.T


def cholesky(A):
    """Cholesky factor of a symmetric positive-definite matrix.

    Only the lower triangle of ``A`` is read.

    Raises
    ------
    NotPositiveDefinite
        With the zero-based index of the first non-positive pivot.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("cholesky needs a square matrix")
    if A.shape[0] == 0:
        raise ValueError("cholesky needs a non-empty matrix")
    L, info = lapack.dpotrf(A, lower=1, clean=1, overwrite_a=0)
    if info > 0:
        raise NotPositiveDefinite(info - 1)
    if info < 0:
        raise ValueError(f"dpotrf rejected argument {-info}")
    L.setflags(write=False)
    return CholeskyFactor(L)


def _check(factor, b):
    b = np.asarray(b, dtype=float)
    if b.shape[0] != factor.n:
        raise ValueError(f"dimension mismatch: factor is {factor.n}, vector is {b.shape[0]}")
    return b


def forward(factor, b):
    """``L^{-1} b``."""
    return solve_triangular(factor.L, _check(factor, b), lower=True, check_finite=False)


def solve(factor, b):
    """``A^{-1} b`` via forward then back substitution."""
    y = forward(factor, b)
    return solve_triangular(factor.L, y, lower=True, trans="T", check_finite=False)


def log_det(factor):
    """``log |A| = 2 sum log L_ii``."""
    return 2.0 * float(np.sum(np.log(np.diag(factor.L))))


def quad_form(factor, z):
    """``z' A^{-1} z`` as the squared norm of ``L^{-1} z``."""
    y = forward(factor, z)
    return float(y @ y)


def try_cholesky(A):
    """Like :func:`cholesky` but returns None on a failed pivot."""
    try:
        return cholesky(A)
    except NotPositiveDefinite:
        return None


def hadamard_bound(A):
    """Upper bound ``sum log A_ii`` on ``log |A|`` (zero for correlation matrices)."""
    return float(np.sum(np.log(np.diag(A)))) if np.all(np.diag(A) > 0) else math.inf

"""Exception types shared across the package."""

import numpy as np


class DomainError(ValueError):
    """Argument outside the mathematical domain of a function."""


class ValidationError(ValueError):
    """Model parameters, location sets or configs that fail validation."""


class ConvergenceError(ArithmeticError):
    """A series or iteration stopped before meeting its tolerance.

    Attributes
    ----------
    partial : float
        Best estimate available when the iteration stopped.
    count : int
        Number of terms or iterations consumed.
    """

    def __init__(self, message, partial=float("nan"), count=0):
        super().__init__(message)
        self.partial = partial
        self.count = count


class EvaluationError(ArithmeticError):
    """Quadrature that did not reach its error target."""

    def __init__(self, message, partial=float("nan")):
        super().__init__(message)
        self.partial = partial


class OracleFailure(EvaluationError):
    """Reference quadrature whose error estimate exceeded the caller's tolerance.

    Callers must treat this as inconclusive, never as agreement.
    """

    def __init__(self, message, partial=float("nan"), error_estimate=float("inf")):
        super().__init__(message, partial)
        self.error_estimate = error_estimate


class CalibrationError(RuntimeError):
    """Root-finding for a scale parameter could not bracket a solution."""


class NotPositiveDefinite(np.linalg.LinAlgError):
    """Cholesky factorization hit a non-positive pivot.

    Attributes
    ----------
    pivot : int
        Zero-based index of the failing pivot.
    """

    def __init__(self, pivot):
        super().__init__(f"matrix is not positive definite (pivot {pivot})")
        self.pivot = pivot


class FitError(RuntimeError):
    """Likelihood maximization failed at every evaluated point."""

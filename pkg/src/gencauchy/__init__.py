"""Generalized Cauchy covariance models: spectral densities, compatibility
with Matern and generalized Wendland models, likelihood estimation and
kriging under misspecification."""

__version__ = "0.1.0"

from .errors import (CalibrationError, ConvergenceError, DomainError, EvaluationError,
                     FitError, NotPositiveDefinite, OracleFailure, ValidationError)
from .covmodels import (CovarianceModel, Family, LocationSet, correlation, covariance,
                        covariance_matrix, generalized_cauchy, generalized_wendland, matern,
                        practical_range_to_scale, squared_exponential)
from .spectral import gc_spectral, gw_spectral, hankel_oracle, matern_spectral
from .equivalence import (CompatibilityVerdict, compatible, equivalent_gw_model,
                          equivalent_gw_support, equivalent_mt_model, microergodic)
from .simulate import sample_uniform_locations, simulate_gp, simulate_paired
from .estimate import fit_scale, log_likelihood, microergodic_ci, normalized_stat
from .predict import FactorCache, assess, mse_misspecified, mse_true, ratio_u1, ratio_u2

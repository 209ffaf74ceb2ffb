"""Distributions used by the hierarchical model"""

from .inverse_gamma import InverseGammaParams, inverse_gamma_logpdf, sample_inverse_gamma
from .normal import cholesky_factor, normal_logpdf, sample_mvn, sample_mvn_precision
from .conditional import log_density_bound, log_unnormalized_z_conditional

__all__ = [
    "InverseGammaParams",
    "inverse_gamma_logpdf",
    "sample_inverse_gamma",
    "cholesky_factor",
    "normal_logpdf",
    "sample_mvn",
    "sample_mvn_precision",
    "log_density_bound",
    "log_unnormalized_z_conditional",
]

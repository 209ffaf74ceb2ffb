"""
Conjugate Conditionals

Full conditionals of the coefficients (multivariate normal) and of the three
variances (inverse-Gamma) given the rest of the chain state.
"""

from typing import Tuple

import numpy as np
from scipy import linalg

from ..distributions.inverse_gamma import InverseGammaParams, sample_inverse_gamma
from ..distributions.normal import cholesky_factor, sample_mvn_precision
from ..model.geometry import ModelConfig, build_h_matrix
from ..model.priors import Hyperparams
from .state import ChainState


def _precision_system(state: ChainState, y: np.ndarray, config: ModelConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Precision (H^T H + (sigma_w^2/sigma_x^2) I) / sigma_w^2 and H^T y / sigma_w^2"""
    h = build_h_matrix(state.z, config)
    ridge = state.sigma_w2 / state.sigma_x2
    precision = (h.T @ h + ridge * np.eye(config.K)) / state.sigma_w2
    return precision, h.T @ np.asarray(y, dtype=float) / state.sigma_w2


def coefficient_posterior(
    state: ChainState,
    y: np.ndarray,
    config: ModelConfig,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Mean and covariance of x given z, the variances and y.

    Returns:
        (mu_x, Lambda_x) with Lambda_x = sigma_w^2 (H^T H + (sigma_w^2/sigma_x^2) I)^-1
    """
    precision, rhs = _precision_system(state, y, config)
    factor = (cholesky_factor(precision, "Coefficient precision"), True)
    mean = linalg.cho_solve(factor, rhs)
    cov = linalg.cho_solve(factor, np.eye(config.K))
    return mean, 0.5 * (cov + cov.T)


def sample_coefficients(
    state: ChainState,
    y: np.ndarray,
    config: ModelConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw x from its normal conditional through the precision factor"""
    precision, rhs = _precision_system(state, y, config)
    draw, _ = sample_mvn_precision(precision, rhs, rng)
    return draw


def posterior_variance_params(
    state: ChainState,
    y: np.ndarray,
    hyper: Hyperparams,
    config: ModelConfig,
) -> Tuple[InverseGammaParams, InverseGammaParams, InverseGammaParams]:
    """
    Inverse-Gamma conditionals of sigma_x^2, sigma_z^2 and sigma_w^2.

    IG(alpha_x + K/2, beta_x + |x|^2/2), IG(alpha_z + N/2, beta_z + |z|^2/2)
    and IG(alpha_w + N/2, beta_w + |y - H(z) x|^2/2). The raw hyperparameters
    are used, so Jeffreys mode (all zero) works as long as the sums are positive.
    """
    x = np.asarray(state.x, dtype=float)
    z = np.asarray(state.z, dtype=float)
    residual = np.asarray(y, dtype=float) - build_h_matrix(z, config) @ x
    return (
        InverseGammaParams(hyper.alpha_x + config.K / 2, hyper.beta_x + float(x @ x) / 2),
        InverseGammaParams(hyper.alpha_z + config.N / 2, hyper.beta_z + float(z @ z) / 2),
        InverseGammaParams(hyper.alpha_w + config.N / 2, hyper.beta_w + float(residual @ residual) / 2),
    )


def sample_variances(
    state: ChainState,
    y: np.ndarray,
    hyper: Hyperparams,
    config: ModelConfig,
    rng: np.random.Generator,
) -> Tuple[float, float, float]:
    """Draw (sigma_x^2, sigma_z^2, sigma_w^2) from their conditionals, in that order"""
    params = posterior_variance_params(state, y, hyper, config)
    return tuple(float(sample_inverse_gamma(p, rng)) for p in params)  # type: ignore[return-value]

"""
E-Step

Posterior expectations of h_n h_n^T / sigma_w^2 and h_n / sigma_w^2 given
y_n and the previous coefficients, by the same hybrid rule that evaluates
the marginal likelihood used to normalise them.
"""

from dataclasses import dataclass
from typing import Any, Tuple

import numpy as np
from scipy.special import logsumexp

from ..errors import LikelihoodUnderflowError
from ..model.geometry import ModelConfig, h_rows
from ..model.priors import Hyperparams
from ..quadrature.hybrid import (
    HybridQuadrature,
    known_variance_hybrid,
    log_likelihood_terms,
    prior_hybrid,
)
from .config import EmConfig, VarianceMode


def em_hybrid(hyper: Hyperparams, em_cfg: EmConfig) -> HybridQuadrature:
    """The hybrid rule for the configured variance mode"""
    if em_cfg.variance_mode is VarianceMode.KNOWN:
        return known_variance_hybrid(em_cfg.sigma_z2, em_cfg.sigma_w2, em_cfg.J3, em_cfg.z_range)
    return prior_hybrid(hyper, em_cfg.J1, em_cfg.J2, em_cfg.J3, em_cfg.z_range)


@dataclass(frozen=True)
class Expectations:
    """Per-sample E-step terms for a batch of indices"""
    indices: np.ndarray
    A: np.ndarray
    b: np.ndarray
    log_likelihood: np.ndarray


def batch_expectations(
    y_values: Any,
    indices: Any,
    x_prev: np.ndarray,
    hybrid: HybridQuadrature,
    config: ModelConfig,
) -> Expectations:
    """
    E-step terms for several samples at once.

    Raises:
        LikelihoodUnderflowError: If p(y_n | x_prev) underflows for some n
    """
    indices = np.atleast_1d(np.asarray(indices))
    y_values = np.atleast_1d(np.asarray(y_values, dtype=float))
    h = h_rows(indices[:, None], hybrid.flat_z_nodes, config)
    terms = log_likelihood_terms(y_values, indices, x_prev, hybrid, config, h=h)
    log_p = logsumexp(terms, axis=(-2, -1))
    bad = ~np.isfinite(log_p)
    if np.any(bad):
        n = int(indices[bad][0])
        raise LikelihoodUnderflowError(f"p(y_n | x) underflowed for n={n}", n=n)

    posterior = np.exp(terms - log_p[:, None, None])
    # Posterior weight of each z node divided by sigma_w^2, summed over the sigma_w^2 rule
    c = np.einsum("bij,i->bj", posterior, 1.0 / hybrid.sigma_w2.nodes)
    A = np.einsum("bj,bjk,bjl->bkl", c, h, h)
    A = 0.5 * (A + np.swapaxes(A, -1, -2))
    b = y_values[:, None] * np.einsum("bj,bjk->bk", c, h)
    return Expectations(indices, A, b, log_p)


def em_expectations(
    y_n: float,
    n: int,
    x_prev: np.ndarray,
    hyper: Hyperparams,
    config: ModelConfig,
    em_cfg: EmConfig,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    A_n = E[h_n h_n^T / sigma_w^2 | y_n, x_prev] and b_n = E[h_n / sigma_w^2 | y_n, x_prev] y_n.

    Returns:
        (A_n, b_n) of shapes (K, K) and (K,)
    """
    result = batch_expectations([y_n], [n], x_prev, em_hybrid(hyper, em_cfg), config)
    return result.A[0], result.b[0]

"""
Hybrid Quadrature

Three-level rule over (sigma_w^2, sigma_z^2, z_n): inverse-Gamma rules for
the two variances and, for every sigma_z^2 node, a jitter rule whose nodes
depend on that node. Used for the marginal likelihood p(y_n | x), the LMMSE
expectations and the EM E-step.
"""

from dataclasses import dataclass
from typing import Any, Optional

import numpy as np
from scipy.special import logsumexp

from ..distributions.normal import normal_logpdf
from ..errors import ConfigError
from ..model.geometry import ModelConfig, h_rows
from ..model.priors import Hyperparams
from .rules import (
    DEFAULT_Z_RANGE,
    QuadratureRule,
    RuleKind,
    inverse_gamma_rule,
    jitter_rule,
    point_mass_rule,
)

DEFAULT_J1 = 9
DEFAULT_J2 = 9
DEFAULT_J3 = 129


@dataclass(frozen=True)
class HybridQuadrature:
    """
    Flattened hybrid rule.

    Attributes:
        sigma_w2: Rule over sigma_w^2 (J1 nodes)
        sigma_z2: Rule over sigma_z^2 (J2 nodes)
        z_nodes: (J2, J3) jitter nodes, row j2 built for sigma_z2 node j2
        z_weights: (J2, J3) jitter weights, each row summing to ~1
        inner_kind: Family of the jitter rule
    """
    sigma_w2: QuadratureRule
    sigma_z2: QuadratureRule
    z_nodes: np.ndarray
    z_weights: np.ndarray
    inner_kind: RuleKind

    @property
    def shape(self):
        return (self.sigma_w2.size,) + self.z_nodes.shape

    @property
    def joint_z_log_weights(self) -> np.ndarray:
        """log(w_j2 w_j3) flattened over (j2, j3)"""
        return (self.sigma_z2.log_weights[:, None] + np.log(self.z_weights)).ravel()

    @property
    def flat_z_nodes(self) -> np.ndarray:
        return self.z_nodes.ravel()


def _jitter_block(sigma_z2_rule: QuadratureRule, J3: int, e_sigma_z2: float, z_range: float):
    # A zero variance node only occurs as a lone point mass, so rows share one size
    rows = [
        jitter_rule(float(s), J3, e_sigma_z2, z_range) if s > 0 else point_mass_rule(0.0)
        for s in sigma_z2_rule.nodes
    ]
    nodes = np.stack([rule.nodes for rule in rows])
    weights = np.stack([rule.weights for rule in rows])
    return nodes, weights, rows[0].kind


def build_hybrid(
    sigma_w2_rule: QuadratureRule,
    sigma_z2_rule: QuadratureRule,
    J3: int,
    e_sigma_z2: float,
    z_range: float = DEFAULT_Z_RANGE,
) -> HybridQuadrature:
    """Combine two variance rules with per-node jitter rules"""
    nodes, weights, kind = _jitter_block(sigma_z2_rule, J3, e_sigma_z2, z_range)
    return HybridQuadrature(sigma_w2_rule, sigma_z2_rule, nodes, weights, kind)


def prior_hybrid(
    hyper: Hyperparams,
    J1: int = DEFAULT_J1,
    J2: int = DEFAULT_J2,
    J3: int = DEFAULT_J3,
    z_range: float = DEFAULT_Z_RANGE,
) -> HybridQuadrature:
    """Hybrid rule for the random-variance model under the priors"""
    if hyper.jeffreys:
        raise ConfigError("Hybrid quadrature needs proper variance priors")
    return build_hybrid(
        inverse_gamma_rule(J1, hyper.alpha_w, hyper.beta_w),
        inverse_gamma_rule(J2, hyper.alpha_z, hyper.beta_z),
        J3,
        hyper.mean_sigma_z2,
        z_range,
    )


def known_variance_hybrid(
    sigma_z2: float,
    sigma_w2: float,
    J3: int = DEFAULT_J3,
    z_range: float = DEFAULT_Z_RANGE,
) -> HybridQuadrature:
    """Hybrid rule with both variance rules collapsed to point masses"""
    if not sigma_w2 > 0:
        raise ConfigError(f"Known sigma_w2 must be positive, got {sigma_w2}")
    if sigma_z2 < 0:
        raise ConfigError(f"Known sigma_z2 must be >= 0, got {sigma_z2}")
    return build_hybrid(point_mass_rule(sigma_w2), point_mass_rule(sigma_z2), J3, sigma_z2, z_range)


@dataclass(frozen=True)
class MarginalLikelihood:
    """p(y_n | x) kept in log form; ``underflow`` flags a zero linear value"""
    log_value: float
    underflow: bool = False

    @property
    def value(self) -> float:
        return float(np.exp(self.log_value))


def log_likelihood_terms(
    y: Any,
    n: Any,
    x: np.ndarray,
    hybrid: HybridQuadrature,
    config: ModelConfig,
    h: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Log summands log(w1 w2 w3) + log N(y; h_n(z)^T x, sigma_w^2).

    ``y`` and ``n`` broadcast to a batch shape B; the result has shape
    B + (J1, J2*J3). ``h`` may carry precomputed rows h_n(z_{j2,j3}) of
    shape B + (J2*J3, K).
    """
    y = np.asarray(y, dtype=float)
    n = np.asarray(n)
    batch = np.broadcast_shapes(y.shape, n.shape)
    if h is None:
        h = h_rows(np.reshape(n, n.shape + (1,)), hybrid.flat_z_nodes, config)
    means = h @ np.asarray(x, dtype=float)
    means = np.broadcast_to(means, batch + means.shape[-1:])
    sw2 = hybrid.sigma_w2.nodes[:, None]
    terms = normal_logpdf(np.reshape(y, y.shape + (1, 1)), means[..., None, :], sw2)
    return terms + hybrid.sigma_w2.log_weights[:, None] + hybrid.joint_z_log_weights


def log_marginal_likelihood(
    y: Any,
    n: Any,
    x: np.ndarray,
    hybrid: HybridQuadrature,
    config: ModelConfig,
) -> np.ndarray:
    """log p(y_n | x) by log-sum-exp over the triple sum; broadcasts over y and n"""
    terms = log_likelihood_terms(y, n, x, hybrid, config)
    return logsumexp(terms, axis=(-2, -1))


def marginal_likelihood(
    y_n: float,
    x: np.ndarray,
    n: int,
    hyper: Hyperparams,
    config: ModelConfig,
    J1: int = DEFAULT_J1,
    J2: int = DEFAULT_J2,
    J3: int = DEFAULT_J3,
    z_range: float = DEFAULT_Z_RANGE,
) -> MarginalLikelihood:
    """
    Approximate p(y_n | x) with the hybrid Laguerre/(Hermite|Legendre) rule.

    Args:
        y_n: Observation
        x: Coefficient vector
        n: Sample index
        hyper: Prior hyperparameters
        config: Sampling geometry
        J1, J2, J3: Rule sizes for sigma_w^2, sigma_z^2 and z_n

    Returns:
        MarginalLikelihood; ``underflow`` is set when exp(log p) is 0
    """
    hybrid = prior_hybrid(hyper, J1, J2, J3, z_range)
    log_value = float(log_marginal_likelihood(y_n, n, x, hybrid, config))
    return MarginalLikelihood(log_value, underflow=bool(np.exp(log_value) == 0.0))

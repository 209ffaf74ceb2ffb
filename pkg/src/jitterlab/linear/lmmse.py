"""
Linear MMSE Estimators

The jitter-aware LMMSE estimator E[H]^T (E[HH^T] + r I)^-1 y, its no-jitter
and fixed-jitter special cases and their error covariances. All inverses are
replaced by Cholesky solves.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg

from ..errors import SingularSystemError
from ..model.geometry import ModelConfig, build_h_matrix
from ..model.priors import Hyperparams
from ..quadrature.hybrid import DEFAULT_J2, DEFAULT_J3
from ..quadrature.rules import DEFAULT_Z_RANGE
from .expectations import expected_h, expected_hht


def _factor(system: np.ndarray) -> Tuple[np.ndarray, bool]:
    try:
        return linalg.cho_factor(system, lower=True)
    except linalg.LinAlgError as e:
        condition = float(np.linalg.cond(system))
        raise SingularSystemError(
            f"LMMSE system is not positive definite (condition ~ {condition:.3e})", condition
        ) from e


@dataclass(frozen=True)
class LmmsePrecompute:
    """
    Everything the LMMSE estimator needs that does not depend on y.

    Attributes:
        e_h: N x K matrix E[H(z)]
        e_hht: N x N matrix E[H(z) H(z)^T]
        ratio: beta_w (alpha_x - 1) / (beta_x (alpha_w - 1))
        gain: K x N estimator matrix
        prior_variance: beta_x / (alpha_x - 1)
        factor: Cholesky factor of e_hht + ratio I
    """
    e_h: np.ndarray
    e_hht: np.ndarray
    ratio: float
    gain: np.ndarray
    prior_variance: float
    factor: Tuple[np.ndarray, bool]

    @classmethod
    def from_expectations(
        cls,
        e_h: np.ndarray,
        e_hht: np.ndarray,
        ratio: float,
        prior_variance: float,
    ) -> "LmmsePrecompute":
        system = e_hht + ratio * np.eye(e_hht.shape[0])
        factor = _factor(system)
        gain = linalg.cho_solve(factor, e_h).T
        return cls(e_h, e_hht, float(ratio), gain, float(prior_variance), factor)

    @property
    def system(self) -> np.ndarray:
        return self.e_hht + self.ratio * np.eye(self.e_hht.shape[0])


def lmmse_precompute(
    config: ModelConfig,
    hyper: Hyperparams,
    J2: int = DEFAULT_J2,
    J3: int = DEFAULT_J3,
    z_range: float = DEFAULT_Z_RANGE,
) -> LmmsePrecompute:
    """Precompute the jitter-aware estimator for (config, hyper)"""
    return LmmsePrecompute.from_expectations(
        expected_h(hyper, config, J2, J3, z_range),
        expected_hht(hyper, config, J2, J3, z_range),
        hyper.noise_to_signal_ratio,
        hyper.mean_sigma_x2,
    )


def no_jitter_precompute(config: ModelConfig, hyper: Hyperparams) -> LmmsePrecompute:
    """Precompute with H(0) standing in for both expectations"""
    h0 = build_h_matrix(np.zeros(config.N), config)
    return LmmsePrecompute.from_expectations(h0, h0 @ h0.T, hyper.noise_to_signal_ratio, hyper.mean_sigma_x2)


def lmmse_estimate(y: np.ndarray, pre: LmmsePrecompute) -> np.ndarray:
    """E[H]^T (E[HH^T] + ratio I)^-1 y"""
    return pre.e_h.T @ linalg.cho_solve(pre.factor, np.asarray(y, dtype=float))


def lmmse_error_cov(pre: LmmsePrecompute, hyper: Hyperparams) -> np.ndarray:
    """(beta_x / (alpha_x - 1)) (I - E[H]^T (E[HH^T] + ratio I)^-1 E[H])"""
    K = pre.e_h.shape[1]
    cov = hyper.mean_sigma_x2 * (np.eye(K) - pre.e_h.T @ linalg.cho_solve(pre.factor, pre.e_h))
    return 0.5 * (cov + cov.T)


def lmmse_no_jitter(y: np.ndarray, config: ModelConfig, hyper: Hyperparams) -> np.ndarray:
    """H(0)^T (H(0) H(0)^T + ratio I)^-1 y"""
    return lmmse_estimate(y, no_jitter_precompute(config, hyper))


def lmmse_no_jitter_error_cov(config: ModelConfig, hyper: Hyperparams) -> np.ndarray:
    """
    Error covariance of the no-jitter estimator.

    The leading factor is the prior mean beta_x / (alpha_x - 1), the same
    one the jitter-aware covariance uses.
    """
    return lmmse_error_cov(no_jitter_precompute(config, hyper), hyper)


def lmmse_fixed_jitter(
    y: np.ndarray,
    z: np.ndarray,
    config: ModelConfig,
    sigma_x2: float,
    sigma_w2: float,
) -> np.ndarray:
    """H(z)^T (H(z) H(z)^T + (sigma_w^2 / sigma_x^2) I)^-1 y for a known jitter"""
    h = build_h_matrix(z, config)
    system = h @ h.T + (sigma_w2 / sigma_x2) * np.eye(config.N)
    return h.T @ linalg.cho_solve(_factor(system), np.asarray(y, dtype=float))

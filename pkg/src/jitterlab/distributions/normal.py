"""
Normal Distributions

Log densities and multivariate draws through Cholesky factors of either the
covariance or the precision matrix.
"""

from typing import Any, Tuple

import numpy as np
from scipy import linalg

from ..errors import FactorizationError

LOG_2PI = float(np.log(2.0 * np.pi))


def normal_logpdf(a: Any, mean: Any, variance: Any) -> np.ndarray:
    """Elementwise log N(a; mean, variance)"""
    a = np.asarray(a, dtype=float)
    return -0.5 * (LOG_2PI + np.log(variance)) - (a - mean) ** 2 / (2.0 * variance)


def cholesky_factor(matrix: np.ndarray, what: str) -> np.ndarray:
    try:
        return linalg.cholesky(matrix, lower=True)
    except linalg.LinAlgError as e:
        raise FactorizationError(f"{what} is not symmetric positive definite: {e}") from e


def sample_mvn(mu: Any, cov: Any, rng: np.random.Generator) -> np.ndarray:
    """
    Draw from N(mu, cov) as mu + L u with cov = L L^T.

    Raises:
        FactorizationError: If cov is not SPD (no silent regularisation)
    """
    mu = np.asarray(mu, dtype=float)
    factor = cholesky_factor(np.asarray(cov, dtype=float), "Covariance")
    return mu + factor @ rng.standard_normal(mu.shape[0])


def sample_mvn_precision(
    precision: Any,
    rhs: Any,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Draw from N(P^-1 b, P^-1) given the precision P and b.

    With P = L L^T the mean solves L L^T mu = b and the draw is
    mu + L^-T u, so no inverse is ever formed.

    Returns:
        (draw, mean)
    """
    factor = cholesky_factor(np.asarray(precision, dtype=float), "Precision")
    rhs = np.asarray(rhs, dtype=float)
    mean = linalg.cho_solve((factor, True), rhs)
    u = rng.standard_normal(rhs.shape[0])
    return mean + linalg.solve_triangular(factor, u, lower=True, trans="T"), mean

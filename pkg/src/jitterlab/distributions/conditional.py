"""
Jitter Conditional

Unnormalised full conditional of one jitter value z_n given the coefficients,
the variances and its observation.
"""

from typing import Any, Union

import numpy as np

from ..model.geometry import ModelConfig, h_rows
from .normal import normal_logpdf


def log_unnormalized_z_conditional(
    z_n: Any,
    n: Any,
    y_n: Any,
    x: np.ndarray,
    sigma_z2: float,
    sigma_w2: float,
    config: ModelConfig,
) -> Union[float, np.ndarray]:
    """
    log[N(y_n; h_n(z_n)^T x, sigma_w^2) N(z_n; 0, sigma_z^2)].

    Both normalisation constants are kept, so the value never exceeds
    -log(2 pi sigma_z sigma_w). ``z_n``, ``n`` and ``y_n`` broadcast, which
    lets one call score many samples or many candidate jitters at once.
    """
    z_n = np.asarray(z_n, dtype=float)
    mean = h_rows(n, z_n, config) @ np.asarray(x, dtype=float)
    value = normal_logpdf(y_n, mean, sigma_w2) + normal_logpdf(z_n, 0.0, sigma_z2)
    return float(value) if np.ndim(value) == 0 else value


def log_density_bound(sigma_z2: float, sigma_w2: float) -> float:
    """Upper bound -log(2 pi sigma_z sigma_w) of the jitter conditional"""
    return -0.5 * float(np.log((2.0 * np.pi) ** 2 * sigma_z2 * sigma_w2))

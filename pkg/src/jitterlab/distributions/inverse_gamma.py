"""
Inverse-Gamma Distribution

Density IG(s; alpha, beta) = beta^alpha / Gamma(alpha) s^(-alpha-1) exp(-beta/s).
"""

from dataclasses import dataclass
from typing import Any, Optional, Tuple, Union

import numpy as np
from scipy.special import gammaln

from ..errors import ConfigError


@dataclass(frozen=True)
class InverseGammaParams:
    """Shape alpha > 0 and scale beta > 0"""
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ConfigError(
                f"Inverse-Gamma parameters must be positive, got alpha={self.alpha}, beta={self.beta}"
            )

    @property
    def mean(self) -> float:
        """beta / (alpha - 1); infinite for alpha <= 1"""
        return self.beta / (self.alpha - 1) if self.alpha > 1 else float("inf")

    @property
    def variance(self) -> float:
        if self.alpha <= 2:
            return float("inf")
        return self.beta ** 2 / ((self.alpha - 1) ** 2 * (self.alpha - 2))

    @property
    def mode(self) -> float:
        return self.beta / (self.alpha + 1)


def inverse_gamma_logpdf(s: Any, p: InverseGammaParams) -> Union[float, np.ndarray]:
    """
    Log density of the inverse-Gamma distribution.

    Raises:
        ValueError: If any s <= 0
    """
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0):
        raise ValueError("Inverse-Gamma density is only defined for s > 0")
    value = p.alpha * np.log(p.beta) - gammaln(p.alpha) - (p.alpha + 1) * np.log(s) - p.beta / s
    return float(value) if value.ndim == 0 else value


def sample_inverse_gamma(
    p: InverseGammaParams,
    rng: np.random.Generator,
    size: Optional[Union[int, Tuple[int, ...]]] = None,
) -> Union[float, np.ndarray]:
    """beta / g with g ~ Gamma(alpha, 1)"""
    g = rng.gamma(p.alpha, 1.0, size)
    return p.beta / g

"""Expectation-maximisation estimator with latent jitters and variances"""

from .config import EmConfig, VarianceMode
from .estep import Expectations, batch_expectations, em_expectations, em_hybrid
from .iterate import EmResult, em_iterate

__all__ = [
    "EmConfig",
    "VarianceMode",
    "Expectations",
    "batch_expectations",
    "em_expectations",
    "em_hybrid",
    "EmResult",
    "em_iterate",
]

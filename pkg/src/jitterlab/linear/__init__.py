"""Linear MMSE estimation"""

from .expectations import expected_h, expected_hht
from .lmmse import (
    LmmsePrecompute,
    lmmse_error_cov,
    lmmse_estimate,
    lmmse_fixed_jitter,
    lmmse_no_jitter,
    lmmse_no_jitter_error_cov,
    lmmse_precompute,
    no_jitter_precompute,
)

__all__ = [
    "expected_h",
    "expected_hht",
    "LmmsePrecompute",
    "lmmse_error_cov",
    "lmmse_estimate",
    "lmmse_fixed_jitter",
    "lmmse_no_jitter",
    "lmmse_no_jitter_error_cov",
    "lmmse_precompute",
    "no_jitter_precompute",
]

"""Gibbs/slice sampler for the Bayes MMSE estimate"""

from .state import ChainState, GibbsOutput, SliceConfig, VARIABLES
from .slice import SliceResult, midpoint_shrink, slice_initial_interval, slice_sample_z, slice_sweep, slice_update
from .conditionals import (
    coefficient_posterior,
    posterior_variance_params,
    sample_coefficients,
    sample_variances,
)
from .init import InitPreset, default_initial_state, initial_state
from .gibbs import gibbs_step, run_chain

__all__ = [
    "ChainState",
    "GibbsOutput",
    "SliceConfig",
    "VARIABLES",
    "SliceResult",
    "midpoint_shrink",
    "slice_initial_interval",
    "slice_sample_z",
    "slice_sweep",
    "slice_update",
    "coefficient_posterior",
    "posterior_variance_params",
    "sample_coefficients",
    "sample_variances",
    "InitPreset",
    "default_initial_state",
    "initial_state",
    "gibbs_step",
    "run_chain",
]

"""
jitterlab - Signal estimation from jittered samples

Estimates shift-invariant signal coefficients from samples corrupted by
timing jitter and additive noise with:
- Linear MMSE estimators (with and without jitter statistics)
- A Gibbs sampler with slice-sampled jitters for the Bayes MMSE estimate
- An EM algorithm with quadrature E-steps
- Simulation experiments comparing them
"""

__version__ = "1.0.0"

from .errors import JitterlabError
from .model import Hyperparams, ModelConfig, hyperparams_from_expected, synthesize
from .linear import lmmse_estimate, lmmse_no_jitter, lmmse_precompute
from .sampler import ChainState, GibbsOutput, SliceConfig, run_chain
from .em import EmConfig, em_iterate
from .diagnostics import ChainTraces, psrf
from .harness import ExperimentConfig, ExperimentRunner

__all__ = [
    "JitterlabError",
    "Hyperparams",
    "ModelConfig",
    "hyperparams_from_expected",
    "synthesize",
    "lmmse_estimate",
    "lmmse_no_jitter",
    "lmmse_precompute",
    "ChainState",
    "GibbsOutput",
    "SliceConfig",
    "run_chain",
    "EmConfig",
    "em_iterate",
    "ChainTraces",
    "psrf",
    "ExperimentConfig",
    "ExperimentRunner",
]

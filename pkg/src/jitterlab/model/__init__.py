"""Signal Model: geometry, priors and synthetic instances"""

from .geometry import (
    GeneratorKind,
    ModelConfig,
    build_h_matrix,
    generator_derivative,
    generator_eval,
    h_rows,
    sinc,
)
from .priors import Hyperparams, hyperparams_from_expected
from .synthesis import SynthesisOverrides, SyntheticInstance, synthesize

__all__ = [
    "GeneratorKind",
    "ModelConfig",
    "build_h_matrix",
    "generator_derivative",
    "generator_eval",
    "h_rows",
    "sinc",
    "Hyperparams",
    "hyperparams_from_expected",
    "SynthesisOverrides",
    "SyntheticInstance",
    "synthesize",
]

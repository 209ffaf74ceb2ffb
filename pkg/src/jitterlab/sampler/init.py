"""
Chain Initialisation

The default starting state and the ten named presets of the
initialisation-sensitivity study.
"""

from enum import Enum
from typing import List, Optional

import numpy as np

from ..distributions.inverse_gamma import sample_inverse_gamma
from ..errors import ConfigError
from ..linear.lmmse import lmmse_fixed_jitter, lmmse_no_jitter
from ..model.geometry import ModelConfig
from ..model.priors import Hyperparams
from ..model.synthesis import SyntheticInstance
from .state import ChainState

DEFAULT_SIGMA_X2 = 1.0
DEFAULT_SIGMA_Z2 = 0.01
DEFAULT_SIGMA_W2 = 0.01


class InitPreset(Enum):
    """Starting points compared in the initialisation study"""
    ZEROS = "zeros"
    NO_JITTER_LMMSE = "lmmse0"
    TRUTH = "truth"
    RANDOM_1 = "random1"
    RANDOM_2 = "random2"
    RANDOM_3 = "random3"
    RANDOM_4 = "random4"
    RANDOM_5 = "random5"
    RANDOM_6 = "random6"
    RANDOM_7 = "random7"

    @property
    def is_random(self) -> bool:
        return self.value.startswith("random")

    @classmethod
    def all(cls) -> List["InitPreset"]:
        return list(cls)


def default_initial_state(y: np.ndarray, config: ModelConfig, hyper: Hyperparams) -> ChainState:
    """
    z = 0, x = no-jitter LMMSE estimate, sigma_x^2 = 1, sigma_z^2 = sigma_w^2 = 0.01.

    Under Jeffreys priors there is no prior noise-to-signal ratio, so the
    starting variances supply it.
    """
    z = np.zeros(config.N)
    if hyper.jeffreys:
        x = lmmse_fixed_jitter(y, z, config, DEFAULT_SIGMA_X2, DEFAULT_SIGMA_W2)
    else:
        x = lmmse_no_jitter(y, config, hyper)
    return ChainState(x, z, DEFAULT_SIGMA_X2, DEFAULT_SIGMA_Z2, DEFAULT_SIGMA_W2)


def initial_state(
    preset: InitPreset,
    y: np.ndarray,
    config: ModelConfig,
    hyper: Hyperparams,
    instance: Optional[SyntheticInstance] = None,
    rng: Optional[np.random.Generator] = None,
) -> ChainState:
    """
    Build the starting state for a preset.

    Args:
        preset: Which initialisation
        y: Observations
        config: Sampling geometry
        hyper: Priors (random presets draw from them)
        instance: Ground truth, required by TRUTH
        rng: Generator, required by the random presets

    Raises:
        ConfigError: If the preset's extra input is missing
    """
    if preset is InitPreset.ZEROS:
        return ChainState(np.zeros(config.K), np.zeros(config.N), DEFAULT_SIGMA_X2, DEFAULT_SIGMA_Z2, DEFAULT_SIGMA_W2)
    if preset is InitPreset.NO_JITTER_LMMSE:
        return default_initial_state(y, config, hyper)
    if preset is InitPreset.TRUTH:
        if instance is None:
            raise ConfigError("The truth preset needs the synthetic instance")
        return ChainState(
            instance.x_true.copy(),
            instance.z_true.copy(),
            instance.sigma_x2,
            instance.sigma_z2,
            instance.sigma_w2,
        )
    if rng is None:
        raise ConfigError(f"Preset {preset.value} needs a random generator")
    sigma_x2 = float(sample_inverse_gamma(hyper.sigma_x2_prior, rng))
    sigma_z2 = float(sample_inverse_gamma(hyper.sigma_z2_prior, rng))
    sigma_w2 = float(sample_inverse_gamma(hyper.sigma_w2_prior, rng))
    z = np.sqrt(sigma_z2) * rng.standard_normal(config.N)
    x = lmmse_fixed_jitter(y, z, config, sigma_x2, sigma_w2)
    return ChainState(x, z, sigma_x2, sigma_z2, sigma_w2)

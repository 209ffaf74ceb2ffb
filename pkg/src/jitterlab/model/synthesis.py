"""
Synthetic Instances

Draws complete problem instances from the hierarchical model, recording
every latent draw so experiments can score estimates against the truth.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from ..distributions.inverse_gamma import sample_inverse_gamma
from ..errors import ConfigError, DimensionError
from ..streams import RngLike, as_generator
from .geometry import ModelConfig, build_h_matrix
from .priors import Hyperparams


@dataclass(frozen=True)
class SynthesisOverrides:
    """Values pinned instead of drawn (variances may be 0 for noiseless tests)"""
    sigma_x2: Optional[float] = None
    sigma_z2: Optional[float] = None
    sigma_w2: Optional[float] = None
    z: Optional[np.ndarray] = None

    def __post_init__(self):
        for name in ("sigma_x2", "sigma_z2", "sigma_w2"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ConfigError(f"Override {name} must be >= 0, got {value}")


@dataclass(frozen=True)
class SyntheticInstance:
    """One draw of (x, z, variances, w) and the resulting observations"""
    x_true: np.ndarray
    z_true: np.ndarray
    sigma_x2: float
    sigma_z2: float
    sigma_w2: float
    w: np.ndarray
    y: np.ndarray
    seed: Optional[int] = None

    def squared_error(self, x_hat: np.ndarray) -> float:
        return float(np.sum((np.asarray(x_hat) - self.x_true) ** 2))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "x_true": self.x_true.tolist(),
            "z_true": self.z_true.tolist(),
            "sigma_x2": self.sigma_x2,
            "sigma_z2": self.sigma_z2,
            "sigma_w2": self.sigma_w2,
            "w": self.w.tolist(),
            "y": self.y.tolist(),
            "seed": self.seed,
        }


def synthesize(
    config: ModelConfig,
    hyper: Hyperparams,
    rng: RngLike,
    overrides: Optional[SynthesisOverrides] = None,
) -> SyntheticInstance:
    """
    Draw an instance y = H(z) x + w from the hierarchical model.

    Variances are drawn from their inverse-Gamma priors (in the order
    sigma_x^2, sigma_z^2, sigma_w^2), then x, z and w from zero-mean normals.

    Args:
        config: Sampling geometry
        hyper: Prior hyperparameters (must be proper)
        rng: Seed or Generator; an int seed is recorded on the instance
        overrides: Optional pinned values

    Returns:
        SyntheticInstance with every draw recorded
    """
    seed = rng if isinstance(rng, (int, np.integer)) else None
    gen = as_generator(rng)
    overrides = overrides or SynthesisOverrides()

    def variance(value: Optional[float], prior) -> float:
        return float(value) if value is not None else float(sample_inverse_gamma(prior, gen))

    sigma_x2 = variance(overrides.sigma_x2, hyper.sigma_x2_prior)
    sigma_z2 = variance(overrides.sigma_z2, hyper.sigma_z2_prior)
    sigma_w2 = variance(overrides.sigma_w2, hyper.sigma_w2_prior)

    x = np.sqrt(sigma_x2) * gen.standard_normal(config.K)
    if overrides.z is not None:
        z = np.array(overrides.z, dtype=float)
        if z.shape != (config.N,):
            raise DimensionError(f"Override z must have shape ({config.N},), got {z.shape}")
    else:
        z = np.sqrt(sigma_z2) * gen.standard_normal(config.N)
    w = np.sqrt(sigma_w2) * gen.standard_normal(config.N)

    y = build_h_matrix(z, config) @ x + w
    return SyntheticInstance(
        x_true=x,
        z_true=z,
        sigma_x2=sigma_x2,
        sigma_z2=sigma_z2,
        sigma_w2=sigma_w2,
        w=w,
        y=y,
        seed=None if seed is None else int(seed),
    )

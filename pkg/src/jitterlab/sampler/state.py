"""
Sampler State

Chain state, slice-sampler settings and the summarised output of one chain.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, FrozenSet, Optional

import numpy as np

from ..errors import ConfigError, DimensionError
from ..model.geometry import ModelConfig

VARIABLES = ("x", "z", "sigma_x2", "sigma_z2", "sigma_w2")


@dataclass(frozen=True)
class ChainState:
    """One Gibbs state (x, z, sigma_x^2, sigma_z^2, sigma_w^2) at an iteration"""
    x: np.ndarray
    z: np.ndarray
    sigma_x2: float
    sigma_z2: float
    sigma_w2: float
    iteration: int = 0

    def __post_init__(self):
        bad = [name for name in VARIABLES[2:] if not getattr(self, name) > 0]
        if bad:
            raise ConfigError(f"Chain variances must be strictly positive: {bad}")

    def validate(self, config: ModelConfig) -> "ChainState":
        """Check vector lengths against the geometry"""
        if np.shape(self.x) != (config.K,):
            raise DimensionError(f"x must have shape ({config.K},), got {np.shape(self.x)}")
        if np.shape(self.z) != (config.N,):
            raise DimensionError(f"z must have shape ({config.N},), got {np.shape(self.z)}")
        return self

    def update(self, **changes: Any) -> "ChainState":
        return replace(self, **changes)

    def as_vector(self) -> np.ndarray:
        """Combined vector (x, z, sigma_x^2, sigma_z^2, sigma_w^2) of length K + N + 3"""
        return np.concatenate([self.x, self.z, [self.sigma_x2, self.sigma_z2, self.sigma_w2]])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "x": np.asarray(self.x).tolist(),
            "z": np.asarray(self.z).tolist(),
            "sigma_x2": self.sigma_x2,
            "sigma_z2": self.sigma_z2,
            "sigma_w2": self.sigma_w2,
            "iteration": self.iteration,
        }


@dataclass(frozen=True)
class SliceConfig:
    """
    Slice-sampler settings.

    Attributes:
        tau: Midpoint threshold; a rejected point more than tau below the
            slice level in log density also halves the interval. 0 gives the
            plain shrinkage method.
        max_shrink_iters: Cap on shrink iterations for one update
    """
    tau: float = 25.0
    max_shrink_iters: int = 1000

    def __post_init__(self):
        if self.tau < 0:
            raise ConfigError(f"tau must be >= 0, got {self.tau}")
        if self.max_shrink_iters < 1:
            raise ConfigError(f"max_shrink_iters must be >= 1, got {self.max_shrink_iters}")


def check_pinned(pinned: Any) -> FrozenSet[str]:
    pinned = frozenset(pinned or ())
    unknown = sorted(pinned - set(VARIABLES))
    if unknown:
        raise ConfigError(f"Unknown pinned variables {unknown}; expected a subset of {list(VARIABLES)}")
    return pinned


@dataclass(frozen=True)
class GibbsOutput:
    """
    Posterior-mean estimates of one chain.

    Averages cover exactly iterations I_b+1 ... I_b+I.

    Attributes:
        trace: Combined state vectors, one row per recorded iteration, or None
        trace_start: Iteration number (1-based) of the first trace row
        shrink_iterations: Total shrink iterations of every sweep
        x_checkpoints: Running x means after the requested post-burn-in counts
    """
    x_hat: np.ndarray
    z_hat: np.ndarray
    sigma_x2_hat: float
    sigma_z2_hat: float
    sigma_w2_hat: float
    final_state: ChainState
    trace: Optional[np.ndarray] = None
    trace_start: int = 1
    shrink_iterations: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    x_checkpoints: Dict[int, np.ndarray] = field(default_factory=dict)

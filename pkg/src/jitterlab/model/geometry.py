"""
Sampling Geometry

Generator functions, the sampling configuration and the observation matrix
H(z) whose entry (n, k) is h(n/M + z_n - k).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict

import numpy as np

from ..errors import ConfigError, DimensionError

# Below this magnitude sinc is evaluated from its Taylor series
SINC_SERIES_THRESHOLD = 1e-8


class GeneratorKind(Enum):
    """Supported generating functions of the shift-invariant space"""
    SINC = "sinc"


def sinc(t: Any) -> np.ndarray:
    """sin(pi t) / (pi t) with the removable singularity at t = 0"""
    t = np.asarray(t, dtype=float)
    pt = np.pi * t
    small = np.abs(t) < SINC_SERIES_THRESHOLD
    safe = np.where(small, 1.0, pt)
    return np.where(small, 1.0 - pt * pt / 6.0, np.sin(safe) / safe)


def sinc_derivative(t: Any) -> np.ndarray:
    """d/dt sinc(t) = (cos(pi t) - sinc(t)) / t, series near zero"""
    t = np.asarray(t, dtype=float)
    small = np.abs(t) < SINC_SERIES_THRESHOLD
    safe = np.where(small, 1.0, t)
    return np.where(small, -(np.pi ** 2) * t / 3.0, (np.cos(np.pi * safe) - sinc(safe)) / safe)


_GENERATORS = {
    GeneratorKind.SINC: (sinc, sinc_derivative),
}


def generator_eval(t: Any, generator: GeneratorKind = GeneratorKind.SINC) -> Any:
    """
    Evaluate the generating function.

    Args:
        t: Scalar or array of time offsets (in coefficient periods)
        generator: Generating function

    Returns:
        Float for scalar input, array otherwise
    """
    value = _GENERATORS[generator][0](t)
    return float(value) if np.ndim(value) == 0 else value


def generator_derivative(t: Any, generator: GeneratorKind = GeneratorKind.SINC) -> Any:
    """Derivative of the generating function with respect to t"""
    value = _GENERATORS[generator][1](t)
    return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True)
class ModelConfig:
    """Signal and sampling geometry"""
    K: int
    M: int = 1
    generator: GeneratorKind = GeneratorKind.SINC
    T: float = 1.0

    def __post_init__(self):
        if self.K < 1:
            raise ConfigError(f"K must be >= 1, got {self.K}")
        if self.M < 1:
            raise ConfigError(f"M must be >= 1, got {self.M}")
        if self.T != 1.0:
            raise ConfigError(f"Coefficient spacing T is fixed to 1, got {self.T}")

    @property
    def N(self) -> int:
        return self.K * self.M

    @property
    def sample_times(self) -> np.ndarray:
        """Nominal sample times n/M"""
        return np.arange(self.N) / self.M

    @property
    def coefficient_offsets(self) -> np.ndarray:
        return np.arange(self.K, dtype=float)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "K": self.K,
            "M": self.M,
            "generator": self.generator.value,
            "T": self.T,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ModelConfig":
        data = data.copy()
        if "generator" in data:
            data["generator"] = GeneratorKind(data["generator"])
        return cls(**data)


def h_rows(n: Any, z: Any, config: ModelConfig) -> np.ndarray:
    """
    Rows h_n(z) of the observation matrix for broadcastable n and z.

    Returns an array of shape ``broadcast(n, z).shape + (K,)``.
    """
    n = np.asarray(n)
    z = np.asarray(z, dtype=float)
    t = n / config.M + z
    return generator_eval(t[..., None] - config.coefficient_offsets, config.generator)


def build_h_matrix(z: Any, config: ModelConfig) -> np.ndarray:
    """
    Build the N x K observation matrix H(z).

    Args:
        z: Jitter vector of length N
        config: Sampling geometry

    Returns:
        Matrix with entry (n, k) = h(n/M + z_n - k)

    Raises:
        DimensionError: If z does not have length N
    """
    z = np.asarray(z, dtype=float)
    if z.shape != (config.N,):
        raise DimensionError(f"z must have shape ({config.N},), got {z.shape}")
    return h_rows(np.arange(config.N), z, config)

"""EM settings"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

from ..errors import ConfigError
from ..quadrature.hybrid import DEFAULT_J1, DEFAULT_J2, DEFAULT_J3
from ..quadrature.rules import DEFAULT_Z_RANGE


class VarianceMode(Enum):
    """How the E-step treats sigma_z^2 and sigma_w^2"""
    RANDOM = "random"
    KNOWN = "known"


@dataclass(frozen=True)
class EmConfig:
    """
    Configuration for the EM estimator.

    In KNOWN mode the two variance rules collapse to point masses at
    ``sigma_z2`` and ``sigma_w2``; J1 and J2 are then unused.
    """
    J1: int = DEFAULT_J1
    J2: int = DEFAULT_J2
    J3: int = DEFAULT_J3
    max_iters: int = 200
    tol: float = 1e-6
    variance_mode: VarianceMode = VarianceMode.RANDOM
    sigma_z2: Optional[float] = None
    sigma_w2: Optional[float] = None
    z_range: float = DEFAULT_Z_RANGE
    workers: int = 1

    def __post_init__(self):
        if min(self.J1, self.J2, self.J3) < 1:
            raise ConfigError(f"Rule sizes must be >= 1, got J=({self.J1}, {self.J2}, {self.J3})")
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.max_iters < 1:
            raise ConfigError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.variance_mode is VarianceMode.KNOWN:
            if self.sigma_z2 is None or self.sigma_w2 is None:
                raise ConfigError("Known-variance EM needs sigma_z2 and sigma_w2")
            if self.sigma_z2 < 0 or not self.sigma_w2 > 0:
                raise ConfigError(
                    f"Known variances need sigma_z2 >= 0 and sigma_w2 > 0, got {self.sigma_z2}, {self.sigma_w2}"
                )

    @classmethod
    def known(cls, sigma_z2: float, sigma_w2: float, **kwargs: Any) -> "EmConfig":
        return cls(variance_mode=VarianceMode.KNOWN, sigma_z2=sigma_z2, sigma_w2=sigma_w2, **kwargs)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "J1": self.J1,
            "J2": self.J2,
            "J3": self.J3,
            "max_iters": self.max_iters,
            "tol": self.tol,
            "variance_mode": self.variance_mode.value,
            "sigma_z2": self.sigma_z2,
            "sigma_w2": self.sigma_w2,
            "z_range": self.z_range,
            "workers": self.workers,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EmConfig":
        data = data.copy()
        if "variance_mode" in data:
            data["variance_mode"] = VarianceMode(data["variance_mode"])
        return cls(**data)

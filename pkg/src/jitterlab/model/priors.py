"""
Hierarchical Priors

Inverse-Gamma hyperparameters for the signal, jitter and noise variances,
and their fit from expected variances and prior observation counts.
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict

from ..distributions.inverse_gamma import InverseGammaParams
from ..errors import ConfigError

_FIELDS = ("alpha_x", "beta_x", "alpha_z", "beta_z", "alpha_w", "beta_w")


@dataclass(frozen=True)
class Hyperparams:
    """
    Inverse-Gamma shape/scale pairs for sigma_x^2, sigma_z^2 and sigma_w^2.

    ``jeffreys=True`` marks the improper limit alpha = beta = 0, which only
    the conjugate posterior updates can use.
    """
    alpha_x: float
    beta_x: float
    alpha_z: float
    beta_z: float
    alpha_w: float
    beta_w: float
    jeffreys: bool = False

    def __post_init__(self):
        values = {name: getattr(self, name) for name in _FIELDS}
        if self.jeffreys:
            nonzero = [name for name, value in values.items() if value != 0]
            if nonzero:
                raise ConfigError(f"Jeffreys mode requires zero hyperparameters, got nonzero {nonzero}")
            return
        bad = [name for name, value in values.items() if not value > 0]
        if bad:
            raise ConfigError(f"Hyperparameters must be strictly positive: {bad}")

    @classmethod
    def jeffreys_prior(cls) -> "Hyperparams":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, jeffreys=True)

    def _require_proper(self) -> None:
        if self.jeffreys:
            raise ConfigError("Operation needs a proper prior; Jeffreys mode is improper")

    @property
    def sigma_x2_prior(self) -> InverseGammaParams:
        self._require_proper()
        return InverseGammaParams(self.alpha_x, self.beta_x)

    @property
    def sigma_z2_prior(self) -> InverseGammaParams:
        self._require_proper()
        return InverseGammaParams(self.alpha_z, self.beta_z)

    @property
    def sigma_w2_prior(self) -> InverseGammaParams:
        self._require_proper()
        return InverseGammaParams(self.alpha_w, self.beta_w)

    @property
    def mean_sigma_x2(self) -> float:
        return self.sigma_x2_prior.mean

    @property
    def mean_sigma_z2(self) -> float:
        return self.sigma_z2_prior.mean

    @property
    def mean_sigma_w2(self) -> float:
        return self.sigma_w2_prior.mean

    @property
    def noise_to_signal_ratio(self) -> float:
        """beta_w (alpha_x - 1) / (beta_x (alpha_w - 1))"""
        self._require_proper()
        return self.beta_w * (self.alpha_x - 1) / (self.beta_x * (self.alpha_w - 1))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Hyperparams":
        return cls(**data)


def hyperparams_from_expected(
    K_prior: int,
    N_prior: int,
    e_sigma_z2: float,
    e_sigma_w2: float,
) -> Hyperparams:
    """
    Fit the six hyperparameters to prior observation counts.

    The signal prior is matched to the mean (1) and variance (2/(K-1)) of
    the unbiased variance estimate from K standard-normal observations; the
    jitter and noise priors use N observations and the expected variances.

    Raises:
        ConfigError: If K_prior <= 1, N_prior <= 1 or an expectation <= 0
    """
    if K_prior <= 1 or N_prior <= 1:
        raise ConfigError(f"Prior counts must exceed 1, got K={K_prior}, N={N_prior}")
    if not (e_sigma_z2 > 0 and e_sigma_w2 > 0):
        raise ConfigError(
            f"Expected variances must be positive, got E[sz2]={e_sigma_z2}, E[sw2]={e_sigma_w2}"
        )
    alpha_noise = (N_prior + 3) / 2
    scale = (N_prior + 1) / 2
    return Hyperparams(
        alpha_x=(K_prior + 3) / 2,
        beta_x=(K_prior + 1) / 2,
        alpha_z=alpha_noise,
        beta_z=scale * e_sigma_z2,
        alpha_w=alpha_noise,
        beta_w=scale * e_sigma_w2,
    )

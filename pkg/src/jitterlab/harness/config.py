"""
Experiment Configuration

Flat key-value configuration of one experiment run, loaded from YAML and
overridable from the command line.
"""

import itertools
from dataclasses import dataclass, fields, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import yaml

from ..em.config import EmConfig
from ..errors import ConfigError
from ..model.geometry import ModelConfig
from ..model.priors import Hyperparams, hyperparams_from_expected
from ..sampler.state import SliceConfig

FULL_SCALE = {"trials": 1000, "chains": 100, "likelihood_draws": 100_000}


class Experiment(Enum):
    """Experiments the runner can dispatch"""
    VALIDATE_LIKELIHOOD = "validate-likelihood"
    CONVERGE = "converge"
    INIT_SENSITIVITY = "init-sensitivity"
    COMPARE = "compare"
    IMPROVE = "improve"
    SHRINKAGE = "shrinkage"
    EM_VARIANCE = "em-variance"


@dataclass(frozen=True)
class SweepPoint:
    """One (M, E[sigma_z^2], E[sigma_w^2]) combination"""
    M: int
    e_sigma_z2: float
    e_sigma_w2: float

    @property
    def e_sigma_z(self) -> float:
        return self.e_sigma_z2 ** 0.5

    @property
    def e_sigma_w(self) -> float:
        return self.e_sigma_w2 ** 0.5

    def label(self) -> str:
        return f"M={self.M},sigma_z={self.e_sigma_z!r},sigma_w={self.e_sigma_w!r}"


Sweep = Union[float, Sequence[float]]


def _as_list(name: str, value: Any, cast) -> List[Any]:
    values = list(value) if isinstance(value, (list, tuple)) else [value]
    if not values:
        raise ConfigError(f"Sweep list {name} must not be empty")
    try:
        return [cast(v) for v in values]
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid value in {name}: {e}") from e


def _as_point(value: Any) -> List[Any]:
    """[M, e_sigma_z2, e_sigma_w2] from a mapping or a three-element list"""
    if isinstance(value, dict):
        missing = sorted({"M", "e_sigma_z2", "e_sigma_w2"} - set(value))
        extra = sorted(set(value) - {"M", "e_sigma_z2", "e_sigma_w2"})
        if missing or extra:
            raise ConfigError(f"Sweep point needs exactly M, e_sigma_z2, e_sigma_w2; got {sorted(value)}")
        value = [value["M"], value["e_sigma_z2"], value["e_sigma_w2"]]
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ConfigError(f"Sweep point must be [M, e_sigma_z2, e_sigma_w2], got {value!r}")
    try:
        return [int(value[0]), float(value[1]), float(value[2])]
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid sweep point {value!r}: {e}") from e


@dataclass
class ExperimentConfig:
    """Configuration for one experiment run"""
    experiment: Experiment = Experiment.COMPARE
    seed: Optional[int] = None

    # Model and sweep
    K: int = 10
    M: Union[int, List[int]] = 4
    e_sigma_z2: Sweep = 0.0625
    e_sigma_w2: Sweep = 0.01
    K_prior: Optional[int] = None
    N_prior: Optional[int] = None
    # Explicit (M, e_sigma_z2, e_sigma_w2) points; replace the product of the three lists
    points: Optional[List[Any]] = None

    # Quadrature
    J1: int = 9
    J2: int = 9
    J3: int = 129
    z_range: float = 6.0

    # Sampler
    tau: float = 25.0
    max_shrink_iters: int = 1000
    I: int = 500
    I_b: int = 500
    chains: int = 20
    checkpoint_every: int = 10

    # EM
    em_max_iters: int = 200
    em_tol: float = 1e-6
    em_random_variance: bool = False

    # Likelihood validation
    likelihood_draws: int = 20_000
    likelihood_grid: int = 200
    histogram_bins: int = 30

    # Harness
    trials: int = 200
    workers: int = 1
    record_wall_time: bool = False
    output: str = "results.csv"
    emit_plotdata: Optional[str] = None

    # Logging
    log_level: str = "INFO"
    log_file: Optional[str] = None

    def __post_init__(self):
        if isinstance(self.experiment, str):
            try:
                self.experiment = Experiment(self.experiment)
            except ValueError as e:
                choices = [x.value for x in Experiment]
                raise ConfigError(f"Unknown experiment {self.experiment!r}; expected one of {choices}") from e
        if self.seed is None:
            raise ConfigError("seed is mandatory")
        self.seed = int(self.seed)
        for name in ("K", "J1", "J2", "J3", "max_shrink_iters", "I", "I_b", "chains", "checkpoint_every",
                     "em_max_iters", "likelihood_draws", "likelihood_grid", "histogram_bins", "trials", "workers"):
            setattr(self, name, int(getattr(self, name)))
        for name in ("z_range", "tau", "em_tol"):
            setattr(self, name, float(getattr(self, name)))
        self.M = _as_list("M", self.M, int)
        self.e_sigma_z2 = _as_list("e_sigma_z2", self.e_sigma_z2, float)
        self.e_sigma_w2 = _as_list("e_sigma_w2", self.e_sigma_w2, float)
        if self.points is not None:
            self.points = [_as_point(p) for p in _as_list("points", self.points, lambda p: p)]
        self._validate()

    def _validate(self) -> None:
        problems = []
        if self.trials < 1:
            problems.append(f"trials must be >= 1, got {self.trials}")
        if self.chains < 1:
            problems.append(f"chains must be >= 1, got {self.chains}")
        if self.I < 1 or self.I_b < 0:
            problems.append(f"need I >= 1 and I_b >= 0, got I={self.I}, I_b={self.I_b}")
        if self.workers < 1:
            problems.append(f"workers must be >= 1, got {self.workers}")
        if self.checkpoint_every < 1:
            problems.append(f"checkpoint_every must be >= 1, got {self.checkpoint_every}")
        points = self.sweep()
        if any(p.M < 1 for p in points):
            problems.append(f"M values must be >= 1, got {sorted({p.M for p in points})}")
        if any(not (p.e_sigma_z2 > 0 and p.e_sigma_w2 > 0) for p in points):
            problems.append("expected variances must be positive")
        if self.experiment in (Experiment.CONVERGE, Experiment.SHRINKAGE) and self.chains < 2:
            problems.append(f"{self.experiment.value} needs at least 2 chains")
        if self.log_level.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            problems.append(f"unknown log_level {self.log_level!r}")
        if problems:
            raise ConfigError("Invalid experiment configuration: " + "; ".join(problems))

    # Derived objects

    def sweep(self) -> List[SweepPoint]:
        """Every (M, E[sigma_z^2], E[sigma_w^2]) combination in config order"""
        if self.points is not None:
            return [SweepPoint(*p) for p in self.points]
        return [
            SweepPoint(m, sz2, sw2)
            for m, sw2, sz2 in itertools.product(self.M, self.e_sigma_w2, self.e_sigma_z2)
        ]

    def model_config(self, point: SweepPoint) -> ModelConfig:
        return ModelConfig(K=self.K, M=point.M)

    def hyperparams(self, point: SweepPoint) -> Hyperparams:
        """Priors fitted with the signal's own K and N unless counts are given"""
        return hyperparams_from_expected(
            self.K_prior or self.K,
            self.N_prior or self.K * point.M,
            point.e_sigma_z2,
            point.e_sigma_w2,
        )

    def slice_config(self, tau: Optional[float] = None) -> SliceConfig:
        return SliceConfig(tau=self.tau if tau is None else tau, max_shrink_iters=self.max_shrink_iters)

    def em_config(self, sigma_z2: Optional[float] = None, sigma_w2: Optional[float] = None) -> EmConfig:
        """Random-variance EM settings, or known-variance ones when both variances are given"""
        common = dict(J1=self.J1, J2=self.J2, J3=self.J3, max_iters=self.em_max_iters,
                      tol=self.em_tol, z_range=self.z_range)
        if sigma_z2 is not None and sigma_w2 is not None:
            return EmConfig.known(sigma_z2, sigma_w2, **common)
        return EmConfig(**common)

    def with_overrides(self, **overrides: Any) -> "ExperimentConfig":
        """Copy with non-None overrides applied"""
        changes = {k: v for k, v in overrides.items() if v is not None}
        unknown = sorted(set(changes) - {f.name for f in fields(self)})
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {unknown}")
        return replace(self, **changes)

    def with_full_scale(self) -> "ExperimentConfig":
        return self.with_overrides(**FULL_SCALE)

    # Serialisation

    def to_dict(self) -> Dict[str, Any]:
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data["experiment"] = self.experiment.value
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError(f"Configuration must be a mapping, got {type(data).__name__}")
        data = data.copy()
        unknown = sorted(set(data) - {f.name for f in fields(cls)})
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {unknown}")
        return cls(**data)

    @classmethod
    def from_yaml(cls, path: str, **overrides: Any) -> "ExperimentConfig":
        """Load config from YAML file, applying non-None overrides before validation"""
        try:
            with open(path, "r") as f:
                data = yaml.safe_load(f) or {}
        except OSError as e:
            raise ConfigError(f"Cannot read configuration {path}: {e}") from e
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid YAML in {path}: {e}") from e
        if isinstance(data, dict) and set(data) == {"experiment_config"}:
            data = data["experiment_config"]
        if not isinstance(data, dict):
            raise ConfigError(f"Configuration in {path} must be a mapping")
        data = dict(data)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(data)

    def output_path(self, suffix: str = "") -> Path:
        """Main output path, or a sibling such as ``<stem>.trials.csv``"""
        path = Path(self.output)
        if not suffix:
            return path
        return path.with_name(f"{path.stem}{suffix}")

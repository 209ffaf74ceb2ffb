"""
Jitter Improvement Factor

How much more jitter a method tolerates than the no-jitter LMMSE baseline
at equal MSE, read off piecewise-linear curves in (log sigma_z, dB).
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..errors import ConfigError

logger = logging.getLogger(__name__)

IMPROVE_FIELDS = ["method", "m", "e_sigma_w", "factor", "sigma_z_star", "flags"]


@dataclass(frozen=True)
class MseCurve:
    """MSE in dB against jitter standard deviation, sorted by sigma_z"""
    sigma_z: np.ndarray
    mse_db: np.ndarray

    def __post_init__(self):
        sigma_z = np.asarray(self.sigma_z, dtype=float)
        mse_db = np.asarray(self.mse_db, dtype=float)
        if sigma_z.shape != mse_db.shape or sigma_z.ndim != 1:
            raise ConfigError(f"Curve arrays must be 1-D and equal length, got {sigma_z.shape} and {mse_db.shape}")
        if np.any(sigma_z <= 0):
            raise ConfigError("Curve sigma_z values must be positive")
        order = np.argsort(sigma_z)
        object.__setattr__(self, "sigma_z", sigma_z[order])
        object.__setattr__(self, "mse_db", mse_db[order])

    def restricted(self, sigma_z_min: float) -> "MseCurve":
        keep = (self.sigma_z >= sigma_z_min) & np.isfinite(self.mse_db)
        return MseCurve(self.sigma_z[keep], self.mse_db[keep])


@dataclass(frozen=True)
class ImprovementResult:
    factor: float
    sigma_z_star: float
    flags: Tuple[str, ...] = ()


def _inverse(curve: MseCurve) -> Tuple[np.ndarray, np.ndarray]:
    """Monotone (dB, log sigma_z) pairs for inverse interpolation"""
    # MSE grows with jitter; sampling noise is removed with a running maximum
    db = np.maximum.accumulate(curve.mse_db)
    log_sigma = np.log(curve.sigma_z)
    db, first = np.unique(db, return_index=True)
    return db, log_sigma[first]


def improvement_factor(
    baseline: MseCurve,
    method: MseCurve,
    sigma_z_min: float = 0.0,
) -> ImprovementResult:
    """
    Largest ratio sigma_z1 / sigma_z0 over baseline targets.

    Every baseline point (sigma_z0, mse) with sigma_z0 >= sigma_z_min is a
    target; sigma_z1 is where the method's curve reaches the same MSE.
    Targets outside the method's range are skipped and flagged.

    Returns:
        ImprovementResult; factor is nan when no target is reachable
    """
    baseline = baseline.restricted(sigma_z_min)
    method = method.restricted(sigma_z_min)
    flags: List[str] = []
    if baseline.sigma_z.size == 0 or method.sigma_z.size == 0:
        return ImprovementResult(float("nan"), float("nan"), ("empty_domain",))

    db, log_sigma = _inverse(method)
    best_factor, best_sigma = float("nan"), float("nan")
    skipped = 0
    for sigma_z0, target in zip(baseline.sigma_z, baseline.mse_db):
        if not db[0] <= target <= db[-1]:
            skipped += 1
            continue
        sigma_z1 = float(np.exp(np.interp(target, db, log_sigma)))
        factor = sigma_z1 / float(sigma_z0)
        if np.isnan(best_factor) or factor > best_factor:
            best_factor, best_sigma = factor, sigma_z1

    if skipped == baseline.sigma_z.size:
        flags.append("no_targets")
        logger.warning("Improvement factor: no baseline target lies in the method's MSE range")
    elif skipped:
        flags.append(f"unreachable_targets={skipped}")
    return ImprovementResult(best_factor, best_sigma, tuple(flags))


def curves_from_summaries(summaries: Sequence, method: str, m: int, e_sigma_w: float) -> MseCurve:
    """MSE-vs-sigma_z curve of one method at fixed (M, sigma_w)"""
    chosen = [s for s in summaries if s.method == method and s.m == m and s.e_sigma_w == e_sigma_w]
    return MseCurve(np.array([s.e_sigma_z for s in chosen]), np.array([s.mse_db for s in chosen]))

"""
Slice Sampling of Jitters

Shrinkage slice sampler for the jitter conditional, with the optional
midpoint-threshold rule. The initial bracket comes from the bound on the
normalised conditional, so no stepping out is needed.

All index sets are updated together: given x and the variances each z_n has
its own conditional, so one vectorised sweep equals N scalar updates.
"""

import logging
from dataclasses import dataclass
from typing import Any, Optional, Tuple, Union

import numpy as np

from ..distributions.conditional import log_density_bound, log_unnormalized_z_conditional
from ..errors import SliceSamplingError
from ..model.geometry import ModelConfig
from .state import ChainState, SliceConfig

logger = logging.getLogger(__name__)

# Rounding slack for log_u against the density bound
BOUND_SLACK = 1e-12


def slice_initial_interval(
    log_u: Any,
    sigma_z2: float,
    sigma_w2: float,
) -> Tuple[Union[float, np.ndarray], Union[float, np.ndarray]]:
    """
    Symmetric bracket [-R, R] containing the slice at level log_u.

    R = sigma_z sqrt(-2 log_u - 2 log(2 pi sigma_z sigma_w)).

    Raises:
        SliceSamplingError: If log_u lies above the density bound
    """
    log_u = np.asarray(log_u, dtype=float)
    arg = 2.0 * (log_density_bound(sigma_z2, sigma_w2) - log_u)
    if np.any(arg < -BOUND_SLACK):
        raise SliceSamplingError(
            f"Slice level {float(np.max(log_u))} exceeds the density bound "
            f"{log_density_bound(sigma_z2, sigma_w2)}"
        )
    R = np.sqrt(sigma_z2) * np.sqrt(np.maximum(arg, 0.0))
    if R.ndim == 0:
        return -float(R), float(R)
    return -R, R


@dataclass(frozen=True)
class SliceResult:
    """
    Outcome of slice updates for a set of indices.

    Attributes:
        z: Accepted jitters, aligned with ``indices``
        log_u: Slice levels used
        shrink_counts: Rejections before acceptance, per index
        width_ratios: New/old bracket width for every rejection
    """
    indices: np.ndarray
    z: np.ndarray
    log_u: np.ndarray
    shrink_counts: np.ndarray
    width_ratios: np.ndarray

    @property
    def total_shrinks(self) -> int:
        return int(self.shrink_counts.sum())


def midpoint_shrink(L: np.ndarray, R: np.ndarray, anchor: np.ndarray, far: np.ndarray):
    """
    Move one end of each flagged interval to its midpoint.

    The left end moves when the midpoint lies below the anchor, the right
    end otherwise; unflagged intervals are returned unchanged.
    """
    mid = 0.5 * (L + R)
    left = mid < anchor
    return np.where(far & left, mid, L), np.where(far & ~left, mid, R)


def slice_update(
    state: ChainState,
    indices: Any,
    y_values: Any,
    config: ModelConfig,
    cfg: SliceConfig,
    rng: np.random.Generator,
    start: Optional[Any] = None,
) -> SliceResult:
    """
    One slice update for every listed index, starting from ``state.z``.

    Args:
        state: Current chain state
        indices: Sample indices n to update
        y_values: Observations y_n aligned with ``indices``
        config: Sampling geometry
        cfg: Slice settings
        rng: Random generator
        start: Starting jitters aligned with ``indices``; replaces
            ``state.z[indices]``, so one index may appear several times as
            independent replicas

    Returns:
        SliceResult; every accepted z satisfies log p(z) >= log_u

    Raises:
        SliceSamplingError: If an update exceeds ``cfg.max_shrink_iters``
    """
    indices = np.atleast_1d(np.asarray(indices))
    y_values = np.atleast_1d(np.asarray(y_values, dtype=float))
    z_prev = np.asarray(state.z, dtype=float)[indices] if start is None else np.atleast_1d(np.array(start, dtype=float))

    def log_density(z: np.ndarray, rows: np.ndarray) -> np.ndarray:
        return np.asarray(
            log_unnormalized_z_conditional(
                z, indices[rows], y_values[rows], state.x, state.sigma_z2, state.sigma_w2, config
            )
        )

    every = np.arange(indices.size)
    # log(1 - U) keeps the level finite for U in [0, 1)
    log_u = log_density(z_prev, every) + np.log1p(-rng.random(indices.size))
    L, R = slice_initial_interval(log_u, state.sigma_z2, state.sigma_w2)
    L = np.array(L, dtype=float)
    R = np.array(R, dtype=float)

    z_new = np.empty(indices.size)
    shrink_counts = np.zeros(indices.size, dtype=np.int64)
    ratios = []
    active = every
    for _ in range(cfg.max_shrink_iters):
        proposal = L[active] + (R[active] - L[active]) * rng.random(active.size)
        log_p = log_density(proposal, active)
        accepted = log_p >= log_u[active]
        z_new[active[accepted]] = proposal[accepted]

        rejected = active[~accepted]
        if rejected.size == 0:
            break
        proposal = proposal[~accepted]
        log_p = log_p[~accepted]
        anchor = z_prev[rejected]
        width = R[rejected] - L[rejected]

        below = proposal < anchor
        L[rejected] = np.where(below, proposal, L[rejected])
        R[rejected] = np.where(below, R[rejected], proposal)

        if cfg.tau > 0:
            far = log_p < log_u[rejected] - cfg.tau
            L[rejected], R[rejected] = midpoint_shrink(L[rejected], R[rejected], anchor, far)

        with np.errstate(divide="ignore", invalid="ignore"):
            ratios.append((R[rejected] - L[rejected]) / width)
        shrink_counts[rejected] += 1
        active = rejected
    else:
        logger.warning(f"Slice shrinkage cap hit for indices {indices[active].tolist()}")
        raise SliceSamplingError(
            f"Slice update exceeded {cfg.max_shrink_iters} shrink iterations "
            f"for n={indices[active].tolist()} (sigma_z2={state.sigma_z2}, sigma_w2={state.sigma_w2})"
        )

    width_ratios = np.concatenate(ratios) if ratios else np.zeros(0)
    return SliceResult(indices, z_new, log_u, shrink_counts, width_ratios[np.isfinite(width_ratios)])


def slice_sweep(
    state: ChainState,
    y: np.ndarray,
    config: ModelConfig,
    cfg: SliceConfig,
    rng: np.random.Generator,
) -> SliceResult:
    """Update every z_n, n = 0 .. N-1"""
    return slice_update(state, np.arange(config.N), y, config, cfg, rng)


def slice_sample_z(
    state: ChainState,
    n: int,
    y_n: float,
    config: ModelConfig,
    cfg: Optional[SliceConfig] = None,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """Draw a new z_n from its conditional by one slice update"""
    rng = rng if rng is not None else np.random.default_rng()
    result = slice_update(state, [n], [y_n], config, cfg or SliceConfig(), rng)
    return float(result.z[0])

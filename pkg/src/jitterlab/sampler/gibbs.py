"""
Gibbs Sampler

Cycles through the jitter, coefficient and variance conditionals and
averages the post-burn-in draws into posterior-mean estimates.
"""

import logging
from collections import deque
from typing import Any, FrozenSet, Iterable, Optional, Sequence, Tuple

import numpy as np

from ..distributions.inverse_gamma import sample_inverse_gamma
from ..errors import ConfigError, GibbsError, JitterlabError
from ..model.geometry import ModelConfig
from ..model.priors import Hyperparams
from ..streams import RngLike, as_generator
from .conditionals import posterior_variance_params, sample_coefficients
from .init import default_initial_state
from .slice import slice_sweep
from .state import ChainState, GibbsOutput, SliceConfig, check_pinned

logger = logging.getLogger(__name__)

DEFAULT_ITERATIONS = 500
DEFAULT_BURN_IN = 500


def gibbs_step(
    state: ChainState,
    y: np.ndarray,
    config: ModelConfig,
    hyper: Hyperparams,
    slice_cfg: SliceConfig,
    rng: np.random.Generator,
    pinned: FrozenSet[str] = frozenset(),
) -> Tuple[ChainState, int]:
    """
    One sweep: every z_n, then x, then sigma_x^2, sigma_z^2, sigma_w^2.

    Returns:
        (new state, total shrink iterations of the jitter sweep)
    """
    shrinks = 0
    if "z" not in pinned:
        sweep = slice_sweep(state, y, config, slice_cfg, rng)
        state = state.update(z=sweep.z)
        shrinks = sweep.total_shrinks
    if "x" not in pinned:
        state = state.update(x=sample_coefficients(state, y, config, rng))

    params = posterior_variance_params(state, y, hyper, config)
    variances = {}
    for name, p in zip(("sigma_x2", "sigma_z2", "sigma_w2"), params):
        if name not in pinned:
            variances[name] = float(sample_inverse_gamma(p, rng))
    state = state.update(iteration=state.iteration + 1, **variances)
    return state, shrinks


def run_chain(
    y: np.ndarray,
    config: ModelConfig,
    hyper: Hyperparams,
    I: int = DEFAULT_ITERATIONS,
    I_b: int = DEFAULT_BURN_IN,
    slice_cfg: Optional[SliceConfig] = None,
    init: Optional[ChainState] = None,
    rng: Optional[RngLike] = None,
    pinned: Optional[Iterable[str]] = None,
    record_trace: bool = False,
    trace_window: Optional[int] = None,
    checkpoints: Sequence[int] = (),
) -> GibbsOutput:
    """
    Run one Gibbs/slice chain.

    Args:
        y: Observations
        config: Sampling geometry
        hyper: Priors (Jeffreys mode allowed)
        I: Iterations averaged
        I_b: Burn-in iterations discarded
        slice_cfg: Slice settings
        init: Starting state; defaults to ``default_initial_state``
        rng: Seed or Generator
        pinned: Variables held at their initial value
        record_trace: Keep combined state vectors per iteration
        trace_window: Keep only the last ``trace_window`` rows
        checkpoints: Post-burn-in counts at which to record running x means

    Returns:
        GibbsOutput

    Raises:
        GibbsError: Wrapping any failure, with the iteration it occurred in
    """
    if I < 1 or I_b < 0:
        raise ConfigError(f"Need I >= 1 and I_b >= 0, got I={I}, I_b={I_b}")
    bad = [c for c in checkpoints if not 1 <= c <= I]
    if bad:
        raise ConfigError(f"Checkpoints must lie in [1, {I}], got {bad}")

    y = np.asarray(y, dtype=float)
    gen = as_generator(rng if rng is not None else np.random.default_rng())
    slice_cfg = slice_cfg or SliceConfig()
    pinned_set = check_pinned(pinned)
    state = (init or default_initial_state(y, config, hyper)).validate(config)
    state = state.update(iteration=0)

    total = I_b + I
    trace: Optional[Any] = deque(maxlen=trace_window) if record_trace else None
    shrink_iterations = np.zeros(total, dtype=np.int64)
    wanted = set(checkpoints)
    x_checkpoints = {}
    sums = [np.zeros(config.K), np.zeros(config.N), 0.0, 0.0, 0.0]

    for i in range(1, total + 1):
        try:
            state, shrink_iterations[i - 1] = gibbs_step(state, y, config, hyper, slice_cfg, gen, pinned_set)
        except JitterlabError as e:
            logger.debug(f"Gibbs failure at iteration {i}: {e}")
            raise GibbsError(f"Iteration {i}: {type(e).__name__}: {e}", iteration=i) from e

        if trace is not None:
            trace.append(state.as_vector())
        if i > I_b:
            sums[0] += state.x
            sums[1] += state.z
            sums[2] += state.sigma_x2
            sums[3] += state.sigma_z2
            sums[4] += state.sigma_w2
            count = i - I_b
            if count in wanted:
                x_checkpoints[count] = sums[0] / count

    trace_array = np.array(trace) if trace is not None else None
    return GibbsOutput(
        x_hat=sums[0] / I,
        z_hat=sums[1] / I,
        sigma_x2_hat=sums[2] / I,
        sigma_z2_hat=sums[3] / I,
        sigma_w2_hat=sums[4] / I,
        final_state=state,
        trace=trace_array,
        trace_start=total - len(trace) + 1 if trace is not None else 1,
        shrink_iterations=shrink_iterations,
        x_checkpoints=x_checkpoints,
    )

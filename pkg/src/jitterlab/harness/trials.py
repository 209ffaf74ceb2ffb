"""
Trial Workers

Top-level work items for the process pool: one synthetic trial through a
set of estimators, one trial through the initialisation presets, and one
chain of the convergence studies.
"""

import logging
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..em.iterate import em_iterate
from ..errors import JitterlabError
from ..linear.lmmse import LmmsePrecompute, lmmse_estimate, lmmse_precompute, no_jitter_precompute
from ..model.geometry import ModelConfig
from ..model.priors import Hyperparams
from ..model.synthesis import SyntheticInstance, synthesize
from ..sampler.gibbs import run_chain
from ..sampler.init import InitPreset, initial_state
from ..streams import GIBBS, INIT, SYNTHESIS, stream, trial_seed
from .config import ExperimentConfig, SweepPoint
from .records import Method, TrialRecord

logger = logging.getLogger(__name__)

FAILURES = (JitterlabError, np.linalg.LinAlgError, FloatingPointError)


@lru_cache(maxsize=32)
def cached_lmmse(model: ModelConfig, hyper: Hyperparams, J2: int, J3: int, z_range: float) -> LmmsePrecompute:
    logger.debug(f"Precomputing jitter LMMSE for K={model.K}, M={model.M}")
    return lmmse_precompute(model, hyper, J2, J3, z_range)


@lru_cache(maxsize=32)
def cached_no_jitter(model: ModelConfig, hyper: Hyperparams) -> LmmsePrecompute:
    return no_jitter_precompute(model, hyper)


@dataclass
class TrialContext:
    """Everything an estimator needs for one trial"""
    config: ExperimentConfig
    point: SweepPoint
    trial: int
    seed: int
    model: ModelConfig
    hyper: Hyperparams
    instance: SyntheticInstance

    @classmethod
    def create(cls, config: ExperimentConfig, point: SweepPoint, trial: int) -> "TrialContext":
        seed = trial_seed(config.seed, trial)
        model = config.model_config(point)
        hyper = config.hyperparams(point)
        instance = synthesize(model, hyper, stream(seed, SYNTHESIS))
        return cls(config, point, trial, seed, model, hyper, instance)

    def record(self, method: str, squared_error: float, wall_ms: float, flags: Sequence[str] = ()) -> TrialRecord:
        return TrialRecord(
            trial=self.trial,
            method=method,
            m=self.point.M,
            e_sigma_z=self.point.e_sigma_z,
            e_sigma_w=self.point.e_sigma_w,
            squared_error=squared_error,
            wall_time_ms=wall_ms if self.config.record_wall_time else None,
            seed=self.seed,
            flags=";".join(flags),
        )


def _lmmse0(ctx: TrialContext, flags: List[str]) -> np.ndarray:
    return lmmse_estimate(ctx.instance.y, cached_no_jitter(ctx.model, ctx.hyper))


def _lmmse(ctx: TrialContext, flags: List[str]) -> np.ndarray:
    cfg = ctx.config
    return lmmse_estimate(ctx.instance.y, cached_lmmse(ctx.model, ctx.hyper, cfg.J2, cfg.J3, cfg.z_range))


def _em(ctx: TrialContext, flags: List[str], known: bool = True) -> np.ndarray:
    inst = ctx.instance
    em_cfg = ctx.config.em_config(inst.sigma_z2, inst.sigma_w2) if known else ctx.config.em_config()
    x0 = _lmmse0(ctx, flags)
    result = em_iterate(inst.y, x0, ctx.hyper, ctx.model, em_cfg)
    if not result.converged:
        flags.append("not_converged")
    return result.x_hat


def _em_random(ctx: TrialContext, flags: List[str]) -> np.ndarray:
    return _em(ctx, flags, known=False)


def _gibbs(ctx: TrialContext, flags: List[str]) -> np.ndarray:
    cfg = ctx.config
    output = run_chain(
        ctx.instance.y,
        ctx.model,
        ctx.hyper,
        I=cfg.I,
        I_b=cfg.I_b,
        slice_cfg=cfg.slice_config(),
        rng=stream(ctx.seed, GIBBS, 0),
    )
    return output.x_hat


ESTIMATORS: Dict[str, Callable[[TrialContext, List[str]], np.ndarray]] = {
    Method.LMMSE_NO_JITTER: _lmmse0,
    Method.LMMSE: _lmmse,
    Method.EM: _em,
    Method.EM_RANDOM: _em_random,
    Method.GIBBS: _gibbs,
}


def _run_method(ctx: TrialContext, name: str, estimate: Callable[[List[str]], np.ndarray]) -> TrialRecord:
    flags: List[str] = []
    start = time.perf_counter()
    try:
        error = ctx.instance.squared_error(estimate(flags))
    except FAILURES as e:
        logger.warning(f"Trial {ctx.trial} ({ctx.point.label()}) method {name} failed: {e}")
        error = float("nan")
        flags.append(f"error:{type(e).__name__}")
    wall_ms = (time.perf_counter() - start) * 1000.0
    return ctx.record(name, error, wall_ms, flags)


@dataclass(frozen=True)
class TrialTask:
    """One trial at one sweep point through ``methods``"""
    config: ExperimentConfig
    point: SweepPoint
    trial: int
    methods: Tuple[str, ...]


def run_trial(task: TrialTask) -> List[TrialRecord]:
    ctx = TrialContext.create(task.config, task.point, task.trial)
    return [
        _run_method(ctx, name, lambda flags, name=name: ESTIMATORS[name](ctx, flags))
        for name in task.methods
    ]


def preset_method(preset: InitPreset) -> str:
    return f"gibbs@{preset.value}"


def run_init_trial(task: TrialTask) -> List[TrialRecord]:
    """Gibbs runs of one trial from each initialisation preset"""
    ctx = TrialContext.create(task.config, task.point, task.trial)
    cfg = ctx.config
    records = []
    for index, preset in enumerate(InitPreset.all()):
        def estimate(flags: List[str], index: int = index, preset: InitPreset = preset) -> np.ndarray:
            init = initial_state(
                preset, ctx.instance.y, ctx.model, ctx.hyper,
                instance=ctx.instance, rng=stream(ctx.seed, INIT, index),
            )
            output = run_chain(
                ctx.instance.y, ctx.model, ctx.hyper, I=cfg.I, I_b=cfg.I_b,
                slice_cfg=cfg.slice_config(), init=init, rng=stream(ctx.seed, GIBBS, index),
            )
            return output.x_hat

        records.append(_run_method(ctx, preset_method(preset), estimate))
    return records


@dataclass(frozen=True)
class ChainTask:
    """One chain of the convergence study on the shared trial-0 instance"""
    config: ExperimentConfig
    point: SweepPoint
    chain: int
    tau: Optional[float] = None


def run_converge_chain(task: ChainTask) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns:
        (trace of shape (I_b + I, K + N + 3), shrink iterations per sweep)
    """
    ctx = TrialContext.create(task.config, task.point, 0)
    cfg = ctx.config
    output = run_chain(
        ctx.instance.y, ctx.model, ctx.hyper, I=cfg.I, I_b=cfg.I_b,
        slice_cfg=cfg.slice_config(task.tau), rng=stream(ctx.seed, GIBBS, task.chain),
        record_trace=True,
    )
    return output.trace, output.shrink_iterations


def mse_checkpoints(config: ExperimentConfig) -> List[int]:
    """Post-burn-in sample counts I at which the MSE curve is evaluated"""
    points = list(range(config.checkpoint_every, config.I + 1, config.checkpoint_every))
    if not points or points[-1] != config.I:
        points.append(config.I)
    return points


def run_mse_curve_trial(task: TrialTask) -> Tuple[int, np.ndarray]:
    """Squared error of the running x mean at every checkpoint count, nan on failure"""
    ctx = TrialContext.create(task.config, task.point, task.trial)
    cfg = ctx.config
    checkpoints = mse_checkpoints(cfg)
    try:
        output = run_chain(
            ctx.instance.y, ctx.model, ctx.hyper, I=cfg.I, I_b=cfg.I_b,
            slice_cfg=cfg.slice_config(), rng=stream(ctx.seed, GIBBS, 0), checkpoints=checkpoints,
        )
    except FAILURES as e:
        logger.warning(f"Trial {task.trial} ({task.point.label()}) MSE curve failed: {e}")
        return task.trial, np.full(len(checkpoints), np.nan)
    return task.trial, np.array([ctx.instance.squared_error(output.x_checkpoints[c]) for c in checkpoints])

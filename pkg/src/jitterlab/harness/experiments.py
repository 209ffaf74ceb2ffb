"""
Experiments

Each experiment turns an ExperimentConfig into output tables. Work items go
through a ``mapper`` (built-in ``map`` or a process pool's ``map``), which
returns results in submission order, so tables never depend on scheduling.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from ..diagnostics.psrf import ChainTraces, psrf
from ..distributions.inverse_gamma import sample_inverse_gamma
from ..errors import DiagnosticsError
from ..model.geometry import h_rows
from ..quadrature.hybrid import log_marginal_likelihood, prior_hybrid
from ..sampler.init import InitPreset
from ..streams import LIKELIHOOD, stream
from .aggregate import NORMALIZED_FIELDS, MseSummary, normalized_to_reference, summarize
from .config import Experiment, ExperimentConfig, SweepPoint
from .improvement import IMPROVE_FIELDS, curves_from_summaries, improvement_factor
from .records import TRIAL_FIELDS, Method, TrialRecord
from .trials import (
    ChainTask,
    TrialTask,
    mse_checkpoints,
    preset_method,
    run_converge_chain,
    run_init_trial,
    run_mse_curve_trial,
    run_trial,
)

logger = logging.getLogger(__name__)

Mapper = Callable[[Callable[[Any], Any], Sequence[Any]], Iterable[Any]]

VALIDATE_FIELDS = ["m", "e_sigma_z", "e_sigma_w", "n", "inner_rule", "sup_relative_deviation", "grid_mass", "worst"]
CONVERGE_FIELDS = ["metric", "index", "value", "label"]
COMPARE_METHODS = (Method.LMMSE_NO_JITTER, Method.LMMSE, Method.EM, Method.GIBBS)
DENSITY_FLOOR = 0.1
TAIL_QUANTILE = 1e-3
# Grid points per likelihood evaluation; bounds the (grid, J1, J2*J3) term array
GRID_CHUNK = 25
DEFAULT_TAU = 25.0


@dataclass
class Table:
    """Rows for one output file; ``suffix`` selects a sibling of the main output"""
    fieldnames: List[str]
    rows: List[Dict[str, Any]]
    suffix: str = ""


@dataclass
class ExperimentResult:
    experiment: Experiment
    tables: List[Table] = field(default_factory=list)
    records: List[TrialRecord] = field(default_factory=list)
    summaries: List[MseSummary] = field(default_factory=list)


def _collect_trials(
    cfg: ExperimentConfig,
    mapper: Mapper,
    worker: Callable[[TrialTask], List[TrialRecord]],
    methods: Sequence[str] = (),
) -> List[TrialRecord]:
    records: List[TrialRecord] = []
    for point in cfg.sweep():
        logger.info(f"Sweep point {point.label()}: {cfg.trials} trials")
        tasks = [TrialTask(cfg, point, trial, tuple(methods)) for trial in range(cfg.trials)]
        point_records = [record for rows in mapper(worker, tasks) for record in rows]
        records.extend(point_records)
        failed = sum(r.failed for r in point_records)
        if failed:
            logger.warning(f"Sweep point {point.label()}: {failed} flagged rows")
    return sorted(records, key=lambda r: r.sort_key)


def _trial_table(records: List[TrialRecord], suffix: str = "") -> Table:
    return Table(TRIAL_FIELDS, [r.to_dict() for r in records], suffix)


# Likelihood validation

def validate_point(cfg: ExperimentConfig, point: SweepPoint) -> List[Dict[str, Any]]:
    """
    Quadrature p(y_n | x) against a Monte Carlo histogram for every n.

    The quadrature density is evaluated on a ``likelihood_grid`` grid and
    averaged over the histogram bins through its cumulative integral; the
    deviation is taken where the bin average exceeds 10% of its maximum.
    """
    model = cfg.model_config(point)
    hyper = cfg.hyperparams(point)
    hybrid = prior_hybrid(hyper, cfg.J1, cfg.J2, cfg.J3, cfg.z_range)
    x = np.sqrt(hyper.mean_sigma_x2) * stream(cfg.seed, LIKELIHOOD, 0).standard_normal(model.K)

    rows = []
    for n in range(model.N):
        rng = stream(cfg.seed, LIKELIHOOD, 1, n)
        D = cfg.likelihood_draws
        sigma_z2 = sample_inverse_gamma(hyper.sigma_z2_prior, rng, D)
        sigma_w2 = sample_inverse_gamma(hyper.sigma_w2_prior, rng, D)
        z = np.sqrt(sigma_z2) * rng.standard_normal(D)
        y = h_rows(n, z, model) @ x + np.sqrt(sigma_w2) * rng.standard_normal(D)

        low, high = np.quantile(y, [TAIL_QUANTILE, 1 - TAIL_QUANTILE])
        edges = np.linspace(low, high, cfg.histogram_bins + 1)
        counts, _ = np.histogram(y, edges)
        histogram = counts / (D * np.diff(edges))

        grid = np.linspace(low, high, cfg.likelihood_grid)
        density = np.exp(np.concatenate([
            log_marginal_likelihood(chunk, n, x, hybrid, model)
            for chunk in np.array_split(grid, -(-grid.size // GRID_CHUNK))
        ]))
        cdf = cumulative_trapezoid(density, grid, initial=0.0)
        expected = np.diff(np.interp(edges, grid, cdf)) / np.diff(edges)

        mask = expected > DENSITY_FLOOR * expected.max()
        deviation = float(np.max(np.abs(histogram[mask] - expected[mask]) / expected[mask]))
        rows.append({
            "m": point.M,
            "e_sigma_z": point.e_sigma_z,
            "e_sigma_w": point.e_sigma_w,
            "n": n,
            "inner_rule": hybrid.inner_kind.value,
            "sup_relative_deviation": deviation,
            "grid_mass": float(trapezoid(density, grid)),
            "worst": False,
        })
    worst = int(np.argmax([r["sup_relative_deviation"] for r in rows]))
    rows[worst]["worst"] = True
    logger.info(
        f"{point.label()}: worst n={worst}, sup relative deviation {rows[worst]['sup_relative_deviation']:.4f}"
    )
    return rows


def run_validate_likelihood(cfg: ExperimentConfig, mapper: Mapper = map) -> ExperimentResult:
    rows = [row for point in cfg.sweep() for row in validate_point(cfg, point)]
    return ExperimentResult(Experiment.VALIDATE_LIKELIHOOD, [Table(VALIDATE_FIELDS, rows)])


# Convergence

def psrf_checkpoints(cfg: ExperimentConfig) -> List[int]:
    total = cfg.I_b + cfg.I
    points = [i for i in range(cfg.checkpoint_every, total + 1, cfg.checkpoint_every) if i >= 2]
    if not points or points[-1] != total:
        points.append(total)
    return points


def chain_metrics(
    cfg: ExperimentConfig,
    point: SweepPoint,
    mapper: Mapper,
    tau: Optional[float] = None,
    label: str = "",
) -> List[Dict[str, Any]]:
    """PSRF^(1/2), normalised |V|_2^(1/2) and mean cumulative shrink iterations per checkpoint"""
    results = list(mapper(run_converge_chain, [ChainTask(cfg, point, c, tau) for c in range(cfg.chains)]))
    traces = ChainTraces.from_chains([trace for trace, _ in results])
    cumulative_shrinks = np.mean([np.cumsum(shrinks) for _, shrinks in results], axis=0)

    checkpoints = psrf_checkpoints(cfg)
    psrf_sqrt, v_norm = [], []
    for i in checkpoints:
        try:
            result = psrf(traces.head(i))
            psrf_sqrt.append(result.r_hat_sqrt)
            v_norm.append(result.v_norm)
        except DiagnosticsError as e:
            logger.warning(f"{label} checkpoint {i}: {e}")
            psrf_sqrt.append(float("nan"))
            v_norm.append(float("nan"))
    final = v_norm[-1]

    rows = []
    for i, r, v in zip(checkpoints, psrf_sqrt, v_norm):
        rows.append({"metric": "psrf_sqrt", "index": i, "value": r, "label": label})
        rows.append({"metric": "v_norm", "index": i, "value": v / final if final > 0 else float("nan"), "label": label})
        rows.append({"metric": "shrink_iterations", "index": i, "value": float(cumulative_shrinks[i - 1]), "label": label})
    return rows


def mse_curve(cfg: ExperimentConfig, point: SweepPoint, mapper: Mapper) -> List[Dict[str, Any]]:
    """Mean squared error against the number of averaged samples, 0 dB at the largest count"""
    tasks = [TrialTask(cfg, point, trial, ()) for trial in range(cfg.trials)]
    errors = np.array([e for _, e in mapper(run_mse_curve_trial, tasks)])
    mse = np.nanmean(errors, axis=0)
    db = 10.0 * np.log10(mse / mse[-1])
    return [
        {"metric": "mse_db", "index": count, "value": float(value), "label": point.label()}
        for count, value in zip(mse_checkpoints(cfg), db)
    ]


def run_converge(cfg: ExperimentConfig, mapper: Mapper = map) -> ExperimentResult:
    rows = []
    for point in cfg.sweep():
        logger.info(f"Convergence study at {point.label()} with {cfg.chains} chains")
        rows.extend(chain_metrics(cfg, point, mapper, label=point.label()))
        rows.extend(mse_curve(cfg, point, mapper))
    return ExperimentResult(Experiment.CONVERGE, [Table(CONVERGE_FIELDS, rows)])


def run_shrinkage(cfg: ExperimentConfig, mapper: Mapper = map) -> ExperimentResult:
    """Convergence against shrink iterations for plain shrinkage (tau = 0) and the midpoint variant"""
    tau = cfg.tau if cfg.tau > 0 else DEFAULT_TAU
    rows = []
    for point in cfg.sweep():
        for value in (0.0, tau):
            logger.info(f"Shrinkage study at {point.label()}, tau={value}")
            rows.extend(chain_metrics(cfg, point, mapper, tau=value, label=f"{point.label()},tau={value!r}"))
    return ExperimentResult(Experiment.SHRINKAGE, [Table(CONVERGE_FIELDS, rows)])


# Trial-based experiments

def run_compare(cfg: ExperimentConfig, mapper: Mapper = map) -> ExperimentResult:
    methods = COMPARE_METHODS + ((Method.EM_RANDOM,) if cfg.em_random_variance else ())
    records = _collect_trials(cfg, mapper, run_trial, methods)
    return ExperimentResult(Experiment.COMPARE, [_trial_table(records)], records, summarize(records))


def run_init_sensitivity(cfg: ExperimentConfig, mapper: Mapper = map) -> ExperimentResult:
    records = _collect_trials(cfg, mapper, run_init_trial)
    normalized = normalized_to_reference(records, preset_method(InitPreset.NO_JITTER_LMMSE))
    tables = [_trial_table(records), Table(NORMALIZED_FIELDS, normalized, ".normalized.csv")]
    return ExperimentResult(Experiment.INIT_SENSITIVITY, tables, records, summarize(records))


def run_em_variance(cfg: ExperimentConfig, mapper: Mapper = map) -> ExperimentResult:
    """Known- against random-variance EM on matched trials; wall time is always recorded"""
    cfg = cfg.with_overrides(record_wall_time=True)
    records = _collect_trials(cfg, mapper, run_trial, (Method.EM, Method.EM_RANDOM))
    return ExperimentResult(Experiment.EM_VARIANCE, [_trial_table(records)], records, summarize(records))


def improvement_rows(summaries: List[MseSummary], cfg: ExperimentConfig) -> List[Dict[str, Any]]:
    rows = []
    methods = sorted({s.method for s in summaries} - {Method.LMMSE_NO_JITTER})
    curves = list(dict.fromkeys((p.M, p.e_sigma_w) for p in cfg.sweep()))
    for m, sigma_w in curves:
        baseline = curves_from_summaries(summaries, Method.LMMSE_NO_JITTER, m, sigma_w)
        for method in methods:
            result = improvement_factor(
                baseline, curves_from_summaries(summaries, method, m, sigma_w), 0.5 * sigma_w
            )
            rows.append({
                "method": method,
                "m": m,
                "e_sigma_w": sigma_w,
                "factor": result.factor,
                "sigma_z_star": result.sigma_z_star,
                "flags": ";".join(result.flags),
            })
    return rows


def run_improve(cfg: ExperimentConfig, mapper: Mapper = map) -> ExperimentResult:
    methods = COMPARE_METHODS + ((Method.EM_RANDOM,) if cfg.em_random_variance else ())
    records = _collect_trials(cfg, mapper, run_trial, methods)
    summaries = summarize(records)
    tables = [Table(IMPROVE_FIELDS, improvement_rows(summaries, cfg)), _trial_table(records, ".trials.csv")]
    return ExperimentResult(Experiment.IMPROVE, tables, records, summaries)


EXPERIMENTS: Dict[Experiment, Callable[[ExperimentConfig, Mapper], ExperimentResult]] = {
    Experiment.VALIDATE_LIKELIHOOD: run_validate_likelihood,
    Experiment.CONVERGE: run_converge,
    Experiment.INIT_SENSITIVITY: run_init_sensitivity,
    Experiment.COMPARE: run_compare,
    Experiment.IMPROVE: run_improve,
    Experiment.SHRINKAGE: run_shrinkage,
    Experiment.EM_VARIANCE: run_em_variance,
}

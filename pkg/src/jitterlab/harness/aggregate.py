"""
Aggregation

Mean squared error per sweep point and method, in dB with 95% normal
confidence intervals, and the initialisation-study ratios.
"""

from collections import defaultdict
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
from scipy import stats

from .records import TrialRecord

CONFIDENCE = 0.95

PLOTDATA_FIELDS = ["method", "m", "e_sigma_z", "e_sigma_w", "trials", "mse", "mse_db", "ci_low_db", "ci_high_db"]
NORMALIZED_FIELDS = ["preset", "m", "e_sigma_z", "e_sigma_w", "trials", "mean_db", "ci_low_db", "ci_high_db"]


def to_db(value: float) -> float:
    """10 log10(value); nan for non-positive values"""
    return float(10.0 * np.log10(value)) if value > 0 else float("nan")


def lower_bound_db(value: float) -> float:
    """Lower interval bound in dB; an interval reaching 0 or below is unbounded (-inf)"""
    if np.isnan(value):
        return float("nan")
    return to_db(value) if value > 0 else float("-inf")


def mean_confidence_interval(values: Sequence[float], confidence: float = CONFIDENCE) -> Tuple[float, float, float]:
    """
    Normal-approximation interval for the mean.

    Returns:
        (mean, low, high); the half-width is z sd / sqrt(n) and 0 for n = 1
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return float("nan"), float("nan"), float("nan")
    mean = float(values.mean())
    if values.size == 1:
        return mean, mean, mean
    z = float(stats.norm.ppf(0.5 + confidence / 2))
    half = z * float(values.std(ddof=1)) / np.sqrt(values.size)
    return mean, mean - half, mean + half


@dataclass(frozen=True)
class MseSummary:
    """MSE of one method at one sweep point"""
    method: str
    m: int
    e_sigma_z: float
    e_sigma_w: float
    trials: int
    mse: float
    mse_db: float
    ci_low_db: float
    ci_high_db: float

    def to_dict(self):
        return asdict(self)


def _group(records: Iterable[TrialRecord]) -> Dict[Tuple, List[TrialRecord]]:
    groups: Dict[Tuple, List[TrialRecord]] = defaultdict(list)
    for record in records:
        groups[(record.method, record.m, record.e_sigma_w, record.e_sigma_z)].append(record)
    return groups


def summarize(records: Iterable[TrialRecord]) -> List[MseSummary]:
    """
    Per (method, M, sigma_w, sigma_z) MSE summary over successful trials.

    Flagged rows with a nan squared error are left out of the mean.
    """
    summaries = []
    for (method, m, sigma_w, sigma_z), group in sorted(_group(records).items()):
        errors = [r.squared_error for r in group if not r.failed]
        mse, low, high = mean_confidence_interval(errors)
        summaries.append(MseSummary(
            method=method,
            m=m,
            e_sigma_z=sigma_z,
            e_sigma_w=sigma_w,
            trials=len(errors),
            mse=mse,
            mse_db=to_db(mse),
            ci_low_db=lower_bound_db(low),
            ci_high_db=to_db(high),
        ))
    return summaries


def normalized_to_reference(records: Iterable[TrialRecord], reference: str) -> List[Dict[str, object]]:
    """
    Mean per-trial dB ratio of every method to ``reference`` on the same trial.

    Used for the initialisation study, where the reference is the run
    started from the no-jitter LMMSE estimate.
    """
    by_trial: Dict[Tuple, Dict[str, float]] = defaultdict(dict)
    for r in records:
        if not r.failed and r.squared_error > 0:
            by_trial[(r.m, r.e_sigma_w, r.e_sigma_z, r.trial)][r.method] = r.squared_error

    ratios: Dict[Tuple, List[float]] = defaultdict(list)
    for (m, sigma_w, sigma_z, _), errors in by_trial.items():
        if reference not in errors:
            continue
        for method, error in errors.items():
            ratios[(method, m, sigma_w, sigma_z)].append(10.0 * np.log10(error / errors[reference]))

    rows = []
    for (method, m, sigma_w, sigma_z), values in sorted(ratios.items()):
        mean, low, high = mean_confidence_interval(values)
        rows.append({
            "preset": method,
            "m": m,
            "e_sigma_z": sigma_z,
            "e_sigma_w": sigma_w,
            "trials": len(values),
            "mean_db": mean,
            "ci_low_db": low,
            "ci_high_db": high,
        })
    return rows

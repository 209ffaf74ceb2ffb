"""Experiment harness: synthetic trials, estimators, aggregation and CSV output"""

from .config import Experiment, ExperimentConfig, SweepPoint
from .records import CsvSerializer, Method, TrialRecord, read_trial_records, write_trial_records
from .aggregate import (
    MseSummary,
    lower_bound_db,
    mean_confidence_interval,
    normalized_to_reference,
    summarize,
    to_db,
)
from .improvement import ImprovementResult, MseCurve, improvement_factor
from .experiments import (
    EXPERIMENTS,
    ExperimentResult,
    Table,
    run_compare,
    run_converge,
    run_em_variance,
    run_improve,
    run_init_sensitivity,
    run_shrinkage,
    run_validate_likelihood,
)
from .runner import ExperimentRunner, RunSummary

__all__ = [
    "Experiment",
    "ExperimentConfig",
    "SweepPoint",
    "CsvSerializer",
    "Method",
    "TrialRecord",
    "read_trial_records",
    "write_trial_records",
    "MseSummary",
    "lower_bound_db",
    "mean_confidence_interval",
    "normalized_to_reference",
    "summarize",
    "to_db",
    "ImprovementResult",
    "MseCurve",
    "improvement_factor",
    "EXPERIMENTS",
    "ExperimentResult",
    "Table",
    "run_compare",
    "run_converge",
    "run_em_variance",
    "run_improve",
    "run_init_sensitivity",
    "run_shrinkage",
    "run_validate_likelihood",
    "ExperimentRunner",
    "RunSummary",
]

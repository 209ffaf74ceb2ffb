"""
EM Iteration

Alternates the quadrature E-step with the linear M-step
x = (sum_n A_n)^-1 sum_n b_n until the relative change in x drops below tol.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg

from ..errors import SingularSystemError
from ..linear.lmmse import lmmse_no_jitter
from ..model.geometry import ModelConfig
from ..model.priors import Hyperparams
from ..quadrature.hybrid import HybridQuadrature
from .config import EmConfig
from .estep import batch_expectations, em_hybrid

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmResult:
    """
    Attributes:
        x_hat: Final iterate, or the best one seen when not converged
        iterations: M-steps that moved x by at least tol
        converged: Whether the relative-change test was met
        log_likelihoods: sum_n log p(y_n | x) for x0, x1, ...
    """
    x_hat: np.ndarray
    iterations: int
    converged: bool
    log_likelihoods: List[float] = field(default_factory=list)


def _accumulate(
    y: np.ndarray,
    x: np.ndarray,
    hybrid: HybridQuadrature,
    config: ModelConfig,
    executor: Optional[ThreadPoolExecutor],
    chunks: List[np.ndarray],
) -> Tuple[np.ndarray, np.ndarray, float]:
    def run(indices: np.ndarray):
        return batch_expectations(y[indices], indices, x, hybrid, config)

    results = list(executor.map(run, chunks)) if executor is not None else [run(c) for c in chunks]
    A = sum(r.A.sum(axis=0) for r in results)
    b = sum(r.b.sum(axis=0) for r in results)
    log_likelihood = float(sum(r.log_likelihood.sum() for r in results))
    return A, b, log_likelihood


def _solve(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    try:
        return linalg.cho_solve(linalg.cho_factor(A, lower=True), b)
    except linalg.LinAlgError as e:
        condition = float(np.linalg.cond(A))
        raise SingularSystemError(
            f"Accumulated EM system is singular (condition ~ {condition:.3e})", condition
        ) from e


def em_iterate(
    y: np.ndarray,
    x0: Optional[np.ndarray],
    hyper: Hyperparams,
    config: ModelConfig,
    em_cfg: Optional[EmConfig] = None,
) -> EmResult:
    """
    Run EM from x0 (default: the no-jitter LMMSE estimate).

    Args:
        y: Observations
        x0: Starting coefficients
        hyper: Priors over the variances (used in random-variance mode)
        config: Sampling geometry
        em_cfg: Rule sizes, stopping rule and variance mode

    Returns:
        EmResult

    Raises:
        SingularSystemError: If sum_n A_n cannot be factored
        LikelihoodUnderflowError: If some p(y_n | x) underflows
    """
    em_cfg = em_cfg or EmConfig()
    y = np.asarray(y, dtype=float)
    x = np.asarray(x0, dtype=float) if x0 is not None else lmmse_no_jitter(y, config, hyper)
    hybrid = em_hybrid(hyper, em_cfg)
    chunks = np.array_split(np.arange(config.N), min(em_cfg.workers, config.N))
    executor = ThreadPoolExecutor(max_workers=em_cfg.workers) if em_cfg.workers > 1 else None

    try:
        A, b, log_likelihood = _accumulate(y, x, hybrid, config, executor, chunks)
        log_likelihoods = [log_likelihood]
        best_x, best_ll = x, log_likelihood
        converged = False
        iterations = em_cfg.max_iters
        for i in range(1, em_cfg.max_iters + 1):
            x_new = _solve(A, b)
            A, b, log_likelihood = _accumulate(y, x_new, hybrid, config, executor, chunks)
            log_likelihoods.append(log_likelihood)

            scale = np.linalg.norm(x)
            change = np.linalg.norm(x_new - x) / (scale if scale > 0 else max(np.linalg.norm(x_new), 1e-300))
            x = x_new
            if log_likelihood >= best_ll:
                best_x, best_ll = x, log_likelihood
            if change < em_cfg.tol:
                converged = True
                iterations = i - 1
                break
    finally:
        if executor is not None:
            executor.shutdown()

    if not converged:
        logger.warning(
            f"EM did not converge in {em_cfg.max_iters} iterations; returning the best iterate"
        )
        x = best_x
    return EmResult(x_hat=x, iterations=iterations, converged=converged, log_likelihoods=log_likelihoods)

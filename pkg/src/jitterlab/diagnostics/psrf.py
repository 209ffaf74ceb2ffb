"""
Convergence Diagnostics

Multivariate potential scale reduction factor and posterior-variance norm
computed from the combined state vectors of several chains.
"""

import logging
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np
from scipy import linalg

from ..errors import DiagnosticsError

logger = logging.getLogger(__name__)

POWER_TOL = 1e-8
POWER_MAX_ITERS = 10_000
REGULARIZATION = 1e-12


@dataclass(frozen=True)
class ChainTraces:
    """
    Combined state vectors of C chains over i iterations.

    Attributes:
        samples: Array of shape (C, i, d)
    """
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 3:
            raise DiagnosticsError(f"Traces need shape (chains, iterations, dim), got {samples.shape}")
        object.__setattr__(self, "samples", samples)

    @classmethod
    def from_chains(cls, chains: Sequence[Any]) -> "ChainTraces":
        """Stack per-chain (i, d) arrays; all chains must match"""
        shapes = {np.shape(c) for c in chains}
        if len(shapes) != 1:
            raise DiagnosticsError(f"Chains differ in shape: {sorted(shapes)}")
        return cls(np.stack([np.asarray(c, dtype=float) for c in chains]))

    @property
    def chains(self) -> int:
        return self.samples.shape[0]

    @property
    def iterations(self) -> int:
        return self.samples.shape[1]

    @property
    def dim(self) -> int:
        return self.samples.shape[2]

    def head(self, i: int) -> "ChainTraces":
        """The first i iterations of every chain"""
        return ChainTraces(self.samples[:, :i, :])


@dataclass(frozen=True)
class PsrfResult:
    """r_hat, the posterior-variance norm |V|_2^(1/2) and any diagonal loading applied to W"""
    r_hat: float
    v_norm: float
    regularization: float = 0.0

    @property
    def r_hat_sqrt(self) -> float:
        return float(np.sqrt(self.r_hat))


def intra_chain_cov(traces: ChainTraces) -> np.ndarray:
    """W = 1/((i-1) C) sum_c sum_j (a_cj - mean_c)(a_cj - mean_c)^T"""
    C, i, _ = traces.samples.shape
    if i < 2 or C < 1:
        raise DiagnosticsError(f"Intra-chain covariance needs i >= 2 and C >= 1, got i={i}, C={C}")
    centered = traces.samples - traces.samples.mean(axis=1, keepdims=True)
    W = np.einsum("cjd,cje->de", centered, centered) / ((i - 1) * C)
    return 0.5 * (W + W.T)


def inter_chain_cov(traces: ChainTraces) -> np.ndarray:
    """B = 1/(C-1) sum_c (mean_c - grand mean)(mean_c - grand mean)^T"""
    C = traces.chains
    if C < 2:
        raise DiagnosticsError(f"Inter-chain covariance needs at least 2 chains, got {C}")
    means = traces.samples.mean(axis=1)
    centered = means - means.mean(axis=0)
    B = centered.T @ centered / (C - 1)
    return 0.5 * (B + B.T)


def spectral_norm(apply, dim: int, tol: float = POWER_TOL) -> float:
    """
    Largest singular value of a linear operator by power iteration on A^T A.

    ``apply(v, transpose)`` returns A v or A^T v.
    """
    # Fixed start vector so repeated calls agree
    v = np.random.default_rng(0).standard_normal(dim)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(POWER_MAX_ITERS):
        w = apply(apply(v, False), True)
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v = w / norm
        sigma = float(np.sqrt(norm))
        if abs(sigma - estimate) <= tol * max(sigma, 1e-300):
            return sigma
        estimate = sigma
    logger.warning(f"Power iteration did not reach tolerance {tol}; returning {estimate}")
    return estimate


def _regularized_factor(W: np.ndarray):
    try:
        return linalg.cho_factor(W, lower=True), 0.0
    except linalg.LinAlgError:
        pass
    d = W.shape[0]
    trace = float(np.trace(W))
    loading = REGULARIZATION * trace / d if trace > 0 else REGULARIZATION
    logger.warning(f"Intra-chain covariance is singular; adding {loading:.3e} to its diagonal")
    try:
        return linalg.cho_factor(W + loading * np.eye(d), lower=True), loading
    except linalg.LinAlgError as e:
        raise DiagnosticsError(f"Intra-chain covariance stays singular after loading {loading:.3e}") from e


def psrf(traces: ChainTraces) -> PsrfResult:
    """
    Multivariate PSRF of the chains.

    r_hat = (i-1)/i + ((C+1)/C) |W^-1 B|_2 and
    v_norm = |((i-1)/i) W + ((C+1)/C) B|_2^(1/2).
    A singular W gets 1e-12 trace(W)/d added to its diagonal before solving.
    """
    C, i, d = traces.samples.shape
    W = intra_chain_cov(traces)
    B = inter_chain_cov(traces)
    factor, loading = _regularized_factor(W)

    # W^-1 B is applied as a solve; its transpose is B W^-1
    def apply(v: np.ndarray, transpose: bool) -> np.ndarray:
        if transpose:
            return B @ linalg.cho_solve(factor, v)
        return linalg.cho_solve(factor, B @ v)

    norm = spectral_norm(apply, d) if np.any(B) else 0.0
    shrink = (i - 1) / i
    inflate = (C + 1) / C
    V = shrink * W + inflate * B
    v_norm = float(np.sqrt(max(np.linalg.eigvalsh(0.5 * (V + V.T))[-1], 0.0)))
    return PsrfResult(r_hat=shrink + inflate * norm, v_norm=v_norm, regularization=loading)

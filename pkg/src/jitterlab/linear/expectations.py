"""
Jitter Expectations

E[H(z)] and E[H(z) H(z)^T] under the hierarchical jitter prior, by hybrid
quadrature over sigma_z^2 and z_n.
"""

import numpy as np

from ..model.geometry import ModelConfig, h_rows
from ..model.priors import Hyperparams
from ..quadrature.hybrid import DEFAULT_J2, DEFAULT_J3, HybridQuadrature, prior_hybrid
from ..quadrature.rules import DEFAULT_Z_RANGE, point_mass_rule


def _jitter_hybrid(hyper: Hyperparams, J2: int, J3: int, z_range: float) -> HybridQuadrature:
    # The sigma_w^2 level is irrelevant here; a one-node rule keeps it cheap
    hybrid = prior_hybrid(hyper, 1, J2, J3, z_range)
    return HybridQuadrature(point_mass_rule(1.0), hybrid.sigma_z2, hybrid.z_nodes, hybrid.z_weights, hybrid.inner_kind)


def _conditional_rows(hybrid: HybridQuadrature, config: ModelConfig) -> np.ndarray:
    """h_n(z_{j2, j3}) for every n, shape (N, J2, J3, K)"""
    n = np.arange(config.N)[:, None, None]
    return h_rows(n, hybrid.z_nodes[None, :, :], config)


def expected_h(
    hyper: Hyperparams,
    config: ModelConfig,
    J2: int = DEFAULT_J2,
    J3: int = DEFAULT_J3,
    z_range: float = DEFAULT_Z_RANGE,
) -> np.ndarray:
    """
    E[H(z)] with entry (n, k) = sum_j2 w_j2 sum_j3 w_j3 h(n/M + z_j3 - k).

    Returns:
        N x K matrix
    """
    hybrid = _jitter_hybrid(hyper, J2, J3, z_range)
    rows = _conditional_rows(hybrid, config)
    return np.einsum("a,ab,nabk->nk", hybrid.sigma_z2.weights, hybrid.z_weights, rows)


def expected_hht(
    hyper: Hyperparams,
    config: ModelConfig,
    J2: int = DEFAULT_J2,
    J3: int = DEFAULT_J3,
    z_range: float = DEFAULT_Z_RANGE,
) -> np.ndarray:
    """
    E[H(z) H(z)^T].

    Rows share sigma_z^2 but have independent jitters given it, so the
    off-diagonal entries are sum_j2 w_j2 <e_n(j2), e_m(j2)> with
    e_n(j2) = E[h_n | sigma_z2_j2], while the diagonal averages ||h_n||^2.

    Returns:
        Symmetric N x N matrix
    """
    hybrid = _jitter_hybrid(hyper, J2, J3, z_range)
    rows = _conditional_rows(hybrid, config)
    w2 = hybrid.sigma_z2.weights
    conditional_means = np.einsum("ab,nabk->ank", hybrid.z_weights, rows)
    result = np.einsum("a,ank,amk->nm", w2, conditional_means, conditional_means)
    diagonal = np.einsum("a,ab,nabk,nabk->n", w2, hybrid.z_weights, rows, rows)
    result[np.diag_indices(config.N)] = diagonal
    return 0.5 * (result + result.T)

"""
Gauss Quadrature Rules

Hermite, Legendre and generalised Laguerre rules built with the
Golub-Welsch eigenvalue method, plus the derived inverse-Gamma, jitter and
point-mass rules used by the hybrid likelihood.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import linalg
from scipy.special import gammaln

from ..errors import ConfigError, QuadratureError

logger = logging.getLogger(__name__)

# Jitter variance below which the inner rule is Gauss-Hermite
HERMITE_THRESHOLD = 0.01
# Half-width of the Legendre jitter interval, in standard deviations
DEFAULT_Z_RANGE = 6.0
# Rescale the recurrence vectors before they can overflow
_RESCALE_LIMIT = 1e150


class RuleKind(Enum):
    """Quadrature rule families"""
    HERMITE = "hermite"
    LEGENDRE = "legendre"
    LAGUERRE = "laguerre"
    INVERSE_GAMMA = "inverse_gamma"
    POINT_MASS = "point_mass"


@dataclass(frozen=True)
class RecurrenceCoefficients:
    """
    Three-term recurrence p_{k+1} = (x - a_k) p_k - b_k p_{k-1} of a monic
    orthogonal family; ``b`` holds b_1 .. b_{J-1}.
    """
    family: str
    a: np.ndarray
    b: np.ndarray

    @property
    def size(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a one-dimensional Gauss rule"""
    nodes: np.ndarray
    weights: np.ndarray
    kind: RuleKind
    params: Tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1 or nodes.size == 0:
            raise QuadratureError("Rule needs matching non-empty node and weight vectors", self.kind.value, nodes.size)
        if np.any(np.diff(nodes) <= 0):
            raise QuadratureError("Rule nodes must be strictly increasing", self.kind.value, nodes.size)
        if not np.all(weights > 0):
            raise QuadratureError("Rule weights must be strictly positive", self.kind.value, nodes.size)
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def log_weights(self) -> np.ndarray:
        return np.log(self.weights)

    def integrate(self, f) -> float:
        """Sum_j w_j f(x_j) for a vectorised f"""
        return float(np.dot(self.weights, f(self.nodes)))


def hermite_recurrence(J: int) -> RecurrenceCoefficients:
    """Physicists' Hermite polynomials, weight exp(-x^2)"""
    k = np.arange(1, J, dtype=float)
    return RecurrenceCoefficients("hermite", np.zeros(J), k / 2.0)


def legendre_recurrence(J: int) -> RecurrenceCoefficients:
    """Legendre polynomials on [-1, 1], weight 1"""
    k = np.arange(1, J, dtype=float)
    return RecurrenceCoefficients("legendre", np.zeros(J), k * k / (4.0 * k * k - 1.0))


def laguerre_recurrence(J: int, a: float) -> RecurrenceCoefficients:
    """Generalised Laguerre polynomials, weight x^a exp(-x), a > -1"""
    if not a > -1:
        raise ConfigError(f"Laguerre parameter must exceed -1, got {a}")
    k = np.arange(J, dtype=float)
    return RecurrenceCoefficients(f"laguerre(a={a})", 2.0 * k + a + 1.0, k[1:] * (k[1:] + a))


def _first_components_squared(rec: RecurrenceCoefficients, nodes: np.ndarray) -> np.ndarray:
    """
    Squared first components of the normalised Jacobi eigenvectors.

    The eigenvector for eigenvalue x is (q_0(x), ..., q_{J-1}(x)) with q_k the
    orthonormal polynomials, so its first component squared is
    q_0^2 / sum_k q_k^2. Evaluating the recurrence keeps tiny tail weights
    accurate to full relative precision.
    """
    sqrt_b = np.sqrt(rec.b)
    prev = np.zeros_like(nodes)
    cur = np.ones_like(nodes)
    first = np.ones_like(nodes)
    total = np.ones_like(nodes)
    for k in range(rec.size - 1):
        nxt = ((nodes - rec.a[k]) * cur - (sqrt_b[k - 1] if k > 0 else 0.0) * prev) / sqrt_b[k]
        prev, cur = cur, nxt
        total = total + cur * cur
        big = np.abs(cur) > _RESCALE_LIMIT
        if np.any(big):
            scale = np.where(big, 1.0 / np.abs(cur), 1.0)
            prev, cur = prev * scale, cur * scale
            first, total = first * scale, total * scale * scale
    return first * first / total


def golub_welsch(rec: RecurrenceCoefficients, J: int, total_mass: float) -> QuadratureRule:
    """
    Gauss rule from the symmetric tridiagonal Jacobi matrix.

    Args:
        rec: Recurrence coefficients (at least J terms)
        J: Number of nodes
        total_mass: Integral of the weight function

    Returns:
        Rule whose nodes are the Jacobi eigenvalues and whose weights are
        total_mass times the squared first eigenvector components

    Raises:
        QuadratureError: If the eigen-solver does not converge
    """
    if J < 1:
        raise QuadratureError(f"Rule size must be >= 1, got {J}", rec.family, J)
    a = np.asarray(rec.a[:J], dtype=float)
    off = np.sqrt(np.asarray(rec.b[: J - 1], dtype=float))
    try:
        nodes = linalg.eigvalsh_tridiagonal(a, off) if J > 1 else a.copy()
    except linalg.LinAlgError as e:
        raise QuadratureError(
            f"Jacobi eigen-solver failed for {rec.family} with J={J}: {e}", rec.family, J
        ) from e
    nodes = np.sort(nodes)
    trimmed = RecurrenceCoefficients(rec.family, a, np.asarray(rec.b[: J - 1], dtype=float))
    weights = total_mass * _first_components_squared(trimmed, nodes)
    kind = RuleKind.LAGUERRE if rec.family.startswith("laguerre") else RuleKind(rec.family)
    return QuadratureRule(nodes, weights, kind)


@lru_cache(maxsize=None)
def hermite_rule(J: int) -> QuadratureRule:
    """Gauss-Hermite rule for weight exp(-x^2), total mass sqrt(pi)"""
    logger.debug(f"Building Gauss-Hermite rule J={J}")
    return golub_welsch(hermite_recurrence(J), J, float(np.sqrt(np.pi)))


@lru_cache(maxsize=None)
def legendre_rule(J: int) -> QuadratureRule:
    """Gauss-Legendre rule on [-1, 1]"""
    logger.debug(f"Building Gauss-Legendre rule J={J}")
    return golub_welsch(legendre_recurrence(J), J, 2.0)


@lru_cache(maxsize=None)
def laguerre_rule(J: int, a: float = 0.0) -> QuadratureRule:
    """Generalised Gauss-Laguerre rule for weight x^a exp(-x)"""
    logger.debug(f"Building Gauss-Laguerre rule J={J}, a={a}")
    mass = float(np.exp(gammaln(a + 1.0)))
    if not np.isfinite(mass):
        raise QuadratureError(f"Laguerre total mass Gamma({a + 1}) overflows", f"laguerre(a={a})", J)
    rule = golub_welsch(laguerre_recurrence(J, a), J, mass)
    return QuadratureRule(rule.nodes, rule.weights, RuleKind.LAGUERRE, (a,))


@lru_cache(maxsize=None)
def inverse_gamma_rule(J: int, alpha: float, beta: float) -> QuadratureRule:
    """
    Rule integrating against IG(s; alpha, beta).

    Uses the Laguerre rule with a = alpha - 1 and the substitution s = beta/y:
    nodes beta/x_j, weights w_j / Gamma(alpha). The division by Gamma(alpha)
    is folded into a unit-mass Laguerre rule so large shapes do not overflow.

    Raises:
        ConfigError: If alpha <= 0 or beta <= 0
    """
    if not (alpha > 0 and beta > 0):
        raise ConfigError(f"Inverse-Gamma rule needs alpha, beta > 0, got {alpha}, {beta}")
    base = golub_welsch(laguerre_recurrence(J, alpha - 1.0), J, 1.0)
    return QuadratureRule(
        (beta / base.nodes)[::-1],
        base.weights[::-1],
        RuleKind.INVERSE_GAMMA,
        (alpha, beta),
    )


def point_mass_rule(value: float) -> QuadratureRule:
    """Degenerate single-node rule with unit weight"""
    return QuadratureRule(np.array([float(value)]), np.array([1.0]), RuleKind.POINT_MASS, (float(value),))


def jitter_rule(
    sigma_z2: float,
    J3: int,
    e_sigma_z2: float,
    z_range: float = DEFAULT_Z_RANGE,
) -> QuadratureRule:
    """
    Rule integrating against N(0, sigma_z2).

    Gauss-Hermite (nodes scaled by sqrt(2 sigma_z2), weights by 1/sqrt(pi))
    when e_sigma_z2 < 0.01, otherwise Gauss-Legendre on
    [-z_range sigma_z, z_range sigma_z] with the normal density folded into
    the weights.
    """
    if not sigma_z2 > 0:
        raise ConfigError(f"Jitter rule needs sigma_z2 > 0, got {sigma_z2}")
    if e_sigma_z2 < HERMITE_THRESHOLD:
        base = hermite_rule(J3)
        return QuadratureRule(
            np.sqrt(2.0 * sigma_z2) * base.nodes,
            base.weights / np.sqrt(np.pi),
            RuleKind.HERMITE,
            (sigma_z2,),
        )
    base = legendre_rule(J3)
    half_width = z_range * np.sqrt(sigma_z2)
    nodes = half_width * base.nodes
    density = np.exp(-nodes * nodes / (2.0 * sigma_z2)) / np.sqrt(2.0 * np.pi * sigma_z2)
    return QuadratureRule(nodes, base.weights * half_width * density, RuleKind.LEGENDRE, (sigma_z2, z_range))


def inner_rule_kind(e_sigma_z2: float) -> RuleKind:
    """Which family jitter_rule uses for a given expected jitter variance"""
    return RuleKind.HERMITE if e_sigma_z2 < HERMITE_THRESHOLD else RuleKind.LEGENDRE

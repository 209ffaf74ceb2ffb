"""Gauss quadrature and the hybrid marginal likelihood"""

from .rules import (
    DEFAULT_Z_RANGE,
    HERMITE_THRESHOLD,
    QuadratureRule,
    RecurrenceCoefficients,
    RuleKind,
    golub_welsch,
    hermite_recurrence,
    hermite_rule,
    inner_rule_kind,
    inverse_gamma_rule,
    jitter_rule,
    laguerre_recurrence,
    laguerre_rule,
    legendre_recurrence,
    legendre_rule,
    point_mass_rule,
)
from .hybrid import (
    DEFAULT_J1,
    DEFAULT_J2,
    DEFAULT_J3,
    HybridQuadrature,
    MarginalLikelihood,
    build_hybrid,
    known_variance_hybrid,
    log_likelihood_terms,
    log_marginal_likelihood,
    marginal_likelihood,
    prior_hybrid,
)

__all__ = [
    "DEFAULT_Z_RANGE",
    "HERMITE_THRESHOLD",
    "QuadratureRule",
    "RecurrenceCoefficients",
    "RuleKind",
    "golub_welsch",
    "hermite_recurrence",
    "hermite_rule",
    "inner_rule_kind",
    "inverse_gamma_rule",
    "jitter_rule",
    "laguerre_recurrence",
    "laguerre_rule",
    "legendre_recurrence",
    "legendre_rule",
    "point_mass_rule",
    "DEFAULT_J1",
    "DEFAULT_J2",
    "DEFAULT_J3",
    "HybridQuadrature",
    "MarginalLikelihood",
    "build_hybrid",
    "known_variance_hybrid",
    "log_likelihood_terms",
    "log_marginal_likelihood",
    "marginal_likelihood",
    "prior_hybrid",
]

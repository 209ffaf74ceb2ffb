"""
Tests for Gauss rules and the hybrid marginal likelihood

Tests:
1. test_hermite_polynomial_exactness
2. test_legendre_polynomial_exactness
3. test_laguerre_moments
4. test_inverse_gamma_rule_moments
5. test_jitter_rule_branch_selection
6. test_likelihood_is_normalized
7. test_likelihood_matches_known_variance_closed_form
8. test_underflow_flag
9. test_likelihood_matches_monte_carlo
"""

import pytest

import numpy as np
from scipy import integrate, stats
from scipy.special import gamma, gammaln
from hypothesis import given, settings, strategies as st

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from jitterlab.distributions import sample_inverse_gamma
from jitterlab.errors import ConfigError, QuadratureError
from jitterlab.model import Hyperparams, ModelConfig, h_rows, hyperparams_from_expected
from jitterlab.quadrature import (
    HERMITE_THRESHOLD,
    QuadratureRule,
    RuleKind,
    build_hybrid,
    hermite_rule,
    inner_rule_kind,
    inverse_gamma_rule,
    jitter_rule,
    known_variance_hybrid,
    laguerre_rule,
    legendre_rule,
    log_likelihood_terms,
    log_marginal_likelihood,
    marginal_likelihood,
    point_mass_rule,
    prior_hybrid,
)


def _hermite_moment(p: int) -> float:
    """Integral of x^p exp(-x^2) over the real line"""
    if p % 2:
        return 0.0
    return float(gamma((p + 1) / 2))


class TestGaussRules:
    """Tests for the Golub-Welsch rules"""

    @pytest.mark.parametrize("J", list(range(1, 21)))
    def test_hermite_polynomial_exactness(self, J):
        """A J-node Hermite rule integrates x^p exactly for p <= 2J - 1"""
        rule = hermite_rule(J)
        for p in range(2 * J):
            exact = _hermite_moment(p)
            value = rule.integrate(lambda x: x ** p)
            scale = rule.integrate(lambda x: np.abs(x) ** p)
            assert abs(value - exact) <= 1e-10 * scale

    @pytest.mark.parametrize("J", list(range(1, 21)))
    def test_legendre_polynomial_exactness(self, J):
        """A J-node Legendre rule integrates x^p exactly on [-1, 1]"""
        rule = legendre_rule(J)
        for p in range(2 * J):
            exact = 0.0 if p % 2 else 2.0 / (p + 1)
            assert rule.integrate(lambda x: x ** p) == pytest.approx(exact, abs=1e-13 * J)

    @pytest.mark.parametrize("J,a", [(1, 0.0), (5, 0.0), (9, 2.5), (15, 19.5)])
    def test_laguerre_moments(self, J, a):
        """Generalised Laguerre moments are Gamma(a + p + 1)"""
        rule = laguerre_rule(J, a)
        for p in range(2 * J):
            exact = np.exp(gammaln(a + p + 1))
            assert rule.integrate(lambda x: x ** p) == pytest.approx(exact, rel=1e-8)

    def test_rule_invariants(self):
        """Nodes increase strictly and weights are positive and read-only"""
        rule = hermite_rule(129)
        assert np.all(np.diff(rule.nodes) > 0)
        assert np.all(rule.weights > 0)
        assert rule.weights.sum() == pytest.approx(np.sqrt(np.pi))
        with pytest.raises(ValueError):
            rule.nodes[0] = 1.0

    def test_large_rule_tail_weights(self):
        """129-node Legendre weights stay positive and sum to 2"""
        rule = legendre_rule(129)
        assert np.all(rule.weights > 0)
        assert rule.weights.sum() == pytest.approx(2.0)

    def test_invalid_rules(self):
        with pytest.raises(QuadratureError):
            hermite_rule(0)
        with pytest.raises(QuadratureError):
            QuadratureRule(np.array([1.0, 0.0]), np.array([1.0, 1.0]), RuleKind.HERMITE)
        with pytest.raises(QuadratureError):
            QuadratureRule(np.array([0.0, 1.0]), np.array([1.0, 0.0]), RuleKind.HERMITE)

    def test_quadrature_error_carries_context(self):
        with pytest.raises(QuadratureError) as excinfo:
            legendre_rule(0)
        assert excinfo.value.family == "legendre"
        assert excinfo.value.nodes == 0


class TestInverseGammaRule:
    """Tests for the rule integrating against IG(alpha, beta)"""

    @pytest.mark.parametrize("alpha,beta", [(6.5, 5.5), (21.5, 1.28125), (3.0, 0.2)])
    def test_inverse_gamma_rule_moments(self, alpha, beta):
        """Unit mass with exact E[1/s] = alpha/beta and E[1/s^2]"""
        rule = inverse_gamma_rule(9, alpha, beta)
        assert rule.weights.sum() == pytest.approx(1.0)
        assert rule.integrate(lambda s: 1.0 / s) == pytest.approx(alpha / beta, rel=1e-10)
        assert rule.integrate(lambda s: s ** -2) == pytest.approx(alpha * (alpha + 1) / beta ** 2, rel=1e-10)
        assert np.all(rule.nodes > 0)
        assert np.all(np.diff(rule.nodes) > 0)

    @pytest.mark.parametrize("J,alpha", [(1, 3.0), (9, 3.0), (9, 21.5)])
    def test_mean_deficit(self, J, alpha):
        """The rule's E[s] falls short of beta/(alpha-1) by 1/C(J+alpha-1, J)"""
        beta = 0.7
        rule = inverse_gamma_rule(J, alpha, beta)
        log_binom = gammaln(J + alpha) - gammaln(J + 1) - gammaln(alpha)
        expected = beta / (alpha - 1) * (1.0 - np.exp(-log_binom))
        assert rule.integrate(lambda s: s) == pytest.approx(expected, rel=1e-9)

    def test_matches_scipy_expectation(self):
        """Polynomial expectations in 1/s agree with scipy's inverse-Gamma"""
        alpha, beta = 21.5, 20.5 * 0.01
        rule = inverse_gamma_rule(9, alpha, beta)
        exact = stats.invgamma(alpha, scale=beta).expect(lambda s: s ** -3)
        assert rule.integrate(lambda s: s ** -3) == pytest.approx(exact, rel=1e-6)

    def test_invalid_parameters(self):
        with pytest.raises(ConfigError):
            inverse_gamma_rule(5, 0.0, 1.0)

    @settings(max_examples=60, deadline=None)
    @given(
        J=st.integers(min_value=1, max_value=20),
        alpha=st.floats(min_value=0.5, max_value=50.0),
        beta=st.floats(min_value=1e-3, max_value=10.0),
    )
    def test_rule_is_a_probability_rule(self, J, alpha, beta):
        """Positive nodes and weights with unit total mass"""
        rule = inverse_gamma_rule(J, alpha, beta)
        assert rule.nodes.size == J
        assert np.all(rule.nodes > 0)
        assert np.all(rule.weights > 0)
        assert rule.weights.sum() == pytest.approx(1.0, abs=1e-10)


class TestJitterRule:
    """Tests for the inner jitter rule"""

    def test_jitter_rule_branch_selection(self):
        """Hermite below the 0.01 threshold, Legendre at or above it"""
        assert HERMITE_THRESHOLD == 0.01
        assert inner_rule_kind(0.0099) is RuleKind.HERMITE
        assert inner_rule_kind(0.01) is RuleKind.LEGENDRE
        assert jitter_rule(0.0025, 9, 0.0025).kind is RuleKind.HERMITE
        assert jitter_rule(0.0625, 9, 0.0625).kind is RuleKind.LEGENDRE

    @pytest.mark.parametrize("e_sz2", [0.0025, 0.0625])
    def test_jitter_rule_normal_moments(self, e_sz2):
        """Both branches reproduce the N(0, sigma_z^2) moments"""
        rule = jitter_rule(e_sz2, 129, e_sz2)
        assert rule.weights.sum() == pytest.approx(1.0, abs=1e-8)
        assert rule.integrate(lambda z: z) == pytest.approx(0.0, abs=1e-12)
        assert rule.integrate(lambda z: z ** 2) == pytest.approx(e_sz2, rel=1e-6)

    def test_legendre_interval(self):
        """Legendre nodes lie inside +-z_range sigma_z"""
        rule = jitter_rule(0.04, 17, 0.04, z_range=6.0)
        assert np.all(np.abs(rule.nodes) < 6.0 * 0.2)

    def test_point_mass_rule(self):
        rule = point_mass_rule(0.3)
        assert rule.integrate(lambda s: s ** 2) == pytest.approx(0.09)
        assert rule.kind is RuleKind.POINT_MASS


class TestHybridLikelihood:
    """Tests for p(y_n | x) by hybrid quadrature"""

    @pytest.mark.parametrize("e_sz2", [0.0025, 0.0625])
    def test_likelihood_is_normalized(self, e_sz2):
        """p(y_n | x) integrates to one over y_n"""
        config = ModelConfig(K=4, M=2)
        hyper = hyperparams_from_expected(4, 8, e_sz2, 0.01)
        hybrid = prior_hybrid(hyper, 9, 9, 65)
        x = np.array([0.3, -1.1, 0.8, 0.5])
        grid = np.linspace(-6.0, 6.0, 6001)
        density = np.exp(log_marginal_likelihood(grid, 3, x, hybrid, config))
        assert integrate.trapezoid(density, grid) == pytest.approx(1.0, abs=1e-4)

    def test_likelihood_matches_known_variance_closed_form(self):
        """With M=1, x=e_0 and n=0 the point-mass hybrid matches direct integration"""
        config = ModelConfig(K=3, M=1)
        sz2, sw2 = 0.01, 0.01
        hybrid = known_variance_hybrid(sz2, sw2, 129)
        x = np.array([1.0, 0.0, 0.0])
        y = 0.97

        def integrand(z):
            mean = np.sinc(z)
            return stats.norm.pdf(y, mean, np.sqrt(sw2)) * stats.norm.pdf(z, 0.0, np.sqrt(sz2))

        exact, _ = integrate.quad(integrand, -1.0, 1.0, limit=200)
        value = float(np.exp(log_marginal_likelihood(y, 0, x, hybrid, config)))
        assert value == pytest.approx(exact, rel=1e-6)

    def test_likelihood_matches_monte_carlo(self, rng):
        """Default rules agree with a conditional Monte Carlo average over the priors"""
        config = ModelConfig(K=10, M=4)
        hyper = hyperparams_from_expected(config.K, config.N, 1e-4, 1e-4)
        assert inner_rule_kind(hyper.mean_sigma_z2) is RuleKind.HERMITE
        n = 17
        x = rng.standard_normal(config.K)

        draws = 200_000
        sz2 = sample_inverse_gamma(hyper.sigma_z2_prior, rng, draws)
        sw2 = sample_inverse_gamma(hyper.sigma_w2_prior, rng, draws)
        means = h_rows(n, np.sqrt(sz2) * rng.standard_normal(draws), config) @ x
        grid = np.linspace(means.min() - 0.05, means.max() + 0.05, 200)
        oracle = np.array([stats.norm.pdf(g, means, np.sqrt(sw2)).mean() for g in grid])

        density = np.exp(log_marginal_likelihood(grid, n, x, prior_hybrid(hyper, 9, 9, 129), config))
        core = oracle > 0.1 * oracle.max()
        assert np.max(np.abs(density[core] / oracle[core] - 1.0)) < 0.05

        peak = int(np.argmax(oracle))
        single = marginal_likelihood(grid[peak], x, n, hyper, config)
        assert single.value == pytest.approx(oracle[peak], rel=0.05)

    def test_zero_jitter_reduces_to_gaussian(self):
        """sigma_z^2 = 0 collapses the jitter rule to z = 0"""
        config = ModelConfig(K=3, M=1)
        hybrid = known_variance_hybrid(0.0, 0.04, 9)
        x = np.array([0.5, 1.0, -0.2])
        value = float(log_marginal_likelihood(0.7, 1, x, hybrid, config))
        assert value == pytest.approx(stats.norm.logpdf(0.7, 1.0, 0.2))

    def test_terms_shape(self, small_config, small_hyper):
        """Summands have shape batch + (J1, J2*J3)"""
        hybrid = prior_hybrid(small_hyper, 3, 4, 5)
        terms = log_likelihood_terms(np.zeros(6), np.arange(6), np.ones(small_config.K), hybrid, small_config)
        assert terms.shape == (6, 3, 20)
        assert hybrid.shape == (3, 4, 5)

    def test_marginal_likelihood_wrapper(self, small_config, small_hyper):
        """Wrapper agrees with the batched log form"""
        x = np.array([0.3, -1.1, 0.8, 0.5])
        result = marginal_likelihood(0.2, x, 2, small_hyper, small_config, 5, 5, 33)
        hybrid = prior_hybrid(small_hyper, 5, 5, 33)
        assert result.log_value == pytest.approx(float(log_marginal_likelihood(0.2, 2, x, hybrid, small_config)))
        assert not result.underflow
        assert result.value > 0

    def test_underflow_flag(self, small_config, small_hyper):
        """An absurd observation underflows the linear value"""
        x = np.zeros(small_config.K)
        result = marginal_likelihood(1e4, x, 0, small_hyper, small_config, 3, 3, 9)
        assert result.underflow
        assert np.isfinite(result.log_value)
        assert result.value == 0.0

    def test_jeffreys_prior_rejected(self):
        with pytest.raises(ConfigError):
            prior_hybrid(Hyperparams.jeffreys_prior())

    def test_build_hybrid_rows_depend_on_sigma_z_node(self, small_hyper):
        """Each jitter row is scaled by its own sigma_z^2 node"""
        sz_rule = inverse_gamma_rule(4, small_hyper.alpha_z, small_hyper.beta_z)
        hybrid = build_hybrid(point_mass_rule(0.01), sz_rule, 9, small_hyper.mean_sigma_z2)
        spreads = np.abs(hybrid.z_nodes).max(axis=1)
        assert np.all(np.diff(spreads) > 0)
        assert np.allclose(hybrid.z_weights.sum(axis=1), 1.0, atol=1e-6)

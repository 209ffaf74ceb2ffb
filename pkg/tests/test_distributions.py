"""
Tests for the model distributions

Tests:
1. test_inverse_gamma_logpdf_matches_scipy
2. test_inverse_gamma_sampling_moments
3. test_normal_logpdf
4. test_sample_mvn_moments
5. test_sample_mvn_rejects_non_spd
6. test_sample_mvn_precision
7. test_jitter_conditional_bound
"""

import pytest

import numpy as np
from scipy import stats

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from jitterlab.distributions import (
    InverseGammaParams,
    cholesky_factor,
    inverse_gamma_logpdf,
    log_density_bound,
    log_unnormalized_z_conditional,
    normal_logpdf,
    sample_inverse_gamma,
    sample_mvn,
    sample_mvn_precision,
)
from jitterlab.errors import ConfigError, FactorizationError
from jitterlab.model import build_h_matrix, h_rows


class TestInverseGamma:
    """Tests for the inverse-Gamma density and sampler"""

    @pytest.mark.parametrize("alpha,beta", [(6.5, 5.5), (21.5, 0.205), (0.5, 2.0)])
    def test_inverse_gamma_logpdf_matches_scipy(self, alpha, beta):
        s = np.array([0.01, 0.3, 1.0, 4.0])
        expected = stats.invgamma(alpha, scale=beta).logpdf(s)
        assert np.allclose(inverse_gamma_logpdf(s, InverseGammaParams(alpha, beta)), expected)

    def test_logpdf_scalar_and_domain(self):
        p = InverseGammaParams(3.0, 1.0)
        assert isinstance(inverse_gamma_logpdf(0.5, p), float)
        with pytest.raises(ValueError):
            inverse_gamma_logpdf(0.0, p)

    @pytest.mark.parametrize("alpha,beta", [(6.5, 5.5), (2.0, 1.0), (21.5, 0.205)])
    def test_inverse_gamma_sampling_moments(self, rng, alpha, beta):
        """Draws pass a KS test against scipy; the mean is checked where the variance is finite and small"""
        p = InverseGammaParams(alpha, beta)
        draws = sample_inverse_gamma(p, rng, 20000)
        if alpha > 3:
            assert draws.mean() == pytest.approx(p.mean, rel=0.02)
        assert stats.kstest(draws, stats.invgamma(alpha, scale=beta).cdf).pvalue > 1e-3

    def test_summary_statistics(self):
        p = InverseGammaParams(3.0, 2.0)
        assert p.mean == pytest.approx(1.0)
        assert p.variance == pytest.approx(1.0)
        assert p.mode == pytest.approx(0.5)
        assert InverseGammaParams(1.0, 1.0).mean == float("inf")
        assert InverseGammaParams(2.0, 1.0).variance == float("inf")

    def test_invalid_parameters(self):
        with pytest.raises(ConfigError):
            InverseGammaParams(-1.0, 1.0)


class TestNormal:
    """Tests for normal densities and draws"""

    def test_normal_logpdf(self):
        a = np.array([-1.0, 0.2, 3.0])
        assert np.allclose(normal_logpdf(a, 0.5, 0.25), stats.norm.logpdf(a, 0.5, 0.5))

    def test_sample_mvn_moments(self, rng):
        """Sample mean and covariance approach mu and cov"""
        mu = np.array([1.0, -2.0, 0.5])
        a = rng.standard_normal((3, 3))
        cov = a @ a.T + 0.5 * np.eye(3)
        draws = np.array([sample_mvn(mu, cov, rng) for _ in range(20000)])
        assert np.allclose(draws.mean(axis=0), mu, atol=0.1)
        assert np.allclose(np.cov(draws.T), cov, atol=0.15 * np.abs(cov).max())

    def test_sample_mvn_rejects_non_spd(self, rng):
        """No silent regularisation of an indefinite covariance"""
        with pytest.raises(FactorizationError):
            sample_mvn(np.zeros(2), np.array([[1.0, 2.0], [2.0, 1.0]]), rng)

    def test_factorization_error_is_value_error(self):
        with pytest.raises(ValueError):
            cholesky_factor(-np.eye(2), "Matrix")

    def test_sample_mvn_precision(self, rng):
        """The returned mean solves P mu = b and draws have covariance P^-1"""
        a = rng.standard_normal((3, 3))
        precision = a @ a.T + np.eye(3)
        b = np.array([0.5, -1.0, 2.0])
        draws = []
        for _ in range(20000):
            draw, mean = sample_mvn_precision(precision, b, rng)
            draws.append(draw)
        draws = np.array(draws)
        assert np.allclose(precision @ mean, b)
        cov = np.linalg.inv(precision)
        assert np.allclose(draws.mean(axis=0), mean, atol=5 * np.sqrt(np.diag(cov).max() / 20000))
        assert np.allclose(np.cov(draws.T), cov, atol=0.1 * np.abs(cov).max())


class TestJitterConditional:
    """Tests for the unnormalised jitter conditional"""

    def test_matches_direct_evaluation(self, small_config, instance):
        n, z = 3, 0.04
        x = instance.x_true
        mean = float(h_rows(n, z, small_config) @ x)
        expected = stats.norm.logpdf(instance.y[n], mean, 0.1) + stats.norm.logpdf(z, 0.0, 0.2)
        value = log_unnormalized_z_conditional(z, n, instance.y[n], x, 0.04, 0.01, small_config)
        assert isinstance(value, float)
        assert value == pytest.approx(expected)

    def test_broadcasts_over_samples(self, small_config, instance):
        """One call scores every sample at its own jitter"""
        z = instance.z_true
        n = np.arange(small_config.N)
        values = log_unnormalized_z_conditional(z, n, instance.y, instance.x_true, 0.01, 0.01, small_config)
        residual = instance.y - build_h_matrix(z, small_config) @ instance.x_true
        expected = stats.norm.logpdf(residual, 0.0, 0.1) + stats.norm.logpdf(z, 0.0, 0.1)
        assert np.allclose(values, expected)

    def test_jitter_conditional_bound(self, small_config, instance):
        """The conditional never exceeds -log(2 pi sigma_z sigma_w)"""
        z = np.linspace(-1.0, 1.0, 401)
        values = log_unnormalized_z_conditional(z, 2, instance.y[2], instance.x_true, 0.02, 0.005, small_config)
        assert np.all(values <= log_density_bound(0.02, 0.005) + 1e-12)
        assert log_density_bound(0.02, 0.005) == pytest.approx(-np.log(2 * np.pi * np.sqrt(0.02 * 0.005)))

"""
Tests for the signal model

Tests:
1. test_sinc_values
2. test_h_matrix_entries
3. test_h_matrix_dimension_check
4. test_hyperparams_from_expected
5. test_prior_means_match_expectations
6. test_jeffreys_mode
7. test_synthesize_consistency
8. test_synthesize_noiseless_override
9. test_seed_streams
"""

import pytest

import numpy as np
from hypothesis import given, settings, strategies as st

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from jitterlab.errors import ConfigError, DimensionError
from jitterlab.model import (
    GeneratorKind,
    Hyperparams,
    ModelConfig,
    SynthesisOverrides,
    build_h_matrix,
    generator_derivative,
    h_rows,
    hyperparams_from_expected,
    sinc,
    synthesize,
)
from jitterlab.streams import GIBBS, SYNTHESIS, stream, trial_seed


class TestGenerator:
    """Tests for the sinc generating function"""

    def test_sinc_values(self):
        """sinc is 1 at zero and vanishes at the other integers"""
        assert sinc(0.0) == pytest.approx(1.0)
        assert np.allclose(sinc(np.array([1.0, -2.0, 3.0])), 0.0, atol=1e-15)
        assert sinc(0.5) == pytest.approx(2.0 / np.pi)

    def test_sinc_near_zero_is_continuous(self):
        """Series branch agrees with the closed form just above the threshold"""
        assert sinc(1e-9) == pytest.approx(1.0, abs=1e-15)
        assert float(sinc(2e-8)) == pytest.approx(np.sin(np.pi * 2e-8) / (np.pi * 2e-8), rel=1e-14)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=-1e3, max_value=1e3, allow_nan=False))
    def test_sinc_bounded_by_one(self, t):
        assert abs(float(sinc(t))) <= 1.0 + 1e-15

    def test_sinc_derivative(self):
        """Derivative matches a central difference"""
        t = 0.37
        eps = 1e-6
        numeric = (float(sinc(t + eps)) - float(sinc(t - eps))) / (2 * eps)
        assert generator_derivative(t) == pytest.approx(numeric, rel=1e-6)
        assert generator_derivative(0.0) == pytest.approx(0.0)


class TestObservationMatrix:
    """Tests for H(z)"""

    def test_h_matrix_entries(self, small_config):
        """Entry (n, k) is h(n/M + z_n - k)"""
        z = np.linspace(-0.1, 0.1, small_config.N)
        h = build_h_matrix(z, small_config)
        assert h.shape == (small_config.N, small_config.K)
        for n in range(small_config.N):
            for k in range(small_config.K):
                assert h[n, k] == pytest.approx(float(sinc(n / small_config.M + z[n] - k)))

    def test_zero_jitter_at_integer_times_is_identity(self):
        """With M=1 and z=0 the observation matrix is the identity"""
        config = ModelConfig(K=5, M=1)
        assert np.allclose(build_h_matrix(np.zeros(5), config), np.eye(5), atol=1e-15)

    def test_h_rows_broadcast(self, small_config):
        """h_rows broadcasts n and z and appends the K axis"""
        rows = h_rows(np.arange(3)[:, None], np.zeros((1, 4)), small_config)
        assert rows.shape == (3, 4, small_config.K)

    def test_h_matrix_dimension_check(self, small_config):
        """Wrong jitter length raises DimensionError"""
        with pytest.raises(DimensionError):
            build_h_matrix(np.zeros(small_config.N + 1), small_config)

    def test_config_validation(self):
        """K, M and T are checked"""
        with pytest.raises(ConfigError):
            ModelConfig(K=0, M=1)
        with pytest.raises(ConfigError):
            ModelConfig(K=3, M=0)
        with pytest.raises(ConfigError):
            ModelConfig(K=3, M=1, T=0.5)

    def test_config_round_trip(self, small_config):
        """to_dict / from_dict keep the geometry"""
        restored = ModelConfig.from_dict(small_config.to_dict())
        assert restored == small_config
        assert restored.generator is GeneratorKind.SINC
        assert restored.N == 8


class TestPriors:
    """Tests for the inverse-Gamma hyperparameters"""

    def test_hyperparams_from_expected(self):
        """Counts K=10, N=40 give the fitted shapes and scales"""
        hyper = hyperparams_from_expected(10, 40, 0.0625, 0.01)
        assert hyper.alpha_x == pytest.approx(6.5)
        assert hyper.beta_x == pytest.approx(5.5)
        assert hyper.alpha_z == pytest.approx(21.5)
        assert hyper.beta_z == pytest.approx(20.5 * 0.0625)
        assert hyper.alpha_w == pytest.approx(21.5)
        assert hyper.beta_w == pytest.approx(20.5 * 0.01)

    def test_prior_means_match_expectations(self):
        """Prior means are 1, E[sigma_z^2] and E[sigma_w^2]"""
        hyper = hyperparams_from_expected(10, 40, 0.0625, 0.01)
        assert hyper.mean_sigma_x2 == pytest.approx(1.0)
        assert hyper.mean_sigma_z2 == pytest.approx(0.0625)
        assert hyper.mean_sigma_w2 == pytest.approx(0.01)
        assert hyper.sigma_x2_prior.variance == pytest.approx(2.0 / 9.0)

    def test_noise_to_signal_ratio(self):
        """The LMMSE ratio is the ratio of prior means"""
        hyper = hyperparams_from_expected(10, 40, 0.0625, 0.01)
        assert hyper.noise_to_signal_ratio == pytest.approx(hyper.mean_sigma_w2 / hyper.mean_sigma_x2)

    @pytest.mark.parametrize("args", [(1, 40, 0.1, 0.1), (10, 1, 0.1, 0.1), (10, 40, 0.0, 0.1), (10, 40, 0.1, -1.0)])
    def test_invalid_counts_and_expectations(self, args):
        """Counts <= 1 or non-positive expectations are rejected"""
        with pytest.raises(ConfigError):
            hyperparams_from_expected(*args)

    def test_non_positive_hyperparameter_rejected(self):
        with pytest.raises(ConfigError):
            Hyperparams(1.0, 1.0, 1.0, 0.0, 1.0, 1.0)

    def test_jeffreys_mode(self):
        """Jeffreys mode has zero parameters and refuses proper-prior queries"""
        hyper = Hyperparams.jeffreys_prior()
        assert hyper.jeffreys
        with pytest.raises(ConfigError):
            hyper.sigma_x2_prior
        with pytest.raises(ConfigError):
            hyper.noise_to_signal_ratio
        with pytest.raises(ConfigError):
            Hyperparams(0.0, 1.0, 0.0, 0.0, 0.0, 0.0, jeffreys=True)

    def test_round_trip(self, small_hyper):
        assert Hyperparams.from_dict(small_hyper.to_dict()) == small_hyper


class TestSynthesis:
    """Tests for synthetic instances"""

    def test_synthesize_consistency(self, small_config, small_hyper):
        """y equals H(z) x + w for the recorded draws"""
        inst = synthesize(small_config, small_hyper, 99)
        h = build_h_matrix(inst.z_true, small_config)
        assert np.allclose(inst.y, h @ inst.x_true + inst.w)
        assert inst.seed == 99
        assert inst.x_true.shape == (small_config.K,)
        assert inst.z_true.shape == (small_config.N,)
        assert min(inst.sigma_x2, inst.sigma_z2, inst.sigma_w2) > 0

    def test_synthesize_is_deterministic(self, small_config, small_hyper):
        """Same seed gives the same instance"""
        a = synthesize(small_config, small_hyper, 5)
        b = synthesize(small_config, small_hyper, 5)
        assert np.array_equal(a.y, b.y)
        assert np.array_equal(a.z_true, b.z_true)

    def test_synthesize_noiseless_override(self, small_config, small_hyper):
        """Zero jitter and noise overrides give y = H(0) x exactly"""
        inst = synthesize(
            small_config, small_hyper, 3, SynthesisOverrides(sigma_z2=0.0, sigma_w2=0.0)
        )
        assert np.all(inst.z_true == 0)
        assert np.all(inst.w == 0)
        assert np.allclose(inst.y, build_h_matrix(np.zeros(small_config.N), small_config) @ inst.x_true)

    def test_fixed_jitter_override(self, small_config, small_hyper):
        z = np.full(small_config.N, 0.05)
        inst = synthesize(small_config, small_hyper, 3, SynthesisOverrides(z=z))
        assert np.array_equal(inst.z_true, z)
        with pytest.raises(DimensionError):
            synthesize(small_config, small_hyper, 3, SynthesisOverrides(z=np.zeros(3)))

    def test_negative_override_rejected(self):
        with pytest.raises(ConfigError):
            SynthesisOverrides(sigma_w2=-1.0)

    def test_squared_error(self, instance):
        assert instance.squared_error(instance.x_true) == 0.0
        assert instance.squared_error(instance.x_true + 1.0) == pytest.approx(instance.x_true.size)

    def test_sample_variance_of_signal(self):
        """Drawn coefficients have the prior mean signal variance on average"""
        config = ModelConfig(K=10, M=1)
        hyper = hyperparams_from_expected(10, 10, 0.01, 0.01)
        energies = [np.mean(synthesize(config, hyper, s).x_true ** 2) for s in range(1000)]
        assert np.mean(energies) == pytest.approx(1.0, abs=0.1)


class TestStreams:
    """Tests for reproducible seed streams"""

    def test_seed_streams(self):
        """Streams depend only on their key"""
        a = stream(1, SYNTHESIS).standard_normal(4)
        b = stream(1, SYNTHESIS).standard_normal(4)
        c = stream(1, GIBBS).standard_normal(4)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_trial_seed_is_order_independent(self):
        first = [trial_seed(42, t) for t in range(5)]
        reversed_order = [trial_seed(42, t) for t in reversed(range(5))][::-1]
        assert first == reversed_order
        assert len(set(first)) == 5
        assert trial_seed(42, 0) != trial_seed(43, 0)

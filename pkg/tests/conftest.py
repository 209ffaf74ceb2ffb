"""
Pytest configuration and shared fixtures
"""

import pytest
import tempfile
from pathlib import Path

import numpy as np
import yaml

# Add src to path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from jitterlab.model import ModelConfig, SynthesisOverrides, hyperparams_from_expected, synthesize
from jitterlab.sampler import ChainState, SliceConfig


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run slow statistical and acceptance tests"
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running statistical or acceptance test")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="need --runslow option to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def small_config():
    """K=4 coefficients at 2x oversampling (N=8)"""
    return ModelConfig(K=4, M=2)


@pytest.fixture
def small_hyper(small_config):
    """Priors fitted to E[sigma_z^2] = 0.0625, E[sigma_w^2] = 0.01"""
    return hyperparams_from_expected(small_config.K, small_config.N, 0.0625, 0.01)


@pytest.fixture
def hermite_hyper(small_config):
    """Priors whose mean jitter variance selects the Hermite inner rule"""
    return hyperparams_from_expected(small_config.K, small_config.N, 0.0025, 0.01)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def instance(small_config, small_hyper):
    """Synthetic instance with moderate pinned variances"""
    return synthesize(
        small_config,
        small_hyper,
        2024,
        SynthesisOverrides(sigma_x2=1.0, sigma_z2=0.01, sigma_w2=0.01),
    )


@pytest.fixture
def truth_state(instance):
    """Chain state sitting on the instance's true values"""
    return ChainState(
        x=instance.x_true,
        z=instance.z_true,
        sigma_x2=instance.sigma_x2,
        sigma_z2=instance.sigma_z2,
        sigma_w2=instance.sigma_w2,
    )


@pytest.fixture
def slice_cfg():
    return SliceConfig()


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests"""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield tmpdir


@pytest.fixture
def tiny_settings(temp_dir):
    """Experiment settings small enough to run every experiment in seconds"""
    return {
        "seed": 7,
        "K": 3,
        "M": 2,
        "e_sigma_z2": 0.0625,
        "e_sigma_w2": 0.01,
        "J1": 3,
        "J2": 3,
        "J3": 17,
        "I": 6,
        "I_b": 4,
        "chains": 2,
        "checkpoint_every": 2,
        "em_max_iters": 20,
        "likelihood_draws": 400,
        "likelihood_grid": 50,
        "histogram_bins": 10,
        "trials": 2,
        "output": str(Path(temp_dir) / "results.csv"),
        "log_level": "WARNING",
    }


@pytest.fixture
def temp_config_file(temp_dir, tiny_settings):
    """YAML configuration file with the tiny settings"""
    path = Path(temp_dir) / "config.yaml"
    path.write_text(yaml.safe_dump({"experiment_config": tiny_settings}))
    return str(path)

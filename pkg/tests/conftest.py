"""Shared fixtures for the test suite"""

import os

import numpy as np
import pytest

from sufficient_graph.config import PipelineConfig
from sufficient_graph.simgen import gen_model_1, gen_model_2


def pytest_collection_modifyitems(config, items):
    if os.environ.get("SGM_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="simulation-scale check; set SGM_RUN_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def model1_small():
    """Model I at n=40"""
    return gen_model_1(40, seed=3)


@pytest.fixture
def model2_data():
    """Model II at n=100"""
    return gen_model_2(100, seed=11)


@pytest.fixture
def fixed_config():
    """Serial config with fixed regularizers, so no GCV runs"""
    return PipelineConfig(eps_pair=1e-2, eps_minus=1e-2, eps_u=1e-2, workers=1)


def random_psd(rng, n, rank=None):
    """Random symmetric PSD matrix of the given rank"""
    rank = rank or n
    f = rng.standard_normal((n, rank))
    m = f @ f.T
    return (m + m.T) / 2.0

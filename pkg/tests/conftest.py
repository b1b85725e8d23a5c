"""Shared fixtures: reference scenario, its link budget and seeded sources"""

import numpy as np
import pytest

from src.analysis.monte_carlo import TrialSeeds
from src.physics.channels import sample_channels
from src.physics.scenario import default_scenario, link_budget


@pytest.fixture
def params():
    return default_scenario()


@pytest.fixture
def budget(params):
    return link_budget(params)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def seeds():
    return TrialSeeds(7)


@pytest.fixture
def channel_factory(params):
    """channel_factory(N, seed=0) -> a default-scenario realization"""

    def make(N, seed=0):
        return sample_channels(params, N, np.random.default_rng(seed))

    return make

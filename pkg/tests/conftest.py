import numpy as np
import pytest

from config.experiment_config import parse_config
from network.graph import build_graph, fully_connected
from network.stochastic import identity_matrix, uniform_matrix


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def uniform_graph():
    return fully_connected(2)


@pytest.fixture
def single_node_graph():
    return build_graph(uniform_matrix(1), uniform_matrix(1))


@pytest.fixture
def identity_graph():
    return build_graph(identity_matrix(3), identity_matrix(3))


@pytest.fixture
def small_config():
    """fig1 parameters at a size that runs in well under a second."""
    return parse_config(
        "simulation:\n"
        "  sample_count: 200\n"
        "  monte_carlo_runs: 2\n"
        "  moment_samples: 2000\n",
        preset="fig1",
    )

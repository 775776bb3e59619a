import numpy as np
import pytest

from src.schemas.graph_models import Digraph
from src.schemas.network_models import Network


def make_network(n, arcs, p, th):
    return Network(graph=Digraph.from_arcs(n, arcs), p=tuple(p), th=tuple(th))


@pytest.fixture
def feeder_net():
    """One 2-cycle {1, 2} feeding node 3; the attractor from (0, 1, 1) has length 4."""
    return make_network(3, [(1, 2), (2, 1), (1, 3)], p=(1, 1, 2), th=(1, 1, 1))


@pytest.fixture
def feeder_state():
    return np.array([0, 1, 1])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def make_net():
    return make_network

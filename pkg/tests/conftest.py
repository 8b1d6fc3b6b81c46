import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dtqwk.graph import WeightedGraph, from_edges  # noqa: E402
from dtqwk.io import load_tu_dataset  # noqa: E402

DATA = Path(__file__).parent / "data"


def random_connected_graph(rng, n, p=0.5, low=0.1, high=5.0, labels=None):
    """Random spanning tree plus extra edges, uniform weights in [low, high)."""
    W = np.zeros((n, n))
    order = rng.permutation(n)
    for k in range(1, n):
        a, b = order[k], order[rng.integers(k)]
        W[a, b] = W[b, a] = rng.uniform(low, high)
    for a in range(n):
        for b in range(a + 1, n):
            if W[a, b] == 0 and rng.random() < p:
                W[a, b] = W[b, a] = rng.uniform(low, high)
    return WeightedGraph(W, vertex_labels=labels)


def random_tree(rng, n, low=0.1, high=5.0):
    edges = [(k, int(rng.integers(k)), rng.uniform(low, high)) for k in range(1, n)]
    return edges


def random_complete_graph(rng, n, labels=None, graph_id=None):
    X = rng.normal(size=(n, 8))
    W = np.sqrt(((X[:, None, :] - X[None, :, :]) ** 2).sum(-1))
    W = np.triu(W, 1)
    W = W + W.T
    return WeightedGraph(W, vertex_labels=labels, graph_id=graph_id)


@pytest.fixture(scope="session")
def mutag():
    return load_tu_dataset(DATA / "MUTAG")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def path3():
    return from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def star3():
    return from_edges(4, [(0, 1), (0, 2), (0, 3)])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

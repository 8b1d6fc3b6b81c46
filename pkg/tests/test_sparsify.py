import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_connected_graph
from oracles import oracle_mst
from dtqwk.exceptions import ConnectivityError, GraphValidationError
from dtqwk.graph import WeightedGraph, from_edges
from dtqwk.sparsify import (
    SparseGraph,
    SpanningTree,
    UnionFind,
    kruskal,
    mst_over_q,
    sparsification_policy,
)
from dtqwk.spectral import commute_time_matrix, modified_commute_matrix


def test_union_find():
    uf = UnionFind(4)
    assert uf.union(0, 1)
    assert uf.union(2, 3)
    assert not uf.union(1, 0)
    assert uf.union(1, 3)
    assert len({uf.find(i) for i in range(4)}) == 1


def test_kruskal_tie_break_is_lexicographic():
    # all weights equal: the lexicographically smallest pairs win
    edges = [(2, 3, 1.0), (0, 3, 1.0), (1, 0, 1.0), (1, 2, 1.0)]
    assert kruskal(4, edges) == [(0, 1, 1.0), (0, 3, 1.0), (1, 2, 1.0)]


def test_complete_graph_becomes_tree():
    g = WeightedGraph(np.ones((5, 5)) - np.eye(5))
    s = sparsification_policy(g)
    assert isinstance(s, SpanningTree)
    assert s.is_tree
    assert s.meta["branch"] == "mst"
    assert s.meta["edge_vertex_ratio"] == 2.0


def test_sparse_graph_keeps_edges_with_commute_weights(path3):
    s = sparsification_policy(path3)
    assert s.kind == "commute"
    assert [(u, v) for u, v, _ in s.edges] == [(0, 1), (1, 2)]
    assert s.edges[0][2] == pytest.approx(4.0, rel=1e-12)


def test_threshold_boundary_is_exclusive():
    # cycle of 4 plus a chord: 5 edges, ratio 1.25; threshold 1.25 keeps it whole
    g = from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    assert sparsification_policy(g, threshold=1.25).kind == "commute"
    assert sparsification_policy(g, threshold=1.2).kind == "mst"


def test_tree_keeps_labels():
    g = from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], vertex_labels="abc",
                   edge_labels={(0, 1): "x", (1, 2): "y", (0, 2): "z"})
    Q = modified_commute_matrix(g, commute_time_matrix(g))
    t = mst_over_q(g, Q)
    assert t.vertex_labels == ("a", "b", "c")
    assert set(t.edge_labels) == {(u, v) for u, v, _ in t.edges}


def test_validation():
    with pytest.raises(GraphValidationError):
        SpanningTree(n=3, edges=[(0, 1, 1.0)], vertex_labels="abc")
    with pytest.raises(GraphValidationError):
        SpanningTree(n=3, edges=[(0, 1, 1.0), (1, 0, 2.0)], vertex_labels="abc")
    with pytest.raises(GraphValidationError):
        SparseGraph(n=2, edges=[(0, 1, 0.0)], vertex_labels="ab")
    with pytest.raises(ConnectivityError):
        mst_over_q(from_edges(4, [(0, 1), (2, 3)]), np.ones((4, 4)))


def test_round_trip_to_weighted_graph(path3):
    s = sparsification_policy(path3)
    g = s.to_weighted_graph()
    assert np.array_equal(g.weights, s.weight_matrix())
    assert s.total_weight() == pytest.approx(8.0)  # two edges of commute time 4


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**32 - 1))
def test_mst_matches_enumeration(n, seed):
    g = random_connected_graph(np.random.default_rng(seed), n, p=0.6)
    Q = modified_commute_matrix(g, commute_time_matrix(g))
    t = mst_over_q(g, Q)
    assert t.is_tree
    assert t.total_weight() == pytest.approx(oracle_mst(Q), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 7), st.integers(0, 2**32 - 1))
def test_mst_integer_weights_exact(n, seed):
    rng = np.random.default_rng(seed)
    W = np.triu(rng.integers(1, 4, size=(n, n)).astype(float), 1)
    W = W + W.T
    edges = [(u, v, W[u, v]) for u in range(n) for v in range(u + 1, n)]
    tree = kruskal(n, edges)
    assert sum(w for _, _, w in tree) == oracle_mst(W)

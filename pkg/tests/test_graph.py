import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtqwk.exceptions import ConnectivityError, GraphValidationError
from dtqwk.graph import (
    GraphDataset,
    WeightedGraph,
    canonical_order,
    canonical_token,
    connected_parts,
    degree_labels,
    from_edges,
    largest_component,
    require_connected,
)


def test_default_labels_are_degrees(star3):
    assert star3.vertex_labels == ("3", "1", "1", "1")
    assert star3.n == 4
    assert star3.n_edges == 3
    assert star3.edges() == [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]


def test_weights_are_read_only(path3):
    with pytest.raises(ValueError):
        path3.weights[0, 1] = 5.0


@pytest.mark.parametrize("weights", [
    [[0, 1], [2, 0]],
    [[0, -1], [-1, 0]],
    [[1, 1], [1, 0]],
    [[0, np.nan], [np.nan, 0]],
    [[0, 1, 0], [1, 0, 1]],
])
def test_invalid_weights_rejected(weights):
    with pytest.raises(GraphValidationError):
        WeightedGraph(weights)


def test_label_count_and_edge_label_checks():
    with pytest.raises(GraphValidationError):
        WeightedGraph([[0, 1], [1, 0]], vertex_labels=["a"])
    with pytest.raises(GraphValidationError):
        from_edges(3, [(0, 1)], edge_labels={(1, 2): "x"})
    g = from_edges(3, [(0, 1)], edge_labels={(1, 0): 2})
    assert g.edge_label(0, 1) == "2"
    assert g.edge_label(1, 0) == "2"


@pytest.mark.parametrize("raw, token", [(7, "7"), ("007", "7"), (7.0, "7"), (" C ", "C"),
                                        (True, "1"), (np.int64(-3), "-3"), (0.5, "0.5")])
def test_canonical_token(raw, token):
    assert canonical_token(raw) == token


def test_permute_moves_labels_and_weights():
    g = from_edges(3, [(0, 1, 2.0), (1, 2, 5.0)], vertex_labels=["a", "b", "c"],
                   edge_labels={(0, 1): "x", (1, 2): "y"})
    p = g.permute([2, 0, 1])
    assert p.vertex_labels == ("c", "a", "b")
    assert p.weights[0, 2] == 5.0
    assert p.weights[1, 2] == 2.0
    assert p.edge_label(1, 2) == "x"
    assert p.edge_label(0, 2) == "y"
    with pytest.raises(GraphValidationError):
        g.permute([0, 0, 1])


def test_components_and_reduction():
    g = from_edges(5, [(0, 1), (2, 3), (3, 4)], vertex_labels="abcde")
    assert connected_parts(g) == [[2, 3, 4], [0, 1]]
    sub, kept = largest_component(g)
    assert kept == [2, 3, 4]
    assert sub.vertex_labels == ("c", "d", "e")
    with pytest.raises(ConnectivityError) as info:
        require_connected(g)
    assert info.value.components == [[2, 3, 4], [0, 1]]


def test_dataset_ids_unique(path3):
    a = path3.replace(graph_id=1)
    with pytest.raises(GraphValidationError):
        GraphDataset([a, a])
    ds = GraphDataset([a, path3.replace(graph_id=2, class_label="x")])
    assert ds.graph_ids == [1, 2]
    assert ds.class_labels == [None, "x"]
    assert ds.label_alphabet == {"1", "2"}


def test_degree_labels():
    g = from_edges(3, [(0, 1), (1, 2)], vertex_labels="xyz")
    assert degree_labels(g).vertex_labels == ("1", "2", "1")


@st.composite
def labelled_graphs(draw):
    n = draw(st.integers(2, 9))
    alphabet = draw(st.integers(1, 3))
    labels = [str(draw(st.integers(0, alphabet - 1))) for _ in range(n)]
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if draw(st.booleans()):
                edges.append((u, v, float(draw(st.integers(1, 3)))))
    perm = draw(st.permutations(range(n)))
    return from_edges(n, edges, vertex_labels=labels), list(perm)


@settings(max_examples=150, deadline=None)
@given(labelled_graphs())
def test_canonical_form_is_numbering_independent(case):
    g, perm = case
    h = g.permute(perm)
    a = g.permute(canonical_order(g))
    b = h.permute(canonical_order(h))
    assert a.vertex_labels == b.vertex_labels
    assert np.array_equal(a.weights, b.weights)


def test_canonical_order_unique_labels_sorts():
    g = from_edges(3, [(0, 1), (1, 2)], vertex_labels=["c", "a", "b"])
    assert canonical_order(g) == [1, 2, 0]

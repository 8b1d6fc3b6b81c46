import math

import numpy as np
import pytest

from dtqwk.graph import from_edges
from dtqwk.labels import (
    LabelTable,
    directed_edge_label,
    label_distribution,
    wl_iterations,
    wl_refine,
)
from dtqwk.sparsify import SparseGraph, sparsification_policy
from dtqwk.walk import build_walk_system, visit_distribution


def test_label_encoding_is_unambiguous():
    assert directed_edge_label("ab", "c") != directed_edge_label("a", "bc")
    assert directed_edge_label("C", "O") == "1:C1:O"
    assert directed_edge_label("C", "O", "2") == "1:C1:21:O"
    assert directed_edge_label("C", "O") != directed_edge_label("O", "C")


def test_table_is_first_seen_and_shared():
    t = LabelTable()
    assert t.compress(1, ("a", ("b",))) == "wl1.0"
    assert t.compress(1, ("b", ("a",))) == "wl1.1"
    assert t.compress(1, ("a", ("b",))) == "wl1.0"
    c = t.copy()
    c.compress(2, ("x", ()))
    assert len(t) == 2 and len(c) == 3


def test_wl_on_path():
    s = SparseGraph(n=3, edges=[(0, 1, 1.0), (1, 2, 1.0)], vertex_labels="aba")
    levels = wl_iterations(s, 2, LabelTable())
    assert levels[0] == ("a", "b", "a")
    assert levels[1][0] == levels[1][2] != levels[1][1]
    assert wl_refine(s, 0) == ("a", "b", "a")
    with pytest.raises(ValueError):
        wl_iterations(s, -1)


def test_distribution_groups_by_label():
    g = from_edges(3, [(0, 1), (1, 2)], vertex_labels="CCO")
    s = sparsification_policy(g)
    vd = visit_distribution(build_walk_system(s), 5)
    d = label_distribution(vd, s, s.vertex_labels)
    expected_keys = {directed_edge_label(a, b) for a, b in
                     [("C", "C"), ("C", "O"), ("O", "C")]}
    assert set(d.masses) == expected_keys
    assert d.masses[directed_edge_label("C", "C")] == math.fsum(
        p for (u, v), p in vd.as_dict().items() if (u, v) in [(0, 1), (1, 0)]
    )
    assert d.total() == pytest.approx(1.0, abs=1e-12)


def test_edge_labels_enter_keys():
    g = from_edges(2, [(0, 1)], vertex_labels="CO", edge_labels={(0, 1): 2})
    s = sparsification_policy(g)
    vd = visit_distribution(build_walk_system(s), 3)
    with_el = label_distribution(vd, s, s.vertex_labels)
    without = label_distribution(vd, s, s.vertex_labels, use_edge_labels=False)
    assert set(with_el.masses) == {"1:C1:21:O", "1:O1:21:C"}
    assert set(without.masses) == {"1:C1:O", "1:O1:C"}


def test_single_edge_distribution_is_two_point():
    g = from_edges(2, [(0, 1, 3.0)], vertex_labels="ab")
    s = sparsification_policy(g)
    d = label_distribution(visit_distribution(build_walk_system(s), 25), s, s.vertex_labels)
    assert sorted(d.masses.values()) == pytest.approx([0.5, 0.5])
    same = from_edges(2, [(0, 1)], vertex_labels="aa")
    s2 = sparsification_policy(same)
    d2 = label_distribution(visit_distribution(build_walk_system(s2), 25), s2, s2.vertex_labels)
    assert list(d2.masses.values()) == [pytest.approx(1.0)]
    assert np.isclose(d2.total(), 1.0)

"""Commute-time spanning trees and the density-based sparsification rule."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConnectivityError, GraphValidationError
from .graph import WeightedGraph, connected_parts
from .spectral import commute_time_matrix, modified_commute_matrix

__all__ = [
    "UnionFind",
    "SparseGraph",
    "SpanningTree",
    "kruskal",
    "mst_over_q",
    "sparsification_policy",
    "DENSITY_THRESHOLD",
]

# Graphs with more than this many edges per vertex are reduced to a tree.
DENSITY_THRESHOLD = 1.5


class UnionFind:
    """Disjoint sets with union by rank and path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.n_sets = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of ``a`` and ``b``; False if already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.n_sets -= 1
        return True


@dataclass(frozen=True, eq=False)
class SparseGraph:
    """Weighted edge set the quantum walk runs on.

    ``edges`` holds ``(u, v, weight)`` with ``u < v`` in sorted order.
    ``kind`` is ``"mst"`` for commute-time spanning trees and ``"commute"``
    for sparse graphs kept whole and re-weighted by commute time.
    """

    n: int
    edges: tuple
    vertex_labels: tuple
    edge_labels: dict = None
    graph_id: object = None
    kind: str = "commute"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        edges = tuple(sorted((min(u, v), max(u, v), float(w)) for u, v, w in self.edges))
        for u, v, w in edges:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphValidationError(f"invalid edge ({u}, {v}) on {self.n} vertices")
            if not w > 0:
                raise GraphValidationError(f"edge ({u}, {v}) has non-positive weight {w!r}")
        if len({(u, v) for u, v, _ in edges}) != len(edges):
            raise GraphValidationError("duplicate edges")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "vertex_labels", tuple(self.vertex_labels))

    @property
    def is_tree(self) -> bool:
        return self.kind == "mst"

    def weight_matrix(self) -> np.ndarray:
        W = np.zeros((self.n, self.n))
        for u, v, w in self.edges:
            W[u, v] = W[v, u] = w
        return W

    def neighbors(self) -> list[list[int]]:
        nbrs = [[] for _ in range(self.n)]
        for u, v, _ in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return [sorted(x) for x in nbrs]

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def edge_label(self, u: int, v: int):
        if self.edge_labels is None:
            return None
        return self.edge_labels.get((min(u, v), max(u, v)))

    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))

    def to_weighted_graph(self) -> WeightedGraph:
        return WeightedGraph(
            self.weight_matrix(),
            vertex_labels=self.vertex_labels,
            edge_labels=self.edge_labels,
            graph_id=self.graph_id,
        )


class SpanningTree(SparseGraph):
    """A :class:`SparseGraph` that is a spanning tree of its vertex set."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.edges) != self.n - 1:
            raise GraphValidationError(
                f"spanning tree on {self.n} vertices needs {self.n - 1} edges, got {len(self.edges)}"
            )
        uf = UnionFind(self.n)
        for u, v, _ in self.edges:
            if not uf.union(u, v):
                raise GraphValidationError(f"edge ({u}, {v}) closes a cycle")
        object.__setattr__(self, "kind", "mst")


def kruskal(n: int, edges) -> list[tuple[int, int, float]]:
    """Minimum spanning forest of ``(u, v, w)`` edges.

    Ties are broken by ``(w, min(u, v), max(u, v))`` so the result is fully
    determined by the vertex numbering.
    """
    order = sorted((float(w), min(u, v), max(u, v)) for u, v, w in edges)
    uf = UnionFind(n)
    chosen = []
    for w, u, v in order:
        if uf.union(u, v):
            chosen.append((u, v, w))
            if len(chosen) == n - 1:
                break
    return chosen


def _restrict_edge_labels(g: WeightedGraph, edges) -> dict:
    if g.edge_labels is None:
        return None
    return {(u, v): g.edge_labels[(u, v)] for u, v, _ in edges if (u, v) in g.edge_labels}


def mst_over_q(g: WeightedGraph, Q) -> SpanningTree:
    """Minimum spanning tree of ``g`` with edge weights taken from ``Q``."""
    Q = np.asarray(Q, dtype=np.float64)
    candidates = []
    for u, v, _ in g.edges():
        q = Q[u, v]
        if not q > 0:
            raise GraphValidationError(
                f"graph {g.graph_id!r}: modified weight on edge ({u}, {v}) is {q!r}, expected > 0"
            )
        candidates.append((u, v, q))
    chosen = kruskal(g.n, candidates)
    if len(chosen) != g.n - 1:
        parts = connected_parts(g)
        raise ConnectivityError(
            f"graph {g.graph_id!r}: edge support is disconnected ({len(parts)} components)",
            components=parts,
        )
    return SpanningTree(
        n=g.n,
        edges=chosen,
        vertex_labels=g.vertex_labels,
        edge_labels=_restrict_edge_labels(g, chosen),
        graph_id=g.graph_id,
        kind="mst",
    )


def sparsification_policy(g: WeightedGraph, threshold: float = DENSITY_THRESHOLD) -> SparseGraph:
    """Choose the walk substrate for ``g``.

    Dense graphs (``|E| / |V| > threshold``) become the minimum spanning
    tree over the modified commute-time matrix, keeping the modified
    weights. Sparser graphs keep their edges, each re-weighted by the
    commute time between its endpoints.
    """
    ct = commute_time_matrix(g)
    ratio = g.n_edges / g.n
    meta = {"edge_vertex_ratio": ratio, "threshold": threshold}
    if ratio > threshold:
        tree = mst_over_q(g, modified_commute_matrix(g, ct))
        tree.meta.update(meta, branch="mst")
        return tree
    edges = [(u, v, ct.C[u, v]) for u, v, _ in g.edges()]
    return SparseGraph(
        n=g.n,
        edges=edges,
        vertex_labels=g.vertex_labels,
        edge_labels=g.edge_labels,
        graph_id=g.graph_id,
        kind="commute",
        meta=dict(meta, branch="commute"),
    )

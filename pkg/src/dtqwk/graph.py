"""Weighted graph data model.

Graphs are immutable once built: the weight matrix is stored read-only and
all transformations (relabelling, permutation, component extraction) return
new instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .exceptions import ConnectivityError, GraphValidationError

__all__ = [
    "WeightedGraph",
    "GraphDataset",
    "canonical_token",
    "degree_labels",
    "canonical_order",
    "connected_parts",
    "largest_component",
]


def canonical_token(value) -> str:
    """Turn a raw label into an opaque string token.

    Integers (and integral floats / numeric strings) are written without
    leading zeros or sign noise so that ``"007"``, ``7`` and ``7.0`` all map
    to ``"7"``.
    """
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if float(value).is_integer():
            return str(int(value))
        return repr(float(value))
    text = str(value).strip()
    try:
        return str(int(text))
    except ValueError:
        return text


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Undirected graph with nonnegative edge weights and discrete labels.

    Parameters
    ----------
    weights : array-like of shape (n, n)
        Symmetric nonnegative weight matrix with zero diagonal. An edge
        ``{u, v}`` exists iff ``weights[u, v] > 0``.
    vertex_labels : sequence of str, optional
        One token per vertex. Defaults to unweighted degree tokens.
    edge_labels : mapping, optional
        Map from vertex pair ``(u, v)`` to a token. Keys are normalised to
        ``(min, max)`` and must reference existing edges.
    graph_id, class_label : optional
        Dataset metadata carried through the pipeline untouched.
    """

    weights: np.ndarray
    vertex_labels: tuple = None
    edge_labels: Mapping = None
    graph_id: object = None
    class_label: object = None

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise GraphValidationError(f"weight matrix must be square, got shape {w.shape}")
        if w.shape[0] < 1:
            raise GraphValidationError("graph must have at least one vertex")
        if not np.all(np.isfinite(w)):
            raise GraphValidationError("weight matrix contains non-finite values")
        if np.any(w < 0):
            u, v = np.argwhere(w < 0)[0]
            raise GraphValidationError(f"negative weight {w[u, v]!r} at ({u}, {v})")
        if np.any(np.diag(w) != 0):
            raise GraphValidationError("weight matrix must have a zero diagonal")
        if not np.array_equal(w, w.T):
            u, v = np.argwhere(w != w.T)[0]
            raise GraphValidationError(
                f"weight matrix is not symmetric: w[{u},{v}]={w[u, v]!r} != w[{v},{u}]={w[v, u]!r}"
            )
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        n = w.shape[0]

        if self.vertex_labels is None:
            labels = tuple(str(d) for d in np.count_nonzero(w > 0, axis=1))
        else:
            labels = tuple(canonical_token(x) for x in self.vertex_labels)
        if len(labels) != n:
            raise GraphValidationError(
                f"expected {n} vertex labels, got {len(labels)}"
            )
        object.__setattr__(self, "vertex_labels", labels)

        if self.edge_labels is not None:
            elabels = {}
            for (u, v), tok in dict(self.edge_labels).items():
                u, v = int(u), int(v)
                if not (0 <= u < n and 0 <= v < n) or w[u, v] <= 0:
                    raise GraphValidationError(f"edge label on non-edge ({u}, {v})")
                elabels[_pair(u, v)] = canonical_token(tok)
            object.__setattr__(self, "edge_labels", elabels)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def has_edge_labels(self) -> bool:
        return self.edge_labels is not None

    def edges(self) -> list[tuple[int, int, float]]:
        """Edges as ``(u, v, w)`` with ``u < v``, in row-major order."""
        iu, iv = np.nonzero(np.triu(self.weights, k=1))
        return [(int(u), int(v), float(self.weights[u, v])) for u, v in zip(iu, iv)]

    @property
    def n_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.weights, k=1)))

    def degrees(self) -> np.ndarray:
        """Unweighted degree of every vertex."""
        return np.count_nonzero(self.weights > 0, axis=1)

    def edge_label(self, u: int, v: int):
        if self.edge_labels is None:
            return None
        return self.edge_labels.get(_pair(u, v))

    def replace(self, **changes) -> "WeightedGraph":
        fields = dict(
            weights=self.weights,
            vertex_labels=self.vertex_labels,
            edge_labels=self.edge_labels,
            graph_id=self.graph_id,
            class_label=self.class_label,
        )
        fields.update(changes)
        return WeightedGraph(**fields)

    def permute(self, order: Sequence[int]) -> "WeightedGraph":
        """Relabel vertices so that new vertex ``i`` is old vertex ``order[i]``."""
        order = np.asarray(order, dtype=np.intp)
        if sorted(order.tolist()) != list(range(self.n)):
            raise GraphValidationError("order is not a permutation of the vertices")
        inverse = np.empty_like(order)
        inverse[order] = np.arange(self.n)
        elabels = None
        if self.edge_labels is not None:
            elabels = {
                _pair(int(inverse[u]), int(inverse[v])): tok
                for (u, v), tok in self.edge_labels.items()
            }
        return self.replace(
            weights=self.weights[np.ix_(order, order)],
            vertex_labels=[self.vertex_labels[i] for i in order],
            edge_labels=elabels,
        )

    def subgraph(self, vertices: Sequence[int]) -> "WeightedGraph":
        """Induced subgraph on ``vertices`` (kept in the given order)."""
        vertices = [int(v) for v in vertices]
        position = {v: i for i, v in enumerate(vertices)}
        elabels = None
        if self.edge_labels is not None:
            elabels = {
                _pair(position[u], position[v]): tok
                for (u, v), tok in self.edge_labels.items()
                if u in position and v in position
            }
        return self.replace(
            weights=self.weights[np.ix_(vertices, vertices)],
            vertex_labels=[self.vertex_labels[v] for v in vertices],
            edge_labels=elabels,
        )

    def label_tokens(self) -> set:
        tokens = set(self.vertex_labels)
        if self.edge_labels:
            tokens.update(self.edge_labels.values())
        return tokens

    def __repr__(self):
        return (
            f"WeightedGraph(graph_id={self.graph_id!r}, n={self.n}, "
            f"n_edges={self.n_edges}, class_label={self.class_label!r})"
        )


@dataclass(frozen=True)
class GraphDataset:
    """Ordered collection of graphs with unique ids."""

    graphs: tuple
    name: str = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        graphs = tuple(self.graphs)
        ids = [g.graph_id for g in graphs]
        if len(set(ids)) != len(ids):
            seen, dup = set(), None
            for i in ids:
                if i in seen:
                    dup = i
                    break
                seen.add(i)
            raise GraphValidationError(f"duplicate graph id {dup!r}")
        object.__setattr__(self, "graphs", graphs)

    def __len__(self):
        return len(self.graphs)

    def __iter__(self):
        return iter(self.graphs)

    def __getitem__(self, i):
        return self.graphs[i]

    @property
    def graph_ids(self) -> list:
        return [g.graph_id for g in self.graphs]

    @property
    def class_labels(self) -> list:
        return [g.class_label for g in self.graphs]

    @property
    def label_alphabet(self) -> set:
        alphabet = set()
        for g in self.graphs:
            alphabet |= g.label_tokens()
        return alphabet


def degree_labels(g: WeightedGraph) -> WeightedGraph:
    """Replace vertex labels by unweighted degree tokens."""
    return g.replace(vertex_labels=[str(d) for d in g.degrees()])


def connected_parts(g: WeightedGraph) -> list[list[int]]:
    """Connected components under positive weights, largest first.

    Ties in size are broken by smallest member vertex.
    """
    _, comp = connected_components(g.weights > 0, directed=False)
    parts = {}
    for v, c in enumerate(comp):
        parts.setdefault(int(c), []).append(v)
    return sorted(parts.values(), key=lambda p: (-len(p), p[0]))


def largest_component(g: WeightedGraph) -> tuple[WeightedGraph, list[int]]:
    """Return the induced subgraph on the largest component and its vertices."""
    parts = connected_parts(g)
    if len(parts) == 1:
        return g, list(range(g.n))
    keep = parts[0]
    return g.subgraph(keep), keep


def require_connected(g: WeightedGraph) -> None:
    parts = connected_parts(g)
    if len(parts) > 1:
        shown = "; ".join(str(p) for p in parts[:5])
        more = "" if len(parts) <= 5 else f" (+{len(parts) - 5} more)"
        raise ConnectivityError(
            f"graph {g.graph_id!r} has {len(parts)} connected components: {shown}{more}",
            components=parts,
        )


def _rank(signatures: list) -> list[int]:
    table = {s: i for i, s in enumerate(sorted(set(signatures)))}
    return [table[s] for s in signatures]


def _refine(colors: list[int], nbrs: list[list[tuple]]) -> list[int]:
    while True:
        sigs = [
            (colors[v], tuple(sorted((w, el, colors[u]) for u, w, el in nbrs[v])))
            for v in range(len(colors))
        ]
        new = _rank(sigs)
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def canonical_order(g: WeightedGraph) -> list[int]:
    """Vertex order that does not depend on the input vertex numbering.

    Colour refinement over labels, exact edge weights and edge labels,
    followed by individualisation of the smallest ambiguous colour class
    until every vertex has its own colour. Graphs whose ambiguous classes
    are automorphism orbits (the usual case) map to the same permuted
    matrix no matter how their vertices were numbered.
    """
    n = g.n
    if len(set(g.vertex_labels)) == n:
        return sorted(range(n), key=lambda v: g.vertex_labels[v])

    w = g.weights
    nbrs = []
    for v in range(n):
        row = []
        for u in np.flatnonzero(w[v] > 0):
            el = g.edge_label(v, int(u)) or ""
            row.append((int(u), float(w[v, u]), el))
        nbrs.append(row)

    colors = _rank([
        (g.vertex_labels[v], tuple(sorted((wt, el) for _, wt, el in nbrs[v])))
        for v in range(n)
    ])
    colors = _refine(colors, nbrs)
    while len(set(colors)) < n:
        sizes = {}
        for c in colors:
            sizes[c] = sizes.get(c, 0) + 1
        smallest = min(s for s in sizes.values() if s > 1)
        target = min(c for c, s in sizes.items() if s == smallest)
        pick = colors.index(target)
        colors = _rank([
            (c, 0 if v == pick else (1 if c == target else 0)) for v, c in enumerate(colors)
        ])
        colors = _refine(colors, nbrs)
    return sorted(range(n), key=lambda v: colors[v])


def from_edges(
    n: int,
    edges: Iterable[tuple],
    vertex_labels=None,
    edge_labels=None,
    graph_id=None,
    class_label=None,
) -> WeightedGraph:
    """Build a graph from ``(u, v)`` or ``(u, v, w)`` tuples (weight 1 if omitted)."""
    w = np.zeros((n, n))
    for e in edges:
        u, v = int(e[0]), int(e[1])
        x = float(e[2]) if len(e) > 2 else 1.0
        w[u, v] = w[v, u] = x
    return WeightedGraph(
        w,
        vertex_labels=vertex_labels,
        edge_labels=edge_labels,
        graph_id=graph_id,
        class_label=class_label,
    )

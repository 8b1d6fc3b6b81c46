"""Weisfeiler-Lehman label refinement and directed-edge-label distributions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .walk import VisitDistribution

__all__ = [
    "LabelTable",
    "LabelDistribution",
    "wl_refine",
    "wl_iterations",
    "directed_edge_label",
    "label_distribution",
]


class LabelTable:
    """Exact injective map from WL signatures to short tokens.

    Tokens are handed out in first-seen order, so a table filled by a
    deterministic traversal is itself deterministic.
    """

    def __init__(self, name: str = "wl"):
        self.name = name
        self._codes = {}

    def __len__(self):
        return len(self._codes)

    def __contains__(self, signature):
        return signature in self._codes

    def compress(self, iteration: int, signature) -> str:
        key = (iteration, signature)
        code = self._codes.get(key)
        if code is None:
            code = f"{self.name}{iteration}.{len(self._codes)}"
            self._codes[key] = code
        return code

    def copy(self) -> "LabelTable":
        other = LabelTable(self.name)
        other._codes = dict(self._codes)
        return other


def wl_iterations(structure, h: int, table: LabelTable = None) -> list[tuple]:
    """Vertex labels after 0, 1, ..., h refinement rounds.

    Each round maps a vertex to the compressed pair (own label, sorted
    neighbour labels) using the adjacency of ``structure``.
    """
    if h < 0:
        raise ValueError(f"WL iteration count must be >= 0, got {h}")
    table = table if table is not None else LabelTable()
    nbrs = structure.neighbors()
    labels = tuple(structure.vertex_labels)
    out = [labels]
    for it in range(1, h + 1):
        labels = tuple(
            table.compress(it, (labels[v], tuple(sorted(labels[u] for u in nbrs[v]))))
            for v in range(structure.n)
        )
        out.append(labels)
    return out


def wl_refine(structure, h: int, table: LabelTable = None) -> tuple:
    """Vertex labels after ``h`` refinement rounds (``h = 0`` is the identity)."""
    return wl_iterations(structure, h, table)[-1]


def _encode(tokens) -> str:
    return "".join(f"{len(t)}:{t}" for t in tokens)


def directed_edge_label(tail_label: str, head_label: str, edge_label: str = None) -> str:
    """Ordered composite key; length-prefixed so token boundaries stay unambiguous."""
    if edge_label is None:
        return _encode((tail_label, head_label))
    return _encode((tail_label, edge_label, head_label))


@dataclass(frozen=True)
class LabelDistribution:
    """Probability mass per directed edge label; absent keys carry zero mass."""

    masses: dict
    h: int = 0
    label_space_id: str = None
    meta: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.masses)

    def total(self) -> float:
        return math.fsum(self.masses.values())

    def get(self, key) -> float:
        return self.masses.get(key, 0.0)


def label_distribution(
    vd: VisitDistribution,
    structure,
    labels,
    h: int = 0,
    label_space_id: str = None,
    use_edge_labels: bool = True,
) -> LabelDistribution:
    """Aggregate arc visit probabilities by directed edge label.

    Per-label sums use :func:`math.fsum`, so masses do not depend on the
    order in which arcs are enumerated.
    """
    groups = {}
    edge_labelled = use_edge_labels and structure.edge_labels is not None
    for (u, v), p in zip(vd.arcs, vd.p.tolist()):
        el = structure.edge_label(u, v) if edge_labelled else None
        if edge_labelled and el is None:
            el = ""
        key = directed_edge_label(labels[u], labels[v], el)
        groups.setdefault(key, []).append(p)
    masses = {k: math.fsum(groups[k]) for k in sorted(groups)}
    return LabelDistribution(masses=masses, h=h, label_space_id=label_space_id)

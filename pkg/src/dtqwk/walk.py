"""Grover-coined discrete-time quantum walk on the arcs of a sparse graph.

The walk state lives on directed edges ("arcs"). Arc ``(u, v)`` means the
walker sits at ``v`` having arrived from ``u``. All operators are real and
stored as sparse matrices indexed by the canonical arc order of a
:class:`DirectedEdgeSpace`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .sparsify import SparseGraph

logger = logging.getLogger(__name__)

__all__ = [
    "DirectedEdgeSpace",
    "WalkSystem",
    "VisitDistribution",
    "build_edge_space",
    "grover_operator",
    "weighted_pf_operator",
    "perron_frobenius_operator",
    "positive_support",
    "initial_state",
    "build_walk_system",
    "visit_distribution",
    "DEFAULT_HORIZON",
]

DEFAULT_HORIZON = 25


@dataclass(frozen=True)
class DirectedEdgeSpace:
    """Arcs of a graph in canonical ``(tail, head)`` order.

    ``adjacency_pairs`` are the non-backtracking transitions
    ``((u, v), (v, w))`` with ``w != u``, given as arc index pairs.
    """

    arcs: tuple
    index: dict
    adjacency_pairs: tuple
    n_vertices: int

    def __len__(self):
        return len(self.arcs)

    def reverse(self, a: int) -> int:
        u, v = self.arcs[a]
        return self.index[(v, u)]


def build_edge_space(structure: SparseGraph) -> DirectedEdgeSpace:
    arcs = []
    for u, v, _ in structure.edges:
        arcs.append((u, v))
        arcs.append((v, u))
    arcs.sort()
    index = {a: i for i, a in enumerate(arcs)}
    nbrs = structure.neighbors()
    pairs = []
    for i, (u, v) in enumerate(arcs):
        for x in nbrs[v]:
            if x != u:
                pairs.append((i, index[(v, x)]))
    return DirectedEdgeSpace(
        arcs=tuple(arcs), index=index, adjacency_pairs=tuple(pairs),
        n_vertices=structure.n,
    )


def _transitions(space: DirectedEdgeSpace, nbrs):
    """Yield ``(source, dest, u, v, x)`` for every move ``(u,v) -> (v,x)``, reversals included."""
    for i, (u, v) in enumerate(space.arcs):
        for x in nbrs[v]:
            yield i, space.index[(v, x)], u, v, x


def grover_operator(space: DirectedEdgeSpace, structure: SparseGraph) -> sp.csr_matrix:
    """Real orthogonal evolution operator with ``state_{t+1} = U @ state_t``.

    Column = source arc, row = destination arc. The move ``(u,v) -> (v,x)``
    has amplitude ``2/d_v - [x == u]`` with ``d_v`` the unweighted degree of
    the shared vertex.
    """
    nbrs = structure.neighbors()
    deg = [len(x) for x in nbrs]
    rows, cols, vals = [], [], []
    for src, dst, u, v, x in _transitions(space, nbrs):
        amp = 2.0 / deg[v] - (1.0 if x == u else 0.0)
        if amp != 0.0:
            rows.append(dst)
            cols.append(src)
            vals.append(amp)
    m = len(space)
    return sp.csr_matrix((vals, (rows, cols)), shape=(m, m))


def weighted_pf_operator(space: DirectedEdgeSpace, structure: SparseGraph) -> sp.csr_matrix:
    """Weighted Perron-Frobenius operator over arcs.

    Entry ``[(u,v), (v,x)]`` is ``w(u,v) + w(v,x)``; every other entry is
    zero. Reversal pairs ``(u,v), (v,u)`` are included so that leaf arcs
    keep a nonzero row.
    """
    nbrs = structure.neighbors()
    W = {}
    for u, v, w in structure.edges:
        W[(u, v)] = W[(v, u)] = w
    rows, cols, vals = [], [], []
    for src, dst, u, v, x in _transitions(space, nbrs):
        rows.append(src)
        cols.append(dst)
        vals.append(W[(u, v)] + W[(v, x)])
    m = len(space)
    return sp.csr_matrix((vals, (rows, cols)), shape=(m, m))


def perron_frobenius_operator(
    space: DirectedEdgeSpace, leaf_reversals: bool = True
) -> sp.csr_matrix:
    """0/1 adjacency of the directed line graph (row = from, column = to).

    With ``leaf_reversals`` the move ``(u,v) -> (v,u)`` is added wherever
    ``v`` has degree one, the only place a Grover walk reflects with
    positive amplitude.
    """
    m = len(space)
    rows = [a for a, _ in space.adjacency_pairs]
    cols = [b for _, b in space.adjacency_pairs]
    if leaf_reversals:
        out_degree = np.zeros(space.n_vertices, dtype=np.int64)
        for u, _ in space.arcs:
            out_degree[u] += 1
        for i, (u, v) in enumerate(space.arcs):
            if out_degree[v] == 1:
                rows.append(i)
                cols.append(space.index[(v, u)])
    return sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(m, m))


def positive_support(M):
    """Binary matrix with ones where ``M > 0``; keeps sparse inputs sparse."""
    if sp.issparse(M):
        M = sp.csr_matrix(M)
        out = (M > 0).astype(np.int8)
        out.eliminate_zeros()
        return out
    return (np.asarray(M) > 0).astype(np.int8)


def initial_state(space: DirectedEdgeSpace, TW) -> np.ndarray:
    """Nonnegative unit vector built from the in- plus out-mass of each arc.

    ``psi0[a]**2 = (sum_b TW[a,b] + TW[b,a]) / sum_{a,b} (TW[a,b] + TW[b,a])``
    """
    TW = sp.csr_matrix(TW)
    mass = np.asarray(TW.sum(axis=1)).ravel() + np.asarray(TW.sum(axis=0)).ravel()
    total = mass.sum()
    m = len(space)
    if not total > 0:
        logger.warning("weighted Perron-Frobenius operator is zero; using a uniform initial state")
        return np.full(m, 1.0 / np.sqrt(m))
    return np.sqrt(mass / total)


@dataclass(frozen=True)
class WalkSystem:
    """Arc space, evolution operator, weighted operator and start state."""

    space: DirectedEdgeSpace
    U: sp.csr_matrix
    TW: sp.csr_matrix
    psi0: np.ndarray


def build_walk_system(structure: SparseGraph) -> WalkSystem:
    space = build_edge_space(structure)
    TW = weighted_pf_operator(space, structure)
    return WalkSystem(
        space=space,
        U=grover_operator(space, structure),
        TW=TW,
        psi0=initial_state(space, TW),
    )


@dataclass(frozen=True)
class VisitDistribution:
    """Time-averaged probability of finding the walk on each arc."""

    arcs: tuple
    p: np.ndarray
    horizon: int

    def as_dict(self) -> dict:
        return dict(zip(self.arcs, self.p.tolist()))


def visit_distribution(system: WalkSystem, horizon: int = DEFAULT_HORIZON) -> VisitDistribution:
    """Average of ``|U^t psi0|**2`` over ``t = 0..horizon``.

    This is the diagonal of the time-averaged density matrix; the matrix
    itself is never formed.
    """
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    psi = system.psi0.copy()
    acc = psi * psi
    for _ in range(horizon):
        psi = system.U @ psi
        acc += psi * psi
    return VisitDistribution(arcs=system.space.arcs, p=acc / (horizon + 1), horizon=horizon)

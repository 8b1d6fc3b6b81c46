"""Commute times from the unnormalised Laplacian spectrum."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .exceptions import ConnectivityError, DegenerateGraphError, IntegrityError
from .graph import WeightedGraph, connected_parts

__all__ = ["CommuteTimeResult", "laplacian", "commute_time_matrix", "modified_commute_matrix"]

# Eigenvalues at or below this fraction of the largest one count as zero.
ZERO_EIGENVALUE_RTOL = 1e-9


@dataclass(frozen=True)
class CommuteTimeResult:
    """Commute-time matrix together with the spectrum it was built from.

    Attributes
    ----------
    C : ndarray of shape (n, n)
        Symmetric commute times, zero diagonal.
    eigenvalues : ndarray of shape (n,)
        Laplacian eigenvalues in ascending order.
    eigenvectors : ndarray of shape (n, n)
        Orthonormal eigenvectors as columns, matching ``eigenvalues``.
    volume : float
        Sum of weighted degrees.
    """

    C: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    volume: float

    @property
    def n(self) -> int:
        return self.C.shape[0]


def laplacian(weights) -> np.ndarray:
    A = np.asarray(weights, dtype=np.float64)
    return np.diag(A.sum(axis=1)) - A


def commute_time_matrix(g: WeightedGraph) -> CommuteTimeResult:
    """Commute time between every vertex pair.

    ``C(u, v) = vol * sum_{j>=2} (phi_j(u) - phi_j(v))**2 / lambda_j`` where
    ``vol`` is the total weighted degree, i.e. ``vol`` times the effective
    resistance between ``u`` and ``v``.

    Raises
    ------
    DegenerateGraphError
        If the graph has fewer than two vertices.
    ConnectivityError
        If the graph is disconnected, either by component count or because
        a second eigenvalue falls below the zero threshold.
    """
    if g.n < 2:
        raise DegenerateGraphError(f"graph {g.graph_id!r} has {g.n} vertex; need at least 2")
    parts = connected_parts(g)
    if len(parts) > 1:
        raise ConnectivityError(
            f"graph {g.graph_id!r} is disconnected into {len(parts)} components: "
            + "; ".join(str(p) for p in parts[:5]),
            components=parts,
        )

    A = g.weights
    volume = float(A.sum())
    lam, phi = eigh(laplacian(A))
    cutoff = ZERO_EIGENVALUE_RTOL * lam[-1]
    if lam[1] <= cutoff:
        raise ConnectivityError(
            f"graph {g.graph_id!r}: second Laplacian eigenvalue {lam[1]:.3e} is numerically zero",
            components=parts,
        )
    # Pseudo-inverse of L restricted to the non-trivial eigenpairs.
    scaled = phi[:, 1:] / np.sqrt(lam[1:])
    L_plus = scaled @ scaled.T
    d = np.diag(L_plus)
    C = volume * (d[:, None] + d[None, :] - 2.0 * L_plus)
    C = 0.5 * (C + C.T)
    np.fill_diagonal(C, 0.0)
    np.maximum(C, 0.0, out=C)
    return CommuteTimeResult(C=C, eigenvalues=lam, eigenvectors=phi, volume=volume)


def modified_commute_matrix(g: WeightedGraph, ct: CommuteTimeResult) -> np.ndarray:
    """Elementwise product of commute times and original weights."""
    if ct.C.shape != g.weights.shape:
        raise IntegrityError(
            f"commute matrix shape {ct.C.shape} does not match graph of {g.n} vertices"
        )
    return ct.C * g.weights

"""Input checks shared by the estimators and the CLI."""

from __future__ import annotations

import numbers

import numpy as np

from .graph import GraphDataset, WeightedGraph


def check_graphs(X) -> list:
    """Return ``X`` as a list of :class:`WeightedGraph`.

    Accepts a :class:`GraphDataset` or any iterable of graphs.
    """
    if isinstance(X, WeightedGraph):
        raise TypeError("expected a collection of graphs, got a single WeightedGraph")
    if isinstance(X, GraphDataset):
        graphs = list(X.graphs)
    else:
        try:
            graphs = list(X)
        except TypeError:
            raise TypeError(f"expected a collection of graphs, got {type(X).__name__}") from None
    if not graphs:
        raise ValueError("empty graph collection")
    for i, g in enumerate(graphs):
        if not isinstance(g, WeightedGraph):
            raise TypeError(f"item {i} is {type(g).__name__}, not WeightedGraph")
    return graphs


def check_horizon(horizon) -> int:
    if not isinstance(horizon, numbers.Integral) or horizon < 0:
        raise ValueError(f"horizon must be a nonnegative integer, got {horizon!r}")
    return int(horizon)


def check_wl_range(wl_range) -> list[int]:
    """Normalise ``h_max`` or ``(h_min, h_max)`` to the list of iterations."""
    if isinstance(wl_range, numbers.Integral):
        lo, hi = 0, int(wl_range)
    else:
        try:
            lo, hi = (int(x) for x in wl_range)
        except (TypeError, ValueError):
            raise ValueError(f"WL range must be h_max or (h_min, h_max), got {wl_range!r}") from None
    if not 0 <= lo <= hi:
        raise ValueError(f"WL range needs 0 <= h_min <= h_max, got ({lo}, {hi})")
    return list(range(lo, hi + 1))


def check_gram(K, symmetric: bool = True) -> np.ndarray:
    K = np.asarray(getattr(K, "values", K), dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError(f"Gram matrix must be square, got shape {K.shape}")
    if not np.all(np.isfinite(K)):
        raise ValueError("Gram matrix has non-finite entries")
    if symmetric and not np.allclose(K, K.T, rtol=0, atol=1e-12 * max(1.0, np.abs(K).max())):
        raise ValueError("Gram matrix is not symmetric")
    return K

"""Entropy, Jensen-Shannon divergence and the two label-distribution kernels."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.special import entr
from sklearn.model_selection import StratifiedKFold

from .exceptions import DistributionError
from .labels import LabelDistribution

__all__ = [
    "GramMatrix",
    "shannon_entropy",
    "js_divergence",
    "k_dp",
    "k_js",
    "feature_matrix",
    "pairwise_kernel",
    "gram_from_features",
    "kernel_1nn_cv",
    "KERNELS",
]

KERNELS = ("dp", "js")
NORMALIZATION_TOL = 1e-8
_LN2 = math.log(2.0)


def _masses(P) -> dict:
    if isinstance(P, LabelDistribution):
        return P.masses
    if isinstance(P, Mapping):
        return dict(P)
    return dict(enumerate(np.asarray(P, dtype=np.float64).ravel().tolist()))


def _check(masses: dict) -> None:
    values = list(masses.values())
    if any(p < 0 for p in values):
        raise DistributionError("distribution has negative mass")
    total = math.fsum(values)
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise DistributionError(f"distribution sums to {total!r}, expected 1")


def shannon_entropy(P) -> float:
    """Entropy in bits, with ``0 log 0 = 0``."""
    m = _masses(P)
    _check(m)
    return math.fsum(-p * math.log2(p) for p in m.values() if p > 0)


def js_divergence(P, Q) -> float:
    """Jensen-Shannon divergence in bits; lies in ``[0, 1]``.

    Keys missing from either side have zero mass there.
    """
    p, q = _masses(P), _masses(Q)
    _check(p)
    _check(q)
    keys = sorted(set(p) | set(q), key=str)
    mix = {k: (p.get(k, 0.0) + q.get(k, 0.0)) / 2.0 for k in keys}
    d = shannon_entropy(mix) - shannon_entropy(p) / 2.0 - shannon_entropy(q) / 2.0
    return min(max(d, 0.0), 1.0)


def k_dp(P, Q) -> float:
    """Dot product over shared keys."""
    p, q = _masses(P), _masses(Q)
    if len(q) < len(p):
        p, q = q, p
    return math.fsum(x * q[k] for k, x in p.items() if k in q)


def k_js(P, Q) -> float:
    """``exp(-D_JS(P, Q))``; lies in ``[exp(-1), 1]``."""
    return math.exp(-js_divergence(P, Q))


def feature_matrix(distributions: Sequence[LabelDistribution], keys=None):
    """Sparse ``(N, m)`` CSR matrix of masses over the sorted union of keys.

    Keys outside ``keys`` are ignored; zero masses are not stored.
    """
    if keys is None:
        keys = sorted(set().union(*(d.masses for d in distributions)))
    col = {k: j for j, k in enumerate(keys)}
    rows, cols, vals = [], [], []
    for i, d in enumerate(distributions):
        for k, x in d.masses.items():
            j = col.get(k)
            if j is not None and x != 0.0:
                rows.append(i)
                cols.append(j)
                vals.append(x)
    F = sp.csr_matrix((vals, (rows, cols)), shape=(len(distributions), len(keys)))
    return F, keys


def _eta(x: np.ndarray) -> np.ndarray:
    return entr(x) / _LN2


def _shared_term(p: np.ndarray, q: np.ndarray, kind: str) -> np.ndarray:
    if kind == "dp":
        return p * q
    # JS divergence is 1 minus the sum of this over shared keys; keys held
    # by one side only contribute through the normalisation.
    m = (p + q) / 2.0
    return m - _eta(m) + (_eta(p) + _eta(q)) / 2.0


def pairwise_kernel(F, kind: str, G=None) -> np.ndarray:
    """Kernel values between rows of ``F`` and rows of ``G`` (default ``F``).

    Rows are distributions over a common key order; dense arrays and
    sparse matrices are both accepted. Only keys held by both rows are
    visited, in ascending column order for every pair, so each cell is a
    pure function of its two rows: exactly symmetric, and unchanged by the
    position of either row in its matrix.
    """
    if kind not in KERNELS:
        raise ValueError(f"unknown kernel {kind!r}; expected one of {KERNELS}")
    Fc = sp.csc_matrix(F)
    Gc = Fc if G is None else sp.csc_matrix(G)
    if Fc.shape[1] != Gc.shape[1]:
        raise ValueError(f"key counts differ: {Fc.shape[1]} vs {Gc.shape[1]}")
    for M in (Fc, Gc):
        M.eliminate_zeros()
        M.sort_indices()
    S = np.zeros((Fc.shape[0], Gc.shape[0]))
    for k in range(Fc.shape[1]):
        a0, a1 = Fc.indptr[k], Fc.indptr[k + 1]
        b0, b1 = Gc.indptr[k], Gc.indptr[k + 1]
        if a0 == a1 or b0 == b1:
            continue
        rf, vf = Fc.indices[a0:a1], Fc.data[a0:a1]
        rg, vg = Gc.indices[b0:b1], Gc.data[b0:b1]
        S[np.ix_(rf, rg)] += _shared_term(vf[:, None], vg[None, :], kind)
    if kind == "dp":
        return S
    return np.exp(-np.clip(1.0 - S, 0.0, 1.0))


@dataclass
class GramMatrix:
    """Kernel values over a graph collection plus provenance."""

    values: np.ndarray
    graph_ids: list
    meta: dict = field(default_factory=dict)

    @property
    def shape(self):
        return self.values.shape

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.values)

    def psd_ratio(self) -> float:
        """Smallest eigenvalue divided by the largest."""
        lam = self.eigenvalues()
        return float(lam[0] / lam[-1]) if lam[-1] > 0 else float(lam[0])


def gram_from_features(
    features: Sequence[Mapping[int, LabelDistribution]],
    kind: str,
    h_values: Sequence[int],
    graph_ids=None,
    meta: dict = None,
) -> GramMatrix:
    """Sum of the per-``h`` kernel matrices over ``h_values``.

    A sum of positive semidefinite kernels stays positive semidefinite.
    """
    h_values = list(h_values)
    if not h_values:
        raise ValueError("need at least one WL iteration")
    total = None
    for h in h_values:
        F, _ = feature_matrix([f[h] for f in features])
        K = pairwise_kernel(F, kind)
        total = K if total is None else total + K
    values = total
    if graph_ids is None:
        graph_ids = list(range(len(features)))
    return GramMatrix(values=values, graph_ids=list(graph_ids), meta=dict(meta or {}))


def kernel_1nn_cv(gram, labels, folds: int = 10, seed: int = 0) -> dict:
    """Stratified k-fold accuracy of 1-nearest-neighbour in kernel distance.

    Distance is ``k(a,a) + k(b,b) - 2 k(a,b)``; ties go to the lowest index.

    Returns
    -------
    dict
        ``fold_accuracies``, ``mean`` and ``stderr`` (standard error of the
        fold means).
    """
    K = np.asarray(getattr(gram, "values", gram), dtype=np.float64)
    y = np.asarray(labels)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ValueError(f"Gram matrix must be square, got {K.shape}")
    if y.shape[0] != K.shape[0]:
        raise ValueError(f"{y.shape[0]} labels for a {K.shape[0]}x{K.shape[0]} Gram matrix")
    if folds < 2:
        raise ValueError("need at least 2 folds")
    _, counts = np.unique(y, return_counts=True)
    if folds > counts.min():
        raise ValueError(
            f"{folds} folds but the smallest class has only {counts.min()} members"
        )
    diag = np.diag(K)
    accs = []
    splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    for train, test in splitter.split(np.zeros(len(y)), y):
        dist = diag[test][:, None] + diag[train][None, :] - 2.0 * K[np.ix_(test, train)]
        pred = y[train][np.argmin(dist, axis=1)]
        accs.append(float(np.mean(pred == y[test])))
    accs = np.array(accs)
    return {
        "fold_accuracies": accs.tolist(),
        "mean": float(accs.mean()),
        "stderr": float(accs.std(ddof=1) / np.sqrt(len(accs))),
    }

"""Kernel PCA embeddings and entropy time series."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed
from scipy.linalg import eigh
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .kernels import shannon_entropy
from .labels import label_distribution
from .pipeline import walk_features
from .validation import check_gram, check_graphs, check_horizon
from .walk import DEFAULT_HORIZON

__all__ = ["Embedding", "center_gram", "kpca", "KernelPCAEmbedding", "entropy_series"]


def center_gram(K) -> np.ndarray:
    """Double centring ``K - 1K/N - K1/N + 1K1/N^2``."""
    K = np.asarray(K, dtype=np.float64)
    row = K.mean(axis=0)
    return K - row[None, :] - K.mean(axis=1)[:, None] + K.mean()


@dataclass
class Embedding:
    """Kernel PCA coordinates.

    ``explained`` holds the leading eigenvalues of the centred Gram matrix
    in descending order; ``clamped`` is the magnitude of the most negative
    eigenvalue that was set to zero.
    """

    coordinates: np.ndarray
    explained: np.ndarray
    graph_ids: list
    clamped: float = 0.0


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _spectrum(Kc: np.ndarray):
    lam, vec = eigh(Kc)
    lam, vec = lam[::-1], vec[:, ::-1]
    clamped = float(max(0.0, -lam.min()))
    return np.clip(lam, 0.0, None), _fix_signs(vec), clamped


def kpca(gram, d: int = 3) -> Embedding:
    """Embed a Gram matrix into ``d`` principal components.

    Coordinates are the leading eigenvectors of the centred Gram matrix
    scaled by the square roots of their (clamped nonnegative) eigenvalues.
    Each column is signed so that its largest-magnitude entry is positive.
    """
    K = check_gram(gram)
    N = K.shape[0]
    if not 1 <= d <= N:
        raise ValueError(f"need 1 <= dims <= {N}, got {d}")
    lam, vec, clamped = _spectrum(center_gram(K))
    coords = vec[:, :d] * np.sqrt(lam[:d])
    ids = list(getattr(gram, "graph_ids", range(N)))
    return Embedding(coordinates=coords, explained=lam[:d], graph_ids=ids, clamped=clamped)


class KernelPCAEmbedding(TransformerMixin, BaseEstimator):
    """Kernel PCA on a precomputed Gram matrix.

    ``fit`` takes the ``(N, N)`` training Gram matrix; ``transform`` takes
    kernel values ``(M, N)`` between new items and the training items.
    """

    def __init__(self, n_components=3):
        self.n_components = n_components

    def fit(self, K, y=None):
        K = check_gram(K)
        if not 1 <= self.n_components <= K.shape[0]:
            raise ValueError(f"need 1 <= n_components <= {K.shape[0]}, got {self.n_components}")
        lam, vec, clamped = _spectrum(center_gram(K))
        d = self.n_components
        self.eigenvalues_ = lam[:d]
        self.eigenvectors_ = vec[:, :d]
        self.clamped_ = clamped
        self.train_col_mean_ = K.mean(axis=0)
        self.train_mean_ = K.mean()
        return self

    def transform(self, K):
        check_is_fitted(self, "eigenvectors_")
        K = np.atleast_2d(np.asarray(K, dtype=np.float64))
        Kc = (K - self.train_col_mean_[None, :] - K.mean(axis=1)[:, None]
              + self.train_mean_)
        nonzero = self.eigenvalues_ > 0
        scale = np.zeros_like(self.eigenvalues_)
        scale[nonzero] = 1.0 / np.sqrt(self.eigenvalues_[nonzero])
        return Kc @ (self.eigenvectors_ * scale)

    def fit_transform(self, K, y=None):
        self.fit(K)
        return self.eigenvectors_ * np.sqrt(self.eigenvalues_)


def _graph_entropy(g, horizon, density_threshold):
    w = walk_features(g, horizon, density_threshold)
    dist = label_distribution(w.visits, w.structure, w.structure.vertex_labels)
    return shannon_entropy(dist)


def entropy_series(graphs, horizon: int = DEFAULT_HORIZON, timestamps=None,
                   density_threshold: float = 1.5, n_jobs=None) -> list[tuple]:
    """Shannon entropy (bits) of each graph's directed-edge-label distribution.

    ``timestamps`` default to the graph ids and must be strictly increasing.
    """
    graphs = check_graphs(graphs)
    horizon = check_horizon(horizon)
    stamps = list(timestamps) if timestamps is not None else [g.graph_id for g in graphs]
    if len(stamps) != len(graphs):
        raise ValueError(f"{len(stamps)} timestamps for {len(graphs)} graphs")
    if any(not a < b for a, b in zip(stamps, stamps[1:])):
        raise ValueError("timestamps must be strictly increasing")
    if n_jobs in (None, 1):
        values = [_graph_entropy(g, horizon, density_threshold) for g in graphs]
    else:
        values = Parallel(n_jobs=n_jobs)(
            delayed(_graph_entropy)(g, horizon, density_threshold) for g in graphs
        )
    return list(zip(stamps, values))

"""Per-graph feature extraction and the kernel estimator."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import DegenerateGraphError, PipelineError
from .graph import WeightedGraph, canonical_order, connected_parts, largest_component
from .kernels import KERNELS, GramMatrix, feature_matrix, gram_from_features, pairwise_kernel
from .labels import LabelDistribution, LabelTable, label_distribution, wl_iterations
from .sparsify import DENSITY_THRESHOLD, SparseGraph, sparsification_policy
from .validation import check_graphs, check_horizon, check_wl_range
from .walk import DEFAULT_HORIZON, VisitDistribution, build_walk_system, visit_distribution

logger = logging.getLogger(__name__)

__all__ = ["WalkFeatures", "walk_features", "label_features", "QuantumWalkKernel", "gram"]


@dataclass
class WalkFeatures:
    """Everything computed for one graph before label aggregation."""

    graph_id: object
    structure: SparseGraph
    visits: VisitDistribution
    order: list
    meta: dict = field(default_factory=dict)


def walk_features(
    g: WeightedGraph,
    horizon: int = DEFAULT_HORIZON,
    density_threshold: float = DENSITY_THRESHOLD,
) -> WalkFeatures:
    """Canonicalise, sparsify and run the walk on one graph.

    Disconnected graphs are reduced to their largest component; the
    reduction is recorded in ``meta``.
    """
    order = canonical_order(g)
    gc = g.permute(order)
    meta = {"n_vertices": g.n, "n_edges": g.n_edges}
    if len(connected_parts(gc)) > 1:
        gc, kept = largest_component(gc)
        meta["reduced_to_component"] = [order[v] for v in kept]
        logger.info("graph %r: using largest component (%d of %d vertices)",
                    g.graph_id, gc.n, g.n)
    if gc.n < 2:
        raise DegenerateGraphError(f"graph {g.graph_id!r} has no edges to walk on")
    structure = sparsification_policy(gc, density_threshold)
    meta.update(structure.meta)
    visits = visit_distribution(build_walk_system(structure), horizon)
    return WalkFeatures(g.graph_id, structure, visits, order, meta)


def _safe_walk(g, horizon, threshold):
    try:
        return walk_features(g, horizon, threshold)
    except Exception as exc:  # reported with the graph id by the caller
        return exc


def _run_walks(graphs, horizon, threshold, n_jobs):
    if n_jobs in (None, 1) or len(graphs) < 2:
        results = [_safe_walk(g, horizon, threshold) for g in graphs]
    else:
        results = Parallel(n_jobs=n_jobs)(
            delayed(_safe_walk)(g, horizon, threshold) for g in graphs
        )
    for g, r in zip(graphs, results):
        if isinstance(r, Exception):
            raise PipelineError(g.graph_id, r) from r
    return results


def label_features(
    walks, h_values, table: LabelTable, use_edge_labels: bool = True
) -> list[dict]:
    """Label distributions per WL iteration, filling ``table`` in input order."""
    h_max = max(h_values)
    out = []
    for w in walks:
        per_h = wl_iterations(w.structure, h_max, table)
        out.append({
            h: label_distribution(w.visits, w.structure, per_h[h], h=h,
                                  label_space_id=table.name,
                                  use_edge_labels=use_edge_labels)
            for h in h_values
        })
    return out


class QuantumWalkKernel(TransformerMixin, BaseEstimator):
    """Graph kernel from time-averaged quantum walk visits on commute-time trees.

    ``fit`` takes a collection of :class:`~dtqwk.graph.WeightedGraph`;
    ``transform`` returns kernel values between new graphs (rows) and the
    fitted graphs (columns), and ``fit_transform`` the Gram matrix of the
    fitted collection.

    Parameters
    ----------
    kernel : {"js", "dp"}, default="js"
        ``"js"`` is ``exp(-JS divergence)``, ``"dp"`` the dot product of the
        label distributions.
    horizon : int, default=25
        Last time step of the walk average.
    wl_range : int or (int, int), default=(0, 3)
        WL iterations whose kernels are summed.
    density_threshold : float, default=1.5
        Graphs with more edges per vertex than this are reduced to their
        commute-time spanning tree.
    use_edge_labels : bool, default=True
        Include original edge labels in the directed edge labels.
    n_jobs : int, default=None
        Workers for the per-graph walk stage (joblib semantics).

    Attributes
    ----------
    walks_ : list of WalkFeatures
    features_ : list of dict
        ``{h: LabelDistribution}`` per fitted graph.
    table_ : LabelTable
        WL token table shared by all fitted graphs.
    """

    def __init__(
        self,
        kernel="js",
        horizon=DEFAULT_HORIZON,
        wl_range=(0, 3),
        density_threshold=DENSITY_THRESHOLD,
        use_edge_labels=True,
        n_jobs=None,
    ):
        self.kernel = kernel
        self.horizon = horizon
        self.wl_range = wl_range
        self.density_threshold = density_threshold
        self.use_edge_labels = use_edge_labels
        self.n_jobs = n_jobs

    def _check_params(self):
        if self.kernel not in KERNELS:
            raise ValueError(f"kernel must be one of {KERNELS}, got {self.kernel!r}")
        check_horizon(self.horizon)
        return check_wl_range(self.wl_range)

    def _features(self, graphs, table):
        walks = _run_walks(graphs, self.horizon, self.density_threshold, self.n_jobs)
        return walks, label_features(walks, self.h_values_, table, self.use_edge_labels)

    def fit(self, X, y=None):
        self.h_values_ = self._check_params()
        graphs = check_graphs(X)
        self.table_ = LabelTable()
        self.walks_, self.features_ = self._features(graphs, self.table_)
        self.graph_ids_ = [g.graph_id for g in graphs]
        return self

    def transform(self, X):
        check_is_fitted(self, "features_")
        graphs = check_graphs(X)
        _, new = self._features(graphs, self.table_.copy())
        total = np.zeros((len(new), len(self.features_)))
        for h in self.h_values_:
            keys = sorted(set().union(*(f[h].masses for f in self.features_ + new)))
            F_fit, _ = feature_matrix([f[h] for f in self.features_], keys)
            F_new, _ = feature_matrix([f[h] for f in new], keys)
            total += pairwise_kernel(F_new, self.kernel, F_fit)
        return total

    def gram_matrix(self) -> GramMatrix:
        """Gram matrix of the fitted collection with provenance metadata."""
        check_is_fitted(self, "features_")
        meta = {
            "kernel": self.kernel,
            "horizon": self.horizon,
            "wl_range": [self.h_values_[0], self.h_values_[-1]],
            "density_threshold": self.density_threshold,
            "branches": {
                str(w.graph_id): w.meta.get("branch") for w in self.walks_
            },
            "reduced": {
                str(w.graph_id): len(w.meta["reduced_to_component"])
                for w in self.walks_ if "reduced_to_component" in w.meta
            },
        }
        return gram_from_features(
            self.features_, self.kernel, self.h_values_, self.graph_ids_, meta
        )

    def fit_transform(self, X, y=None):
        return self.fit(X).gram_matrix().values

    def distributions(self, h: int = None) -> list[LabelDistribution]:
        check_is_fitted(self, "features_")
        h = self.h_values_[0] if h is None else h
        return [f[h] for f in self.features_]


def gram(dataset, kernel="js", horizon=DEFAULT_HORIZON, wl_range=(0, 3), **kwargs) -> GramMatrix:
    """Gram matrix of a graph collection in one call."""
    est = QuantumWalkKernel(kernel=kernel, horizon=horizon, wl_range=wl_range, **kwargs)
    return est.fit(dataset).gram_matrix()

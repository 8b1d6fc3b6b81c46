"""Readers and writers for graph collections and kernel matrices.

Supported layouts:

* TU benchmark directories (``DS_A.txt``, ``DS_graph_indicator.txt`` and the
  optional ``DS_node_labels.txt``, ``DS_edge_labels.txt``,
  ``DS_graph_labels.txt``), 1-based indices.
* A JSON graph schema with 0-based indices and dense row-major weights::

      {"id": ..., "class": ..., "n": 3,
       "weights": [[0, 1, 0], [1, 0, 2], [0, 2, 0]],
       "vertex_labels": ["C", "C", "O"],
       "edge_labels": [[0, 1, "1"], [1, 2, "2"]]}

  A file holds one such object, a list of them, or ``{"graphs": [...]}``.
* Gram matrices as CSV (header row of graph ids) and in the precomputed
  kernel text format read by libsvm-style C-SVM tools.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path

import numpy as np

from .exceptions import GraphFormatError, IntegrityError
from .graph import GraphDataset, WeightedGraph, canonical_token

__all__ = [
    "load_tu_dataset",
    "load_weighted_json",
    "save_weighted_json",
    "graph_to_dict",
    "graph_from_dict",
    "load_dataset",
    "write_gram_csv",
    "read_gram_csv",
    "write_precomputed_kernel",
    "read_precomputed_kernel",
    "read_manifest",
    "write_manifest",
    "MANIFEST_NAME",
]

MANIFEST_NAME = "manifest.csv"


def _read_int_column(path: Path) -> np.ndarray:
    try:
        with open(path) as fh:
            rows = [line.strip() for line in fh if line.strip()]
        return np.array([int(r.split(",")[0]) for r in rows], dtype=np.int64)
    except ValueError as exc:
        raise GraphFormatError(f"{path.name}: {exc}") from exc


def _find_prefix(root: Path) -> str:
    hits = sorted(root.glob("*_graph_indicator.txt"))
    if not hits:
        raise GraphFormatError(f"{root}: no *_graph_indicator.txt file")
    if len(hits) > 1:
        raise GraphFormatError(f"{root}: several datasets in one directory")
    return hits[0].name[: -len("_graph_indicator.txt")]


def load_tu_dataset(path) -> GraphDataset:
    """Load a TU-format benchmark dataset directory.

    Every edge gets weight 1.0. Missing node labels fall back to degree
    tokens. Graph ids are the 1-based ids of the indicator file.
    """
    root = Path(path)
    if not root.is_dir():
        raise GraphFormatError(f"{root}: not a directory")
    prefix = _find_prefix(root)

    def part(suffix):
        return root / f"{prefix}_{suffix}.txt"

    indicator = _read_int_column(part("graph_indicator"))
    if indicator.size == 0:
        raise GraphFormatError(f"{part('graph_indicator').name} is empty")
    if not part("A").exists():
        raise GraphFormatError(f"{root}: missing {prefix}_A.txt")

    try:
        with open(part("A")) as fh:
            pairs = [
                tuple(int(x) for x in line.split(","))
                for line in fh
                if line.strip()
            ]
    except ValueError as exc:
        raise GraphFormatError(f"{prefix}_A.txt: {exc}") from exc
    if any(len(p) != 2 for p in pairs):
        raise GraphFormatError(f"{prefix}_A.txt: expected two columns per line")
    edges = np.array(pairs, dtype=np.int64).reshape(-1, 2)

    n_nodes = indicator.size
    if edges.size and (edges.min() < 1 or edges.max() > n_nodes):
        bad = edges[(edges < 1).any(axis=1) | (edges > n_nodes).any(axis=1)][0]
        raise IntegrityError(
            f"edge {tuple(bad)} references a vertex outside 1..{n_nodes}"
        )

    node_labels = None
    if part("node_labels").exists():
        node_labels = _read_int_column(part("node_labels"))
        if node_labels.size != n_nodes:
            raise IntegrityError(
                f"{node_labels.size} node labels for {n_nodes} vertices"
            )
    edge_labels = None
    if part("edge_labels").exists():
        edge_labels = _read_int_column(part("edge_labels"))
        if edge_labels.size != len(edges):
            raise IntegrityError(
                f"{edge_labels.size} edge labels for {len(edges)} edges"
            )

    graph_ids = np.unique(indicator)
    graph_labels = None
    if part("graph_labels").exists():
        graph_labels = _read_int_column(part("graph_labels"))
        if graph_labels.size != graph_ids.size:
            raise IntegrityError(
                f"{graph_labels.size} graph labels for {graph_ids.size} graphs"
            )

    members = {int(gid): np.flatnonzero(indicator == gid) for gid in graph_ids}
    local = np.empty(n_nodes, dtype=np.int64)
    for nodes in members.values():
        local[nodes] = np.arange(nodes.size)

    per_graph_edges = {int(gid): [] for gid in graph_ids}
    for k, (a, b) in enumerate(edges - 1):
        ga, gb = int(indicator[a]), int(indicator[b])
        if ga != gb:
            raise IntegrityError(
                f"edge ({a + 1}, {b + 1}) joins graphs {ga} and {gb}"
            )
        if a != b:
            per_graph_edges[ga].append((int(local[a]), int(local[b]), k))

    graphs = []
    for idx, gid in enumerate(int(x) for x in graph_ids):
        nodes = members[gid]
        n = nodes.size
        w = np.zeros((n, n))
        elabels = {} if edge_labels is not None else None
        for u, v, k in per_graph_edges[gid]:
            w[u, v] = w[v, u] = 1.0
            if elabels is not None:
                elabels.setdefault((min(u, v), max(u, v)), canonical_token(edge_labels[k]))
        vlabels = None
        if node_labels is not None:
            vlabels = [canonical_token(x) for x in node_labels[nodes]]
        cls = canonical_token(graph_labels[idx]) if graph_labels is not None else None
        graphs.append(
            WeightedGraph(w, vertex_labels=vlabels, edge_labels=elabels,
                          graph_id=gid, class_label=cls)
        )
    return GraphDataset(graphs, name=prefix)


def graph_to_dict(g: WeightedGraph) -> dict:
    out = {
        "id": g.graph_id,
        "class": g.class_label,
        "n": g.n,
        "weights": g.weights.tolist(),
        "vertex_labels": list(g.vertex_labels),
    }
    if g.edge_labels is not None:
        out["edge_labels"] = [[u, v, tok] for (u, v), tok in sorted(g.edge_labels.items())]
    return out


def graph_from_dict(obj: dict) -> WeightedGraph:
    try:
        weights = np.array(obj["weights"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"bad or missing 'weights': {exc}") from exc
    n = obj.get("n", weights.shape[0] if weights.ndim else 0)
    if weights.ndim != 2 or weights.shape != (n, n):
        raise GraphFormatError(f"'weights' shape {weights.shape} does not match n={n}")
    elabels = None
    if obj.get("edge_labels") is not None:
        elabels = {(int(u), int(v)): tok for u, v, tok in obj["edge_labels"]}
    return WeightedGraph(
        weights,
        vertex_labels=obj.get("vertex_labels"),
        edge_labels=elabels,
        graph_id=obj.get("id"),
        class_label=obj.get("class"),
    )


def _read_json(path: Path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc


def load_weighted_json(path) -> GraphDataset:
    """Load graphs from a JSON file, or from a directory of JSON files.

    A directory with a manifest is read in manifest order; otherwise files
    are read in sorted filename order.
    """
    path = Path(path)
    if path.is_dir():
        manifest = path / MANIFEST_NAME
        if manifest.exists():
            files = [path / row["file"] for row in read_manifest(manifest)]
        else:
            files = sorted(path.glob("*.json"))
        if not files:
            raise GraphFormatError(f"{path}: no JSON graph files")
        graphs = []
        for f in files:
            graphs.extend(load_weighted_json(f).graphs)
        return GraphDataset(graphs, name=path.name)
    if not path.exists():
        raise GraphFormatError(f"{path}: no such file")
    obj = _read_json(path)
    name = None
    if isinstance(obj, dict) and "graphs" in obj:
        name = obj.get("name")
        items = obj["graphs"]
    elif isinstance(obj, list):
        items = obj
    elif isinstance(obj, dict):
        items = [obj]
    else:
        raise GraphFormatError(f"{path}: unexpected JSON top level")
    return GraphDataset([graph_from_dict(o) for o in items], name=name)


def save_weighted_json(dataset, path) -> None:
    """Write a dataset (or a single graph) in the JSON graph schema."""
    if isinstance(dataset, WeightedGraph):
        payload = graph_to_dict(dataset)
    else:
        payload = {"name": dataset.name, "graphs": [graph_to_dict(g) for g in dataset]}
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_dataset(path) -> GraphDataset:
    """Load either a TU directory or JSON graph input."""
    path = Path(path)
    if path.is_dir() and list(path.glob("*_graph_indicator.txt")):
        return load_tu_dataset(path)
    return load_weighted_json(path)


def read_manifest(path) -> list[dict]:
    with open(path, newline="") as fh:
        rows = [r for r in csv.DictReader(line for line in fh if not line.startswith("#"))]
    for r in rows:
        if "file" not in r or "graph_id" not in r:
            raise GraphFormatError(f"{path}: manifest needs graph_id and file columns")
    return rows


def write_manifest(rows: list[dict], path, header: str = None) -> None:
    with open(path, "w", newline="") as fh:
        if header:
            fh.write(f"# {header}\n")
        writer = csv.DictWriter(fh, fieldnames=["date", "graph_id", "file"])
        writer.writeheader()
        writer.writerows(rows)


def write_gram_csv(values, graph_ids, path, header: str = None) -> None:
    """Square matrix CSV; first line lists graph ids. Values round-trip exactly."""
    values = np.asarray(values)
    with open(path, "w", newline="") as fh:
        if header:
            fh.write(f"# {header}\n")
        writer = csv.writer(fh)
        writer.writerow([str(i) for i in graph_ids])
        for row in values:
            writer.writerow([repr(float(x)) for x in row])


def read_gram_csv(path) -> tuple[np.ndarray, list[str]]:
    if not os.path.exists(path):
        raise GraphFormatError(f"{path}: no such file")
    with open(path, newline="") as fh:
        rows = list(csv.reader(line for line in fh if not line.startswith("#")))
    if not rows:
        raise GraphFormatError(f"{path}: empty Gram file")
    ids, body = rows[0], rows[1:]
    try:
        values = np.array([[float(x) for x in r] for r in body], dtype=np.float64)
    except ValueError as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc
    if values.shape != (len(ids), len(ids)):
        raise GraphFormatError(
            f"{path}: {values.shape} values for {len(ids)} graph ids"
        )
    return values, ids


def _numeric_labels(labels) -> list:
    tokens = [canonical_token(y) for y in labels]
    try:
        return [int(t) for t in tokens]
    except ValueError:
        classes = {t: i for i, t in enumerate(sorted(set(tokens)))}
        return [classes[t] for t in tokens]


def write_precomputed_kernel(values, labels, path) -> None:
    """Write ``<label> 0:<i> 1:<k(i,1)> ...`` rows with 1-based serial ids.

    Non-numeric class tokens are mapped to their index in sorted order.
    """
    values = np.asarray(values)
    with open(path, "w") as fh:
        for i, (y, row) in enumerate(zip(_numeric_labels(labels), values)):
            cells = " ".join(f"{j + 1}:{float(x)!r}" for j, x in enumerate(row))
            fh.write(f"{y} 0:{i + 1} {cells}\n")


def read_precomputed_kernel(path) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`write_precomputed_kernel`; returns ``(K, y)``."""
    labels, rows = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts:
                continue
            try:
                labels.append(float(parts[0]))
                cells = dict(p.split(":", 1) for p in parts[1:])
                serial = int(cells.pop("0"))
                row = [float(cells[str(j)]) for j in range(1, len(cells) + 1)]
            except (KeyError, ValueError) as exc:
                raise GraphFormatError(f"{path}:{lineno}: {exc}") from exc
            if serial != len(rows) + 1:
                raise GraphFormatError(f"{path}:{lineno}: serial id {serial} out of order")
            rows.append(row)
    return np.array(rows), np.array(labels)

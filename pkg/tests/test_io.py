import numpy as np
import pytest

from dtqwk.exceptions import GraphFormatError, IntegrityError
from dtqwk.graph import GraphDataset, from_edges
from dtqwk.io import (
    graph_from_dict,
    graph_to_dict,
    load_dataset,
    load_tu_dataset,
    load_weighted_json,
    read_gram_csv,
    read_manifest,
    read_precomputed_kernel,
    save_weighted_json,
    write_gram_csv,
    write_manifest,
    write_precomputed_kernel,
)


def write_tu(root, name="TOY", a="1, 2\n2, 1\n2, 3\n3, 2\n4, 5\n5, 4\n",
             indicator="1\n1\n1\n2\n2\n", labels=True):
    root.mkdir(exist_ok=True)
    (root / f"{name}_A.txt").write_text(a)
    (root / f"{name}_graph_indicator.txt").write_text(indicator)
    if labels:
        (root / f"{name}_graph_labels.txt").write_text("1\n-1\n")
        (root / f"{name}_node_labels.txt").write_text("0\n1\n0\n2\n2\n")
    return root


def test_tu_round_trip(tmp_path):
    ds = load_tu_dataset(write_tu(tmp_path / "toy"))
    assert ds.name == "TOY"
    assert len(ds) == 2
    g0, g1 = ds
    assert g0.n == 3 and g0.n_edges == 2
    assert g0.vertex_labels == ("0", "1", "0")
    assert g1.class_label == "-1"
    assert g0.weights[0, 1] == 1.0


def test_mutag_shape(mutag):
    assert len(mutag) == 188
    assert max(g.n for g in mutag) == 28
    assert sorted(set(mutag.class_labels)) == ["-1", "1"]
    assert all(g.has_edge_labels for g in mutag)


def test_tu_errors(tmp_path):
    with pytest.raises(GraphFormatError):
        load_tu_dataset(tmp_path)
    with pytest.raises(IntegrityError):
        load_tu_dataset(write_tu(tmp_path / "oob", a="1, 9\n9, 1\n"))
    with pytest.raises(IntegrityError):
        load_tu_dataset(write_tu(tmp_path / "cross", a="1, 4\n4, 1\n"))
    with pytest.raises(GraphFormatError):
        load_tu_dataset(write_tu(tmp_path / "empty", indicator=""))


def test_json_round_trip(tmp_path):
    g = from_edges(3, [(0, 1, 0.5), (1, 2, 2.0)], vertex_labels="CCO",
                   edge_labels={(0, 1): "1", (1, 2): "2"}, graph_id="g", class_label=1)
    h = graph_from_dict(graph_to_dict(g))
    assert np.array_equal(g.weights, h.weights)
    assert h.vertex_labels == g.vertex_labels
    assert h.edge_labels == g.edge_labels
    save_weighted_json(GraphDataset([g]), tmp_path / "one.json")
    back = load_weighted_json(tmp_path / "one.json")
    assert back.graph_ids == ["g"]
    assert load_dataset(tmp_path / "one.json")[0].class_label == 1


def test_json_errors(tmp_path):
    with pytest.raises(GraphFormatError):
        graph_from_dict({"n": 2, "weights": [[0, 1, 0]]})
    (tmp_path / "bad.json").write_text("{not json")
    with pytest.raises(GraphFormatError):
        load_weighted_json(tmp_path / "bad.json")
    with pytest.raises(GraphFormatError):
        load_weighted_json(tmp_path / "missing.json")


def test_directory_follows_manifest(tmp_path):
    for name in ("b", "a"):
        save_weighted_json(from_edges(2, [(0, 1)], graph_id=name), tmp_path / f"{name}.json")
    write_manifest([{"date": "d1", "graph_id": "b", "file": "b.json"},
                    {"date": "d2", "graph_id": "a", "file": "a.json"}],
                   tmp_path / "manifest.csv", header="test")
    assert load_weighted_json(tmp_path).graph_ids == ["b", "a"]
    assert [r["date"] for r in read_manifest(tmp_path / "manifest.csv")] == ["d1", "d2"]


def test_gram_csv_is_exact(tmp_path, rng):
    K = rng.random((4, 4))
    write_gram_csv(K, ["a", "b", "c", "d"], tmp_path / "k.csv", header="hdr")
    back, ids = read_gram_csv(tmp_path / "k.csv")
    assert ids == ["a", "b", "c", "d"]
    assert np.array_equal(back, K)
    (tmp_path / "short.csv").write_text("a,b\n1,2\n")
    with pytest.raises(GraphFormatError):
        read_gram_csv(tmp_path / "short.csv")


def test_precomputed_kernel_format(tmp_path):
    K = np.array([[1.0, 0.25], [0.25, 1.0]])
    write_precomputed_kernel(K, ["1", "-1"], tmp_path / "k.svm")
    lines = (tmp_path / "k.svm").read_text().splitlines()
    assert lines[0] == "1 0:1 1:1.0 2:0.25"
    assert lines[1] == "-1 0:2 1:0.25 2:1.0"
    back, y = read_precomputed_kernel(tmp_path / "k.svm")
    assert np.array_equal(back, K)
    assert y.tolist() == [1.0, -1.0]


def test_precomputed_kernel_maps_text_labels(tmp_path):
    write_precomputed_kernel(np.eye(3), ["b", "a", "b"], tmp_path / "k.svm")
    _, y = read_precomputed_kernel(tmp_path / "k.svm")
    assert y.tolist() == [1.0, 0.0, 1.0]

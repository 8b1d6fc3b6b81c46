"""Command-line entry point: ``dtqwk <command> [options]``.

Option values are resolved in the order command-line flag, environment
variable ``DTQWK_<OPTION>`` (upper case, dashes as underscores), the
``[dtqwk]`` table of a ``--config`` TOML file, then built-in defaults. The
resolved configuration is written into the header of every output file.

Exit codes: 0 success, 2 usage error, 3 data error, 4 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .exceptions import DistributionError, GraphError

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 2, 3, 4
ENV_PREFIX = "DTQWK_"

logger = logging.getLogger("dtqwk")


class UsageError(Exception):
    pass


DEFAULTS = {
    "window": 28,
    "mode": "euclidean",
    "kernel": "js",
    "horizon": 25,
    "wl": "0:3",
    "workers": 1,
    "threshold": 1.5,
    "dims": 3,
    "folds": 10,
    "seed": 0,
}


def _parse_wl(text) -> tuple[int, int]:
    parts = str(text).split(":")
    try:
        if len(parts) == 1:
            lo, hi = 0, int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise UsageError(f"--wl expects H or HMIN:HMAX, got {text!r}") from None
    if not 0 <= lo <= hi:
        raise UsageError(f"--wl needs 0 <= HMIN <= HMAX, got {text!r}")
    return lo, hi


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise UsageError(f"config file {path} not found") from None
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"config file {path}: {exc}") from None
    return {k.replace("-", "_"): v for k, v in data.get("dtqwk", data).items()}


def resolve(args: argparse.Namespace, names) -> dict:
    """Fill unset options from environment, config file and defaults."""
    config = _load_config(getattr(args, "config", None))
    resolved = {}
    for name in names:
        value = getattr(args, name, None)
        if value is None:
            env = os.environ.get(ENV_PREFIX + name.upper())
            if env is not None:
                value = env
            elif name in config:
                value = config[name]
            else:
                value = DEFAULTS.get(name)
        resolved[name] = value
    return resolved


def _as(kind, name, value):
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise UsageError(f"--{name.replace('_', '-')}: invalid value {value!r}") from None


def _header(command: str, cfg: dict) -> str:
    shown = {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(cfg.items())}
    return f"dtqwk {__version__} {command} {json.dumps(shown, sort_keys=True, default=str)}"


def _require_file(path, flag):
    if path is None:
        raise UsageError(f"{flag} is required")
    if not Path(path).exists():
        raise UsageError(f"{flag}: {path} does not exist")


def _write_meta(path: Path, header: str, extra: dict = None):
    meta = {"header": header}
    meta.update(extra or {})
    with open(path, "w") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True, default=str)


def cmd_ingest_prices(args) -> int:
    from .finance import WEIGHT_MODES, load_prices, sliding_networks
    from .io import graph_to_dict, write_manifest

    cfg = resolve(args, ["csv", "window", "mode", "out", "start", "end"])
    _require_file(cfg["csv"], "--csv")
    if cfg["out"] is None:
        raise UsageError("--out is required")
    window = _as(int, "window", cfg["window"])
    if window < 2:
        raise UsageError(f"--window must be >= 2, got {window}")
    if cfg["mode"] not in WEIGHT_MODES:
        raise UsageError(f"--mode must be one of {WEIGHT_MODES}")

    table = load_prices(cfg["csv"], start=cfg["start"], end=cfg["end"])
    if table.dropped:
        print(f"dropped {len(table.dropped)} tickers with missing prices: "
              + ",".join(table.dropped), file=sys.stderr)
    try:
        nets = sliding_networks(table, window, cfg["mode"])
    except ValueError as exc:
        raise GraphError(str(exc)) from exc

    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    header = _header("ingest-prices", cfg)
    rows = []
    for g in nets:
        fname = f"{g.graph_id}.json"
        with open(out / fname, "w") as fh:
            json.dump(graph_to_dict(g), fh)
        rows.append({"date": g.graph_id, "graph_id": g.graph_id, "file": fname})
    write_manifest(rows, out / "manifest.csv", header=header)
    print(f"wrote {len(rows)} networks on {len(table.tickers)} tickers to {out}")
    return EXIT_OK


def cmd_gram(args) -> int:
    from .io import load_dataset, write_gram_csv, write_precomputed_kernel
    from .pipeline import QuantumWalkKernel

    cfg = resolve(args, ["dataset", "kernel", "horizon", "wl", "workers", "threshold",
                         "out", "svm_out", "labels_out", "no_edge_labels"])
    _require_file(cfg["dataset"], "--dataset")
    if cfg["out"] is None:
        raise UsageError("--out is required")
    if cfg["kernel"] not in ("dp", "js"):
        raise UsageError(f"--kernel must be dp or js, got {cfg['kernel']!r}")
    horizon = _as(int, "horizon", cfg["horizon"])
    if horizon < 0:
        raise UsageError("--horizon must be >= 0")
    wl = _parse_wl(cfg["wl"])
    workers = _as(int, "workers", cfg["workers"])
    threshold = _as(float, "threshold", cfg["threshold"])

    dataset = load_dataset(cfg["dataset"])
    est = QuantumWalkKernel(
        kernel=cfg["kernel"], horizon=horizon, wl_range=wl,
        density_threshold=threshold, use_edge_labels=not cfg["no_edge_labels"],
        n_jobs=workers,
    )
    G = est.fit(dataset).gram_matrix()
    header = _header("gram", cfg)
    write_gram_csv(G.values, G.graph_ids, cfg["out"], header=header)
    labels = dataset.class_labels
    if cfg["svm_out"]:
        if any(y is None for y in labels):
            raise GraphError("precomputed-kernel output needs a class label on every graph")
        write_precomputed_kernel(G.values, labels, cfg["svm_out"])
        _write_meta(Path(str(cfg["svm_out"]) + ".meta.json"), header, {"graph_ids": G.graph_ids})
    if cfg["labels_out"]:
        with open(cfg["labels_out"], "w") as fh:
            fh.writelines(f"{y}\n" for y in labels)
    print(f"{G.values.shape[0]}x{G.values.shape[1]} {cfg['kernel']} Gram written to {cfg['out']}")
    return EXIT_OK


def cmd_kpca(args) -> int:
    from .embed import kpca
    from .io import read_gram_csv

    cfg = resolve(args, ["gram", "dims", "out"])
    _require_file(cfg["gram"], "--gram")
    dims = _as(int, "dims", cfg["dims"])
    K, ids = read_gram_csv(cfg["gram"])
    if not 1 <= dims <= len(ids):
        raise UsageError(f"--dims must be between 1 and {len(ids)}")
    emb = kpca(K, dims)
    lines = ["id," + ",".join(f"x{i + 1}" for i in range(dims))]
    for gid, row in zip(ids, emb.coordinates):
        lines.append(gid + "," + ",".join(f"{x:.12g}" for x in row))
    text = f"# {_header('kpca', cfg)}\n" + "\n".join(lines) + "\n"
    if cfg["out"]:
        Path(cfg["out"]).write_text(text)
    else:
        sys.stdout.write(text)
    if emb.clamped > 0:
        print(f"clamped negative eigenvalue magnitude {emb.clamped:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_entropy(args) -> int:
    from .embed import entropy_series
    from .io import MANIFEST_NAME, load_weighted_json, read_manifest

    cfg = resolve(args, ["nets", "horizon", "workers", "threshold", "out"])
    _require_file(cfg["nets"], "--nets")
    horizon = _as(int, "horizon", cfg["horizon"])
    if horizon < 0:
        raise UsageError("--horizon must be >= 0")
    nets = Path(cfg["nets"])
    dataset = load_weighted_json(nets)
    stamps = None
    if nets.is_dir() and (nets / MANIFEST_NAME).exists():
        stamps = [r["date"] for r in read_manifest(nets / MANIFEST_NAME)]
    try:
        series = entropy_series(dataset, horizon, timestamps=stamps,
                                density_threshold=_as(float, "threshold", cfg["threshold"]),
                                n_jobs=_as(int, "workers", cfg["workers"]))
    except ValueError as exc:
        if isinstance(exc, GraphError):
            raise
        raise GraphError(str(exc)) from exc
    text = f"# {_header('entropy', cfg)}\ndate,entropy\n" + "".join(
        f"{t},{h!r}\n" for t, h in series
    )
    if cfg["out"]:
        Path(cfg["out"]).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sparsify(args) -> int:
    from .graph import connected_parts, largest_component
    from .io import graph_to_dict, load_dataset
    from .sparsify import sparsification_policy

    cfg = resolve(args, ["dataset", "threshold", "out"])
    _require_file(cfg["dataset"], "--dataset")
    if cfg["out"] is None:
        raise UsageError("--out is required")
    threshold = _as(float, "threshold", cfg["threshold"])
    dataset = load_dataset(cfg["dataset"])
    out = []
    for g in dataset:
        if len(connected_parts(g)) > 1:
            g, _ = largest_component(g)
        s = sparsification_policy(g, threshold)
        d = graph_to_dict(s.to_weighted_graph())
        d["class"] = g.class_label
        d["structure"] = s.kind
        out.append(d)
    with open(cfg["out"], "w") as fh:
        json.dump({"name": dataset.name, "header": _header("sparsify", cfg), "graphs": out}, fh)
    print(f"wrote {len(out)} sparsified graphs to {cfg['out']}")
    return EXIT_OK


def cmd_classify_smoke(args) -> int:
    from .io import read_gram_csv
    from .kernels import kernel_1nn_cv

    cfg = resolve(args, ["gram", "labels", "folds", "seed"])
    _require_file(cfg["gram"], "--gram")
    _require_file(cfg["labels"], "--labels")
    K, ids = read_gram_csv(cfg["gram"])
    with open(cfg["labels"]) as fh:
        y = [line.strip() for line in fh if line.strip()]
    if len(y) != len(ids):
        raise GraphError(f"{len(y)} labels for {len(ids)} graphs")
    try:
        res = kernel_1nn_cv(K, y, folds=_as(int, "folds", cfg["folds"]),
                            seed=_as(int, "seed", cfg["seed"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for i, acc in enumerate(res["fold_accuracies"], 1):
        print(f"fold {i:2d}: {100 * acc:.2f}")
    print(f"accuracy: {100 * res['mean']:.2f} ± {100 * res['stderr']:.2f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtqwk",
        description="Quantum-walk kernels for weighted and complete graphs.",
    )
    parser.add_argument("--version", action="version", version=f"dtqwk {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", help="TOML file with a [dtqwk] table of option defaults")
        p.set_defaults(func=func)
        return p

    p = add("ingest-prices", cmd_ingest_prices, "build sliding-window networks from a price CSV")
    p.add_argument("--csv", help="CSV with a date column and one column per ticker")
    p.add_argument("--window", help="window length in dates (default 28)")
    p.add_argument("--mode", help="euclidean or correlation (default euclidean)")
    p.add_argument("--start", help="first ISO date to use")
    p.add_argument("--end", help="last ISO date to use")
    p.add_argument("--out", help="output directory for JSON graphs and manifest.csv")

    p = add("gram", cmd_gram, "compute a kernel Gram matrix for a graph dataset")
    p.add_argument("--dataset", help="TU dataset directory, JSON file, or network directory")
    p.add_argument("--kernel", help="dp or js (default js)")
    p.add_argument("--horizon", help="walk horizon T (default 25)")
    p.add_argument("--wl", help="WL iterations H or HMIN:HMAX (default 0:3)")
    p.add_argument("--workers", help="parallel workers for the walk stage (default 1)")
    p.add_argument("--threshold", help="edge/vertex ratio above which graphs become trees")
    p.add_argument("--no-edge-labels", action="store_const", const=True, default=None,
                   help="ignore original edge labels")
    p.add_argument("--out", help="Gram matrix CSV path")
    p.add_argument("--svm-out", help="also write the precomputed-kernel text format")
    p.add_argument("--labels-out", help="also write one class label per line")

    p = add("kpca", cmd_kpca, "kernel PCA coordinates from a Gram CSV")
    p.add_argument("--gram", help="Gram matrix CSV")
    p.add_argument("--dims", help="number of components (default 3)")
    p.add_argument("--out", help="output CSV (default stdout)")

    p = add("entropy", cmd_entropy, "entropy time series of a network directory")
    p.add_argument("--nets", help="directory written by ingest-prices, or JSON graphs")
    p.add_argument("--horizon", help="walk horizon T (default 25)")
    p.add_argument("--workers", help="parallel workers (default 1)")
    p.add_argument("--threshold", help="edge/vertex ratio above which graphs become trees")
    p.add_argument("--out", help="output CSV (default stdout)")

    p = add("sparsify", cmd_sparsify, "dump the sparsified walk structures as JSON graphs")
    p.add_argument("--dataset", help="TU dataset directory, JSON file, or network directory")
    p.add_argument("--threshold", help="edge/vertex ratio above which graphs become trees")
    p.add_argument("--out", help="output JSON path")

    p = add("classify-smoke", cmd_classify_smoke, "1-NN cross-validation on a Gram CSV")
    p.add_argument("--gram", help="Gram matrix CSV")
    p.add_argument("--labels", help="text file with one class label per line")
    p.add_argument("--folds", help="number of folds (default 10)")
    p.add_argument("--seed", help="fold shuffling seed (default 0)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dtqwk {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, DistributionError, OSError) as exc:
        print(f"dtqwk {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # last-resort handler keeps the documented exit code
        logger.debug("internal error", exc_info=True)
        print(f"dtqwk {args.command}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

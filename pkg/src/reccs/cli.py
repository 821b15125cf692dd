"""Command line entry point: ``reccs <command> ...``.

Exit codes: 0 ok, 1 internal error, 2 bad input (including argument errors).
"""

from __future__ import annotations

import argparse
import csv
from collections import Counter
import logging
import os
from pathlib import Path
import sys

from .graph import InputError, ParameterError
from .io import FormatError, dump_document, read_clustering, read_graph, read_params, write_clustering, \
    write_graph, write_params
from .params import ParamSet, extract_param_set

log = logging.getLogger("reccs")

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT = 0, 1, 2
VARIANTS = {"sbm": "none", "reccs-v1": "v1", "reccs-v2": "v2"}


class UsageError(InputError):
    pass


def _threads(args) -> int:
    return args.threads if args.threads and args.threads > 0 else (os.cpu_count() or 1)


def cmd_extract(args) -> int:
    g = read_graph(args.graph)
    c = read_clustering(args.clustering, g)
    ps = extract_param_set(g, c, _threads(args))
    write_params(ps, args.out_params)
    p = ps.clustered
    hist = Counter(p.connectivity.tolist())
    print(f"nodes: {g.n}  edges: {g.edge_count}")
    print(f"clusters: {p.n_clusters}  clustered nodes: {len(p.node_ids)}  "
          f"outliers: {int((ps.outlier.cluster_sizes() == 1).sum())}")
    print(f"clustered-subnetwork edges: {p.total_edges()}  (inter-cluster {p.inter_edges()})")
    print("k(C) histogram: " + (", ".join(f"{k}:{n}" for k, n in sorted(hist.items())) or "-"))
    return EXIT_OK


def cmd_generate(args) -> int:
    from .pipeline import PipelineConfig, generate_from_params, manifest

    if args.params is None and (args.graph is None or args.clustering is None):
        raise UsageError("generate needs --params, or both --graph and --clustering")
    if args.params is not None and (args.graph or args.clustering):
        raise UsageError("--params cannot be combined with --graph/--clustering")
    cfg = PipelineConfig(reccs=VARIANTS[args.variant], outliers=args.outliers,
                         master_seed=args.seed, threads=_threads(args))
    if args.params is not None:
        ps = read_params(args.params)
        if not isinstance(ps, ParamSet):
            raise FormatError(f"{args.params}: expected a parameter set written by 'extract'")
        inputs = {"params": str(args.params)}
    else:
        g = read_graph(args.graph)
        c = read_clustering(args.clustering, g)
        ps = extract_param_set(g, c, cfg.threads)
        inputs = {"graph": str(args.graph), "clustering": str(args.clustering)}
    res = generate_from_params(ps, cfg)
    write_graph(res.graph, args.out_graph)
    if args.out_clustering:
        write_clustering(res.clustering, args.out_clustering)
    man = manifest(cfg, res, inputs)
    del man["config"]["threads"]  # results do not depend on it
    man_path = Path(args.manifest) if args.manifest else Path(str(args.out_graph) + ".manifest.json")
    man_path.write_text(dump_document(man))
    print(f"wrote {args.out_graph}: {res.graph.n} nodes, {res.graph.edge_count} edges")
    return EXIT_OK


def _evaluate(real_path, clus_path, syn_path, threads, cache=None):
    from .metrics import full_report

    cache = {} if cache is None else cache
    key = (str(real_path), str(clus_path))
    if key not in cache:
        g = read_graph(real_path)
        cache[key] = (g, read_clustering(clus_path, g))
    g, c = cache[key]
    return full_report(g, c, read_graph(syn_path), threads)


def cmd_evaluate(args) -> int:
    rep = _evaluate(args.real_graph, args.clustering, args.syn_graph, _threads(args))
    Path(args.out_report).write_text(dump_document(rep.to_dict()))
    if args.csv:
        _write_rows(args.csv, [rep.csv_row()])
    for e in rep.entries:
        d = "n/a" if e.distance is None else f"{e.distance:.6g}"
        print(f"{e.name:36s} {e.kind:9s} {d}")
    print(f"{'normalized_edit_distance':36s} {'':9s} {rep.normalized_edit_distance}")
    return EXIT_OK


def cmd_edit_distance(args) -> int:
    from .metrics import normalized_edit_distance

    print(f"{normalized_edit_distance(read_graph(args.real_graph), read_graph(args.syn_graph)):.12g}")
    return EXIT_OK


def _write_rows(path, rows: list[dict]) -> None:
    fields: list[str] = []
    for r in rows:
        fields.extend(k for k in r if k not in fields)
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=fields)
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in fields})


def cmd_report_batch(args) -> int:
    """Evaluate every row of a CSV manifest (``name,real_graph,clustering,syn_graph``;
    relative paths resolved against the manifest's directory)."""
    base = Path(args.manifest).parent
    try:
        with open(args.manifest, newline="") as f:
            runs = list(csv.DictReader(f))
    except OSError as exc:
        raise InputError(f"cannot read {args.manifest}: {exc}") from exc
    need = {"name", "real_graph", "clustering", "syn_graph"}
    if runs and not need <= set(runs[0]):
        raise InputError(f"{args.manifest}: columns must include {sorted(need)}")
    cache: dict = {}
    rows = []
    for run in runs:
        rp = [base / run[k] for k in ("real_graph", "clustering", "syn_graph")]
        rep = _evaluate(*rp, _threads(args), cache)
        rows.append({"name": run["name"], **rep.csv_row()})
    _write_rows(args.out, rows)
    print(f"wrote {len(rows)} report row(s) to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reccs", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--threads", type=int, default=0, help="worker threads (default: all cores)")

    p = sub.add_parser("extract", help="extract generation parameters from a clustered network")
    p.add_argument("--graph", required=True)
    p.add_argument("--clustering", required=True)
    p.add_argument("--out-params", required=True)
    common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("generate", help="generate a synthetic network")
    p.add_argument("--params")
    p.add_argument("--graph")
    p.add_argument("--clustering")
    p.add_argument("--variant", choices=sorted(VARIANTS), default="reccs-v1")
    p.add_argument("--outliers", choices=["s1", "s2", "s3", "none"], default="s1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-graph", required=True)
    p.add_argument("--out-clustering")
    p.add_argument("--manifest", help="run manifest path (default: <out-graph>.manifest.json)")
    common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", help="compare a synthetic network with the real one")
    p.add_argument("--real-graph", required=True)
    p.add_argument("--clustering", required=True)
    p.add_argument("--syn-graph", required=True)
    p.add_argument("--out-report", required=True)
    p.add_argument("--csv", help="also write the report as a one-row CSV")
    common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("edit-distance", help="normalized edge edit distance")
    p.add_argument("--real-graph", required=True)
    p.add_argument("--syn-graph", required=True)
    p.set_defaults(func=cmd_edit_distance)

    p = sub.add_parser("report-batch", help="evaluate many runs listed in a CSV manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_report_batch)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

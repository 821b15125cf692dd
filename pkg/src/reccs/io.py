"""Edge lists, clustering files and parameter documents.

Edge list: one ``u v`` pair per line, ``#`` comments and blank lines ignored.
Isolated nodes cannot be expressed as edges, so :func:`write_graph` declares
them in a leading ``# isolated <id>`` comment block which :func:`read_graph`
honours; other readers just skip those lines.

Clustering: ``node<TAB>cluster`` per line. Parameter documents are JSON
objects tagged ``"format": "reccs-params-v1"``.
"""

from __future__ import annotations

import json
from pathlib import Path
import re
import warnings

import numpy as np

from .graph import Clustering, Graph, InputError
from .params import NetworkParams, ParamSet

PARAMS_FORMAT = "reccs-params-v1"
_ISOLATED = re.compile(r"#\s*isolated\s+(\d+)\s*$")


class ParseError(InputError):
    def __init__(self, path, lineno: int, msg: str):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.path = str(path)
        self.lineno = lineno


class FormatError(InputError):
    """Structured document with the wrong format tag or shape."""


def _slow_parse(path) -> np.ndarray:
    rows = []
    with open(path) as f:
        for lineno, line in enumerate(f, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            if len(parts) != 2:
                raise ParseError(path, lineno, f"expected two node ids, got {len(parts)} fields")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(path, lineno, f"non-integer node id in {s!r}") from None
            if u < 0 or v < 0:
                raise ParseError(path, lineno, "node ids must be non-negative")
            rows.append((u, v))
    return np.asarray(rows, dtype=np.int64).reshape(-1, 2)


def _leading_isolated(path) -> list[int]:
    out = []
    with open(path) as f:
        for line in f:
            s = line.strip()
            if s and not s.startswith("#"):
                break
            m = _ISOLATED.match(s)
            if m:
                out.append(int(m.group(1)))
    return out


def read_graph(path) -> Graph:
    path = Path(path)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)  # empty input
            arr = np.loadtxt(path, dtype=np.int64, comments="#", ndmin=2)
        if arr.size == 0:
            arr = np.empty((0, 2), dtype=np.int64)
        elif arr.shape[1] != 2 or arr.min() < 0:
            arr = _slow_parse(path)
    except ValueError:
        arr = _slow_parse(path)  # re-parse to report the offending line
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    isolated = _leading_isolated(path)
    if isolated:
        nodes = np.union1d(np.unique(arr), np.asarray(isolated, dtype=np.int64))
        return Graph.from_edges(arr, nodes=nodes)
    return Graph.from_edges(arr)


def write_graph(g: Graph, path) -> None:
    e = g.edges()
    deg = g.degrees()
    with open(path, "w") as f:
        for v in g.nodes[deg == 0].tolist():
            f.write(f"# isolated {v}\n")
        if len(e):
            f.write("\n".join(f"{u} {v}" for u, v in e.tolist()))
            f.write("\n")


def read_clustering(path, g: Graph) -> Clustering:
    """Nodes of ``g`` missing from the file become singleton clusters."""
    path = Path(path)
    mapping: dict[int, str] = {}
    try:
        f = open(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    with f:
        for lineno, line in enumerate(f, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split(None, 1)
            if len(parts) != 2:
                raise ParseError(path, lineno, "expected 'node<TAB>cluster'")
            try:
                v = int(parts[0])
            except ValueError:
                raise ParseError(path, lineno, f"non-integer node id {parts[0]!r}") from None
            if v in mapping:
                raise ParseError(path, lineno, f"node {v} listed twice")
            if v not in g:
                raise ParseError(path, lineno, f"node {v} is not in the graph")
            mapping[v] = parts[1].strip()
    return Clustering.from_mapping(mapping, nodes=g.nodes)


def write_clustering(c: Clustering, path) -> None:
    with open(path, "w") as f:
        for v, r in zip(c.nodes.tolist(), c.assignment.tolist()):
            lab = c.labels[r]
            if lab is not None:
                f.write(f"{v}\t{lab}\n")


# -- structured documents -----------------------------------------------------

def dump_document(doc: dict) -> str:
    """JSON with one key per line; arrays kept on a single line each."""

    def enc(obj, indent):
        if isinstance(obj, dict):
            if not obj:
                return "{}"
            pad = "  " * (indent + 1)
            items = [f"{pad}{json.dumps(k)}: {enc(v, indent + 1)}" for k, v in sorted(obj.items())]
            return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
        return json.dumps(obj, separators=(",", ":"))

    return enc(doc, 0) + "\n"


def params_to_dict(p: NetworkParams) -> dict:
    return {
        "nodes": p.node_ids.tolist(),
        "membership": p.membership.tolist(),
        "cluster_ids": list(p.cluster_ids),
        "degrees": p.degrees.tolist(),
        "block_edges": p.block_edges.tolist(),
        "connectivity": p.connectivity.tolist(),
    }


def params_from_dict(d: dict) -> NetworkParams:
    try:
        p = NetworkParams(
            node_ids=np.asarray(d["nodes"], dtype=np.int64),
            membership=np.asarray(d["membership"], dtype=np.int64),
            cluster_ids=d["cluster_ids"],
            degrees=np.asarray(d["degrees"], dtype=np.int64),
            block_edges=np.asarray(d["block_edges"], dtype=np.int64),
            connectivity=np.asarray(d["connectivity"], dtype=np.int64),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed parameter section: {exc}") from exc
    return p


def write_params(p: NetworkParams | ParamSet, path) -> None:
    if isinstance(p, ParamSet):
        doc = {"format": PARAMS_FORMAT, "kind": "param-set",
               "clustered": params_to_dict(p.clustered), "outlier": params_to_dict(p.outlier)}
    else:
        doc = {"format": PARAMS_FORMAT, "kind": "network", "params": params_to_dict(p)}
    Path(path).write_text(dump_document(doc))


def read_document(path, fmt: str) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not a JSON document ({exc})") from exc
    if not isinstance(doc, dict) or doc.get("format") != fmt:
        found = doc.get("format") if isinstance(doc, dict) else None
        raise FormatError(f"{path}: expected format {fmt!r}, found {found!r}")
    return doc


def read_params(path) -> NetworkParams | ParamSet:
    doc = read_document(path, PARAMS_FORMAT)
    kind = doc.get("kind")
    if kind == "network":
        return params_from_dict(doc["params"])
    if kind == "param-set":
        return ParamSet(params_from_dict(doc["clustered"]), params_from_dict(doc["outlier"]))
    raise FormatError(f"{path}: unknown parameter document kind {kind!r}")

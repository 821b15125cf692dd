"""Fit statistics between a real clustered network and a synthetic one.

Both networks share the real clustering (the synthetic network's planted
clustering *is* the real one), and nodes correspond by id.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
import math

import numpy as np
from numba import njit
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .graph import Clustering, Graph, InputError, component_labels, induced_subgraph
from .params import cluster_min_cuts

REPORT_FORMAT = "reccs-report-v1"


def rmse(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise InputError(f"rmse: length mismatch {a.shape} vs {b.shape}")
    if a.size == 0:
        raise InputError("rmse of empty sequences")
    return float(np.sqrt(np.mean((a - b) ** 2)))


def simple_diff(s: float, s_syn: float) -> float:
    return float(s - s_syn)


def relative_diff(s: float, s_syn: float) -> float:
    if s == 0:
        raise InputError("relative difference undefined for a zero reference value")
    return float((s - s_syn) / s)


def mixing_parameter(g: Graph, c: Clustering, kind: str = "edge") -> float:
    """Inter-cluster share of edges (``kind="edge"``), or the per-node mean of
    the external-neighbour fraction over nodes with degree > 0 (``"node"``)."""
    if g.edge_count == 0:
        raise InputError("mixing parameter of a graph without edges")
    asg = c.aligned_to(g)
    e = g.edge_index_pairs()
    cross = asg[e[:, 0]] != asg[e[:, 1]]
    if kind == "edge":
        return float(np.count_nonzero(cross) / len(e))
    if kind == "node":
        ext = np.bincount(e[cross].ravel(), minlength=g.n)
        deg = g.degrees()
        ok = deg > 0
        return float(np.mean(ext[ok] / deg[ok]))
    raise ValueError(f"unknown mixing parameter kind {kind!r}")


@njit(cache=True)
def _triangles_per_node(indptr, indices):
    n = len(indptr) - 1
    deg = indptr[1:] - indptr[:-1]
    tri = np.zeros(n, dtype=np.int64)
    mark = np.full(n, -1, dtype=np.int64)

    # orient edges from lower (degree, id) to higher
    def up(a, b):
        return deg[a] < deg[b] or (deg[a] == deg[b] and a < b)

    for u in range(n):
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if up(u, v):
                mark[v] = u
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if not up(u, v):
                continue
            for q in range(indptr[v], indptr[v + 1]):
                w = indices[q]
                if up(v, w) and mark[w] == u:
                    tri[u] += 1
                    tri[v] += 1
                    tri[w] += 1
    return tri


def triangles_per_node(g: Graph) -> np.ndarray:
    if g.n == 0:
        return np.zeros(0, dtype=np.int64)
    return _triangles_per_node(g.indptr, g.indices)


def clustering_coefficients(g: Graph) -> tuple[float, float]:
    """``(global transitivity, mean local coefficient)``; nodes of degree < 2
    contribute a local coefficient of 0."""
    if g.n == 0:
        return 0.0, 0.0
    tri = triangles_per_node(g).astype(float)
    d = g.degrees().astype(float)
    wedges = d * (d - 1) / 2
    total_w = wedges.sum()
    glob = float(tri.sum() / total_w) if total_w > 0 else 0.0
    local = np.divide(tri, wedges, out=np.zeros_like(tri), where=wedges > 0)
    return glob, float(local.mean())


@njit(cache=True)
def _bfs(indptr, indices, src, dist, queue):
    dist[:] = -1
    dist[src] = 0
    head = 0
    tail = 1
    queue[0] = src
    while head < tail:
        x = queue[head]
        head += 1
        for p in range(indptr[x], indptr[x + 1]):
            y = indices[p]
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue[tail] = y
                tail += 1
    return dist[queue[tail - 1]]


def largest_component(g: Graph) -> Graph:
    lab = component_labels(g)
    sizes = np.bincount(lab)
    return induced_subgraph(g, g.nodes[lab == int(np.argmax(sizes))])


def diameter(g: Graph) -> int:
    """Exact diameter of the largest connected component (iFUB: a double sweep
    picks a central start, then fringe levels are scanned until the bounds
    meet)."""
    if g.n == 0:
        raise InputError("diameter of an empty graph")
    h = largest_component(g)
    if h.n == 1:
        return 0
    ip, ix = h.indptr, h.indices
    dist = np.empty(h.n, dtype=np.int64)
    queue = np.empty(h.n, dtype=np.int64)

    def ecc(v):
        return int(_bfs(ip, ix, v, dist, queue))

    r = int(np.argmax(h.degrees()))
    ecc(r)
    a = int(np.argmax(dist))
    lb = ecc(a)
    da = dist.copy()
    b = int(np.argmax(da))
    ecc(b)
    db = dist.copy()
    on_path = np.flatnonzero((da + db == lb) & (da == lb // 2))
    u = int(on_path[0])
    ecc_u = ecc(u)
    du = dist.copy()
    lb = max(lb, ecc_u)
    ub = 2 * ecc_u
    i = ecc_u
    while ub > lb and i > 0:
        for x in np.flatnonzero(du == i).tolist():
            lb = max(lb, ecc(x))
            if lb > 2 * (i - 1):
                return lb
        ub = 2 * (i - 1)
        i -= 1
    return lb


def min_cuts_by_cluster(g: Graph, c: Clustering, threads: int = 1) -> np.ndarray:
    """Min cut of each non-singleton cluster, in cluster order (0 if the
    cluster is disconnected in ``g``)."""
    cuts = cluster_min_cuts(g, c.aligned_to(g), c.n_clusters, threads)
    return cuts[~c.is_singleton()]


def min_cut_sequence(g: Graph, c: Clustering, threads: int = 1) -> np.ndarray:
    return np.sort(min_cuts_by_cluster(g, c, threads))


def disconnected_ratio(g: Graph, c: Clustering) -> float:
    asg = c.aligned_to(g)
    keep = ~c.is_singleton()
    if not np.any(keep):
        raise InputError("no non-singleton clusters")
    e = g.edge_index_pairs()
    intra = asg[e[:, 0]] == asg[e[:, 1]]
    ie = e[intra]
    mat = coo_matrix((np.ones(len(ie)), (ie[:, 0], ie[:, 1])), shape=(g.n, g.n))
    _, lab = connected_components(mat, directed=False)
    # a cluster is connected iff all its members share one component label
    ncomp = np.zeros(c.n_clusters, dtype=np.int64)
    pairs = np.unique(np.stack([asg, lab], axis=1), axis=0)
    np.add.at(ncomp, pairs[:, 0], 1)
    return float(np.count_nonzero(ncomp[keep] > 1) / np.count_nonzero(keep))


def normalized_edit_distance(g: Graph, n: Graph) -> float:
    """``|E(g) △ E(n)| / |E(g)|``."""
    if g.edge_count == 0:
        raise InputError("normalized edit distance needs a reference graph with edges")
    common = np.intersect1d(g.edge_keys(), n.edge_keys(), assume_unique=True)
    sym = g.edge_count + n.edge_count - 2 * len(common)
    return sym / g.edge_count


def outlier_stats(g: Graph, c: Clustering) -> tuple[np.ndarray, int, int]:
    """Outlier degree sequence (by node id), outlier-outlier and
    outlier-clustered edge counts."""
    out = c.is_singleton()[c.aligned_to(g)]
    e = g.edge_index_pairs()
    ou, ov = out[e[:, 0]], out[e[:, 1]]
    return g.degrees()[out], int(np.count_nonzero(ou & ov)), int(np.count_nonzero(ou ^ ov))


@dataclass
class StatEntry:
    name: str
    real: float | None
    synthetic: float | None
    distance: float | None
    kind: str


@dataclass
class EvalReport:
    entries: list[StatEntry] = field(default_factory=list)
    disconnected_cluster_ratio: float | None = None
    normalized_edit_distance: float | None = None

    def get(self, name: str) -> StatEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "format": REPORT_FORMAT,
            "entries": [asdict(e) for e in self.entries],
            "disconnected_cluster_ratio": self.disconnected_cluster_ratio,
            "normalized_edit_distance": self.normalized_edit_distance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> EvalReport:
        if d.get("format") != REPORT_FORMAT:
            raise InputError(f"expected format {REPORT_FORMAT!r}")
        return cls([StatEntry(**e) for e in d["entries"]],
                   d.get("disconnected_cluster_ratio"), d.get("normalized_edit_distance"))

    def csv_row(self) -> dict:
        row = {}
        for e in self.entries:
            row[f"{e.name}_real"] = e.real
            row[f"{e.name}_synthetic"] = e.synthetic
            row[f"{e.name}_distance"] = e.distance
        row["disconnected_cluster_ratio"] = self.disconnected_cluster_ratio
        row["normalized_edit_distance"] = self.normalized_edit_distance
        return row


def _align_degrees(ref: Graph, g: Graph) -> np.ndarray:
    if np.array_equal(ref.nodes, g.nodes):
        return g.degrees()
    extra = np.setdiff1d(g.nodes, ref.nodes)
    if len(extra):
        raise InputError(f"synthetic graph has nodes absent from the real graph: {extra[:5].tolist()}")
    out = np.zeros(ref.n, dtype=np.int64)
    out[np.searchsorted(ref.nodes, g.nodes)] = g.degrees()
    return out


def _on_nodes(ref: Graph, g: Graph) -> Graph:
    if np.array_equal(ref.nodes, g.nodes):
        return g
    _align_degrees(ref, g)
    return Graph.from_edges(g.edges(), nodes=ref.nodes)


def _rel(s, t):
    if s == 0:
        return 0.0 if t == 0 else None
    return relative_diff(s, t)


def _seq_rmse(a, b):
    return 0.0 if len(a) == 0 else rmse(a, b)


def full_report(g_real: Graph, c: Clustering, g_syn: Graph, threads: int = 1) -> EvalReport:
    g_syn = _on_nodes(g_real, g_syn)
    rep = EvalReport()
    add = rep.entries.append

    add(StatEntry("degree_sequence", None, None, _seq_rmse(g_real.degrees(), g_syn.degrees()), "rmse"))
    od_r, oo_r, oc_r = outlier_stats(g_real, c)
    od_s, oo_s, oc_s = outlier_stats(g_syn, c)
    add(StatEntry("outlier_degree_sequence", None, None, _seq_rmse(od_r, od_s), "rmse"))
    add(StatEntry("min_cut_sequence", None, None,
                  _seq_rmse(min_cut_sequence(g_real, c, threads), min_cut_sequence(g_syn, c, threads)), "rmse"))

    gr, lr = clustering_coefficients(g_real)
    gs, ls = clustering_coefficients(g_syn)
    add(StatEntry("global_clustering_coefficient", gr, gs, simple_diff(gr, gs), "simple"))
    add(StatEntry("mean_local_clustering_coefficient", lr, ls, simple_diff(lr, ls), "simple"))
    if g_real.edge_count and g_syn.edge_count:
        mr, ms = mixing_parameter(g_real, c), mixing_parameter(g_syn, c)
        add(StatEntry("mixing_parameter", mr, ms, simple_diff(mr, ms), "simple"))
    else:
        add(StatEntry("mixing_parameter", None, None, None, "simple"))
    if np.any(~c.is_singleton()):
        dr, ds = disconnected_ratio(g_real, c), disconnected_ratio(g_syn, c)
        add(StatEntry("disconnected_cluster_ratio", dr, ds, simple_diff(dr, ds), "simple"))
        rep.disconnected_cluster_ratio = ds
    else:
        add(StatEntry("disconnected_cluster_ratio", None, None, None, "simple"))
    if g_real.n:
        d_r, d_s = diameter(g_real), diameter(g_syn)
        add(StatEntry("diameter", d_r, d_s, _rel(d_r, d_s), "relative"))
    add(StatEntry("outlier_outlier_edges", oo_r, oo_s, _rel(oo_r, oo_s), "relative"))
    add(StatEntry("outlier_clustered_edges", oc_r, oc_s, _rel(oc_r, oc_s), "relative"))
    if g_real.edge_count:
        rep.normalized_edit_distance = normalized_edit_distance(g_real, g_syn)
    for e in rep.entries:
        for attr in ("real", "synthetic", "distance"):
            v = getattr(e, attr)
            if v is not None:
                v = float(v)
                setattr(e, attr, None if math.isnan(v) else v)
    return rep

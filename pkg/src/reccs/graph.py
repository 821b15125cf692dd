"""Undirected simple graphs, multigraphs and clusterings.

Graphs are stored in CSR form over a compact index ``0..n-1``; ``nodes`` maps
compact indices back to the (sorted, non-negative) original ids. All public
methods speak original ids; the ``*_index`` variants expose compact indices
for the array-level code elsewhere in the package.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cc


class InputError(ValueError):
    """Bad user-supplied data (unknown node, malformed file, ...)."""


class ParameterError(ValueError):
    """Parameters that cannot be realised (e.g. an infeasible connectivity target)."""


def _as_edge_array(edges) -> np.ndarray:
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError(f"edges must have shape (k, 2), got {arr.shape}")
    return arr


class Graph:
    """Immutable undirected simple graph.

    Construct with :meth:`from_edges`; self-loops and duplicate edges in the
    input are dropped.
    """

    __slots__ = ("nodes", "indptr", "indices", "_edges")

    def __init__(self, nodes: np.ndarray, indptr: np.ndarray, indices: np.ndarray):
        self.nodes = nodes
        self.indptr = indptr
        self.indices = indices
        self._edges = None
        for a in (nodes, indptr, indices):
            a.flags.writeable = False

    @classmethod
    def from_edges(cls, edges, nodes: Iterable[int] | np.ndarray | None = None) -> Graph:
        arr = _as_edge_array(edges)
        if nodes is None:
            node_arr = np.unique(arr)
        else:
            node_arr = np.unique(np.asarray(list(nodes) if not isinstance(nodes, np.ndarray) else nodes,
                                            dtype=np.int64))
            if arr.size and not np.all(np.isin(np.unique(arr), node_arr, assume_unique=True)):
                raise InputError("edge endpoint not in node set")
        if node_arr.size and node_arr[0] < 0:
            raise InputError("node ids must be non-negative")
        idx = np.searchsorted(node_arr, arr)
        return cls._from_index_edges(node_arr, idx[:, 0], idx[:, 1])

    @classmethod
    def _from_index_edges(cls, nodes: np.ndarray, u: np.ndarray, v: np.ndarray) -> Graph:
        """Build from compact-index endpoint arrays (loops/duplicates tolerated)."""
        n = len(nodes)
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        keep = u != v
        lo = np.minimum(u[keep], v[keep])
        hi = np.maximum(u[keep], v[keep])
        keys = np.unique(lo * n + hi) if n else np.empty(0, dtype=np.int64)
        lo, hi = np.divmod(keys, n) if n else (keys, keys)
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        indices = dst[order]
        counts = np.bincount(src, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        g = cls(nodes.astype(np.int64, copy=False), indptr, indices.astype(np.int64, copy=False))
        pairs = np.stack([lo, hi], axis=1)
        pairs.flags.writeable = False
        g._edges = pairs
        return g

    @classmethod
    def empty(cls, nodes: Iterable[int] = ()) -> Graph:
        return cls.from_edges(np.empty((0, 2), dtype=np.int64), nodes=np.asarray(list(nodes), dtype=np.int64))

    # -- size ---------------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    m = edge_count

    def __len__(self) -> int:
        return self.n

    # -- lookups ------------------------------------------------------------
    def index_of(self, ids) -> np.ndarray:
        """Compact indices for original ids; raises InputError on unknown ids."""
        ids = np.asarray(ids, dtype=np.int64)
        if ids.size == 0:
            return np.zeros(ids.shape, dtype=np.int64)
        pos = np.searchsorted(self.nodes, ids)
        pos_c = np.minimum(pos, max(self.n - 1, 0))
        if self.n == 0 or np.any(self.nodes[pos_c] != ids):
            bad = ids[(pos >= self.n) | (self.nodes[pos_c] != ids)] if self.n else ids
            raise InputError(f"unknown node id(s): {bad.ravel()[:5].tolist()}")
        return pos

    def __contains__(self, v: int) -> bool:
        i = np.searchsorted(self.nodes, v)
        return i < self.n and self.nodes[i] == v

    def degrees(self) -> np.ndarray:
        """Degree per node, aligned with ``nodes``."""
        return np.diff(self.indptr)

    def degree(self, v: int) -> int:
        i = int(self.index_of(v))
        return int(self.indptr[i + 1] - self.indptr[i])

    def neighbors_index(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def neighbors(self, v: int) -> np.ndarray:
        return self.nodes[self.neighbors_index(int(self.index_of(v)))]

    def has_edge(self, u: int, v: int) -> bool:
        if u not in self or v not in self:
            return False
        i, j = self.index_of([u, v])
        row = self.neighbors_index(int(i))
        k = np.searchsorted(row, j)
        return bool(k < len(row) and row[k] == j)

    def edge_index_pairs(self) -> np.ndarray:
        """(m, 2) compact-index edges with ``u < v``, sorted lexicographically."""
        if self._edges is None:
            src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
            keep = src < self.indices
            pairs = np.stack([src[keep], self.indices[keep]], axis=1)
            pairs.flags.writeable = False
            self._edges = pairs
        return self._edges

    def edges(self) -> np.ndarray:
        """(m, 2) original-id edges with ``u < v``, sorted lexicographically."""
        return self.nodes[self.edge_index_pairs()]

    def edge_keys(self) -> np.ndarray:
        """Sorted ``int64`` keys identifying each edge by its original ids."""
        e = self.edges()
        return _pair_keys(e[:, 0], e[:, 1])

    def to_csr(self) -> csr_matrix:
        data = np.ones(len(self.indices), dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    # -- derived graphs -----------------------------------------------------
    def with_edges(self, extra) -> Graph:
        """New graph with ``extra`` (original-id edges) added."""
        extra = _as_edge_array(extra)
        if extra.size == 0:
            return self
        idx = self.index_of(extra)
        e = self.edge_index_pairs()
        return Graph._from_index_edges(self.nodes, np.concatenate([e[:, 0], idx[:, 0]]),
                                       np.concatenate([e[:, 1], idx[:, 1]]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (np.array_equal(self.nodes, other.nodes)
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def _pair_keys(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    if hi.size and hi.max() >= 2**31:
        raise InputError("node ids >= 2**31 are not supported for edge keys")
    return (lo << 32) | hi


class MultiGraph:
    """Undirected multigraph; self-loops and repeated pairs allowed.

    Only a node array and an edge array (construction order) are stored.
    """

    __slots__ = ("nodes", "edges")

    def __init__(self, nodes, edges):
        self.nodes = np.unique(np.asarray(nodes, dtype=np.int64))
        self.edges = _as_edge_array(edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"MultiGraph(n={len(self.nodes)}, m={self.edge_count})"


def as_multigraph(g: Graph) -> MultiGraph:
    return MultiGraph(g.nodes, g.edges())


def simplify(mg: MultiGraph) -> Graph:
    """Drop self-loops and collapse parallel edges; keeps isolated nodes."""
    return Graph.from_edges(mg.edges, nodes=mg.nodes)


def induced_subgraph(g: Graph, nodes) -> Graph:
    """Subgraph on ``nodes`` holding every edge of ``g`` with both ends inside."""
    sel = np.unique(np.asarray(list(nodes) if not isinstance(nodes, np.ndarray) else nodes,
                               dtype=np.int64))
    idx = g.index_of(sel)
    mask = np.zeros(g.n, dtype=bool)
    mask[idx] = True
    e = g.edge_index_pairs()
    keep = mask[e[:, 0]] & mask[e[:, 1]]
    remap = np.cumsum(mask) - 1
    return Graph._from_index_edges(sel, remap[e[keep, 0]], remap[e[keep, 1]])


def component_labels(g: Graph) -> np.ndarray:
    """Component id per node; components numbered by their smallest node."""
    if g.n == 0:
        return np.empty(0, dtype=np.int64)
    _, lab = _cc(g.to_csr(), directed=False)
    # scipy numbers components in order of first-seen index, i.e. by smallest node
    return lab.astype(np.int64)


def connected_components(g: Graph) -> list[set[int]]:
    """Maximal connected node sets, ordered by smallest member id."""
    if g.n == 0:
        return []
    lab = component_labels(g)
    order = np.argsort(lab, kind="stable")
    bounds = np.flatnonzero(np.diff(lab[order])) + 1
    return [set(g.nodes[grp].tolist()) for grp in np.split(order, bounds)]


def is_connected(g: Graph) -> bool:
    return g.n > 0 and int(component_labels(g).max()) == 0


class Clustering:
    """Total assignment of nodes to clusters.

    Clusters are indexed densely in order of their smallest member id.
    ``labels[r]`` is the user-facing label of cluster ``r``; ``None`` marks
    a singleton that was synthesised for a node absent from the input file.
    """

    __slots__ = ("nodes", "assignment", "labels", "_sizes")

    def __init__(self, nodes, assignment, labels: Sequence | None = None):
        nodes = np.asarray(nodes, dtype=np.int64)
        assignment = np.asarray(assignment, dtype=np.int64)
        if nodes.shape != assignment.shape:
            raise InputError("nodes and assignment must align")
        order = np.argsort(nodes, kind="stable")
        nodes, assignment = nodes[order], assignment[order]
        if nodes.size and np.any(np.diff(nodes) == 0):
            raise InputError("duplicate node in clustering")
        # canonical cluster order: by smallest member
        uniq, first, inv = np.unique(assignment, return_index=True, return_inverse=True)
        rank = np.empty(len(uniq), dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(len(uniq))
        self.nodes = nodes
        self.assignment = rank[inv.ravel()]
        if labels is None:
            labs = [str(x) for x in uniq]
        else:
            labs = [labels[int(x)] for x in uniq]
        self.labels = [None] * len(uniq)
        for old, new in enumerate(rank):
            self.labels[new] = labs[old]
        self._sizes = np.bincount(self.assignment, minlength=len(uniq))
        self.nodes.flags.writeable = False
        self.assignment.flags.writeable = False

    @classmethod
    def from_mapping(cls, mapping: dict, nodes=None) -> Clustering:
        """Build from ``{node: label}``; ``nodes`` not in the mapping become singletons."""
        keys = np.asarray(sorted(mapping), dtype=np.int64)
        label_list: list = []
        label_pos: dict = {}
        assign = []
        for k in keys.tolist():
            lab = mapping[k]
            if lab not in label_pos:
                label_pos[lab] = len(label_list)
                label_list.append(str(lab))
            assign.append(label_pos[lab])
        all_nodes = keys
        if nodes is not None:
            extra = np.setdiff1d(np.asarray(list(nodes) if not isinstance(nodes, np.ndarray) else nodes,
                                            dtype=np.int64), keys)
            all_nodes = np.concatenate([keys, extra])
            assign.extend(range(len(label_list), len(label_list) + len(extra)))
            label_list.extend([None] * len(extra))
        return cls(all_nodes, np.asarray(assign, dtype=np.int64), label_list)

    @property
    def n_clusters(self) -> int:
        return len(self.labels)

    def sizes(self) -> np.ndarray:
        return self._sizes

    def is_singleton(self) -> np.ndarray:
        """Per-cluster mask of singleton clusters."""
        return self._sizes == 1

    def outlier_mask(self) -> np.ndarray:
        """Per-node mask of nodes that sit in singleton clusters."""
        return self.is_singleton()[self.assignment]

    def outliers(self) -> np.ndarray:
        return self.nodes[self.outlier_mask()]

    def clustered_nodes(self) -> np.ndarray:
        return self.nodes[~self.outlier_mask()]

    def members(self, r: int) -> np.ndarray:
        return self.nodes[self.assignment == r]

    def member_lists(self) -> list[np.ndarray]:
        """Compact positions (into ``nodes``) of each cluster's members."""
        order = np.argsort(self.assignment, kind="stable")
        bounds = np.cumsum(self._sizes)[:-1]
        return np.split(order, bounds)

    def cluster_of(self, v: int) -> int:
        i = np.searchsorted(self.nodes, v)
        if i >= len(self.nodes) or self.nodes[i] != v:
            raise InputError(f"node {v} not clustered")
        return int(self.assignment[i])

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.nodes.tolist(), self.assignment.tolist()))

    def restrict(self, nodes) -> Clustering:
        """Clustering induced on a subset of nodes (labels kept)."""
        nodes = np.asarray(nodes, dtype=np.int64)
        pos = np.searchsorted(self.nodes, nodes)
        if nodes.size and (pos.max() >= len(self.nodes) or np.any(self.nodes[pos] != nodes)):
            raise InputError("restrict() with nodes outside the clustering")
        return Clustering(nodes, self.assignment[pos], self.labels)

    def aligned_to(self, g: Graph) -> np.ndarray:
        """Cluster index per compact node of ``g``."""
        if np.array_equal(self.nodes, g.nodes):
            return self.assignment
        pos = np.searchsorted(self.nodes, g.nodes)
        if g.n and (pos.max() >= len(self.nodes) or np.any(self.nodes[pos] != g.nodes)):
            raise InputError("clustering does not cover the graph")
        return self.assignment[pos]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Clustering):
            return NotImplemented
        return (np.array_equal(self.nodes, other.nodes)
                and np.array_equal(self.assignment, other.assignment)
                and self.labels == other.labels)

    __hash__ = None

    def __repr__(self) -> str:
        return (f"Clustering(nodes={len(self.nodes)}, clusters={self.n_clusters}, "
                f"singletons={int(self.is_singleton().sum())})")


def cluster_edge_groups(g: Graph, assignment: np.ndarray, n_clusters: int):
    """Group the intra-cluster edges of ``g`` by cluster.

    Returns ``(members, local, bounds)``: ``members[r]`` are the compact node
    indices of cluster ``r`` (ascending), ``local`` is an (k, 2) array of
    intra-cluster edges in cluster-local indices ordered by cluster, and the
    edges of cluster ``r`` are ``local[bounds[r]:bounds[r+1]]``.
    """
    order = np.argsort(assignment, kind="stable")
    sizes = np.bincount(assignment, minlength=n_clusters)
    starts = np.zeros(n_clusters + 1, dtype=np.int64)
    np.cumsum(sizes, out=starts[1:])
    members = np.split(order, starts[1:-1]) if n_clusters else []
    local_idx = np.empty(len(assignment), dtype=np.int64)
    local_idx[order] = np.arange(len(order)) - starts[assignment[order]]
    e = g.edge_index_pairs()
    cu = assignment[e[:, 0]]
    intra = cu == assignment[e[:, 1]]
    ie = e[intra]
    ic = cu[intra]
    eo = np.argsort(ic, kind="stable")
    local = local_idx[ie[eo]]
    bounds = np.zeros(n_clusters + 1, dtype=np.int64)
    np.cumsum(np.bincount(ic, minlength=n_clusters), out=bounds[1:])
    return members, local, bounds

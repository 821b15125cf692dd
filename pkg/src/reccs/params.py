"""Parameter extraction from a clustered network."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import Clustering, Graph, InputError, ParameterError, cluster_edge_groups, induced_subgraph
from .mincut import cut_kernel


@dataclass(eq=False)
class NetworkParams:
    """Inputs to block-model generation.

    ``block_edges`` is a sparse upper triangle: rows ``(r, s, count)`` with
    ``r <= s`` and ``count > 0``, sorted. ``connectivity[r]`` is the edge
    connectivity target of cluster ``r`` (0 for singletons).
    """

    node_ids: np.ndarray
    membership: np.ndarray
    cluster_ids: list
    degrees: np.ndarray
    block_edges: np.ndarray
    connectivity: np.ndarray

    def __post_init__(self):
        self.node_ids = np.asarray(self.node_ids, dtype=np.int64)
        self.membership = np.asarray(self.membership, dtype=np.int64)
        self.degrees = np.asarray(self.degrees, dtype=np.int64)
        be = np.asarray(self.block_edges, dtype=np.int64)
        self.block_edges = be.reshape(-1, 3) if be.size else np.empty((0, 3), dtype=np.int64)
        self.connectivity = np.asarray(self.connectivity, dtype=np.int64)
        self.cluster_ids = list(self.cluster_ids)

    @property
    def n_clusters(self) -> int:
        return len(self.cluster_ids)

    def cluster_sizes(self) -> np.ndarray:
        return np.bincount(self.membership, minlength=self.n_clusters)

    def clustering(self) -> Clustering:
        return Clustering(self.node_ids, self.membership, self.cluster_ids)

    def block_matrix(self) -> np.ndarray:
        """Dense symmetric block matrix (only sensible for few clusters)."""
        k = self.n_clusters
        B = np.zeros((k, k), dtype=np.int64)
        r, s, c = self.block_edges.T
        B[r, s] = c
        B[s, r] = c
        return B

    def block_count(self, r: int, s: int) -> int:
        r, s = min(r, s), max(r, s)
        be = self.block_edges
        hit = np.flatnonzero((be[:, 0] == r) & (be[:, 1] == s))
        return int(be[hit[0], 2]) if hit.size else 0

    def total_edges(self) -> int:
        return int(self.block_edges[:, 2].sum())

    def inter_edges(self) -> int:
        be = self.block_edges
        return int(be[be[:, 0] != be[:, 1], 2].sum())

    def validate(self) -> None:
        """Raise ParameterError on internally inconsistent parameters."""
        n = len(self.node_ids)
        if self.membership.shape != (n,) or self.degrees.shape != (n,):
            raise ParameterError("node arrays must align")
        if n and (np.any(np.diff(self.node_ids) <= 0) or self.node_ids[0] < 0):
            raise ParameterError("node ids must be sorted, unique and non-negative")
        if n and (self.membership.min() < 0 or self.membership.max() >= self.n_clusters):
            raise ParameterError("membership refers to unknown cluster")
        if np.any(self.degrees < 0):
            raise ParameterError("negative target degree")
        be = self.block_edges
        if be.size and (np.any(be[:, 0] > be[:, 1]) or np.any(be[:, 2] < 0)
                        or be[:, 1].max() >= self.n_clusters):
            raise ParameterError("malformed block edge table")
        if self.connectivity.shape != (self.n_clusters,):
            raise ParameterError("connectivity must have one entry per cluster")
        sizes = self.cluster_sizes()
        for r in np.flatnonzero((sizes > 1) & (self.connectivity > sizes - 1)).tolist():
            raise ParameterError(
                f"cluster {self.cluster_ids[r]!r}: connectivity {int(self.connectivity[r])} "
                f"exceeds |C|-1 = {int(sizes[r]) - 1}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, NetworkParams):
            return NotImplemented
        return (np.array_equal(self.node_ids, other.node_ids)
                and np.array_equal(self.membership, other.membership)
                and self.cluster_ids == other.cluster_ids
                and np.array_equal(self.degrees, other.degrees)
                and np.array_equal(self.block_edges, other.block_edges)
                and np.array_equal(self.connectivity, other.connectivity))

    __hash__ = None


@dataclass(eq=True)
class ParamSet:
    """Everything a pipeline run needs: step-1 params on the clustered
    subnetwork and step-2 params on the outlier-edge subnetwork."""

    clustered: NetworkParams
    outlier: NetworkParams


def block_edge_table(g: Graph, assignment: np.ndarray, n_clusters: int) -> np.ndarray:
    e = g.edge_index_pairs()
    a = assignment[e[:, 0]]
    b = assignment[e[:, 1]]
    keys = np.minimum(a, b) * max(n_clusters, 1) + np.maximum(a, b)
    uk, counts = np.unique(keys, return_counts=True)
    r, s = np.divmod(uk, max(n_clusters, 1))
    return np.stack([r, s, counts], axis=1).astype(np.int64).reshape(-1, 3)


def cluster_min_cuts(g: Graph, assignment: np.ndarray, n_clusters: int, threads: int = 1) -> np.ndarray:
    """Min cut of every cluster's induced subgraph; 0 for singletons and
    disconnected clusters."""
    members, local, bounds = cluster_edge_groups(g, assignment, n_clusters)
    out = np.zeros(n_clusters, dtype=np.int64)
    todo = [r for r in range(n_clusters) if len(members[r]) > 1]

    def one(r):
        return cut_kernel(len(members[r]), local[bounds[r]:bounds[r + 1]])[0]

    if threads > 1 and len(todo) > 1:
        with ThreadPoolExecutor(threads) as ex:
            vals = list(ex.map(one, todo))
    else:
        vals = [one(r) for r in todo]
    out[todo] = vals
    return out


def extract_params(g: Graph, c: Clustering, threads: int = 1) -> NetworkParams:
    """Degrees, block edge counts and per-cluster edge connectivity of ``g``."""
    if not np.array_equal(c.nodes, g.nodes):
        c = c.restrict(g.nodes)
    asg = c.assignment
    k = c.n_clusters
    return NetworkParams(
        node_ids=g.nodes.copy(),
        membership=asg.copy(),
        cluster_ids=list(c.labels),
        degrees=g.degrees().copy(),
        block_edges=block_edge_table(g, asg, k),
        connectivity=cluster_min_cuts(g, asg, k, threads),
    )


def split_real_network(g: Graph, c: Clustering) -> tuple[Graph, Graph]:
    """``(G_c, G*)``: the subgraph induced by clustered nodes, and the graph on
    all nodes holding exactly the edges with at least one outlier end."""
    out = c.is_singleton()[c.aligned_to(g)]
    g_c = induced_subgraph(g, g.nodes[~out])
    e = g.edge_index_pairs()
    keep = out[e[:, 0]] | out[e[:, 1]]
    g_star = Graph._from_index_edges(g.nodes, e[keep, 0], e[keep, 1])
    return g_c, g_star


def extract_param_set(g: Graph, c: Clustering, threads: int = 1) -> ParamSet:
    from .outliers import extract_outlier_params

    if not np.array_equal(c.nodes, g.nodes):
        if len(c.nodes) != g.n:
            raise InputError("clustering must cover every node of the graph")
        c.aligned_to(g)
    g_c, g_star = split_real_network(g, c)
    c_c = c.restrict(g_c.nodes)
    return ParamSet(extract_params(g_c, c_c, threads), extract_outlier_params(g_star, c))

"""Synthetic outlier edges (edges with at least one singleton-cluster end).

Three strategies, from least to most random:

S1  every outlier is its own block; outlier-outlier edges are reproduced
    exactly and each outlier keeps its edge count to every cluster.
S2  outliers form one block for the outlier-outlier edges (one-block
    degree-corrected sample); outlier-cluster edges as in S1.
S3  outliers form one block and the whole outlier-edge parameter set goes
    through the block-model sampler; only block totals are kept.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .graph import Clustering, Graph, InputError, MultiGraph, ParameterError, simplify
from .params import NetworkParams, block_edge_table
from .rng import as_generator
from .sbm import StubSampler, sample_sbm


class OutlierStrategy(str, Enum):
    S1 = "s1"
    S2 = "s2"
    S3 = "s3"


def extract_outlier_params(g_star: Graph, c: Clustering) -> NetworkParams:
    """Block parameters of the outlier-edge graph; every cluster (singletons
    included) is a block and degrees are degrees in ``g_star``."""
    asg = c.aligned_to(g_star)
    if len(c.nodes) != g_star.n:
        c = c.restrict(g_star.nodes)
        asg = c.assignment
    out = c.is_singleton()[asg]
    e = g_star.edge_index_pairs()
    bad = ~(out[e[:, 0]] | out[e[:, 1]])
    if np.any(bad):
        u, v = g_star.nodes[e[np.flatnonzero(bad)[0]]].tolist()
        raise InputError(f"edge {u}-{v} joins two clustered nodes; not an outlier edge")
    return NetworkParams(
        node_ids=g_star.nodes.copy(),
        membership=asg.copy(),
        cluster_ids=list(c.labels),
        degrees=g_star.degrees().copy(),
        block_edges=block_edge_table(g_star, asg, c.n_clusters),
        connectivity=np.zeros(c.n_clusters, dtype=np.int64),
    )


def _split_rows(p: NetworkParams):
    """Classify block rows into outlier-outlier and outlier-cluster rows.

    Returns ``(oo, oc, single_node)``: ``oo`` rows ``(o1, o2, count)`` and
    ``oc`` rows ``(o, cluster, count)`` in compact node indices for outliers,
    and the compact node index of each singleton block (-1 otherwise).
    """
    sizes = p.cluster_sizes()
    single = sizes == 1
    single_node = np.full(p.n_clusters, -1, dtype=np.int64)
    idx = np.flatnonzero(single[p.membership])
    single_node[p.membership[idx]] = idx
    be = p.block_edges
    be = be[be[:, 2] > 0]
    sr, ss = single[be[:, 0]], single[be[:, 1]]
    if np.any(~sr & ~ss):
        r, s, _ = be[np.flatnonzero(~sr & ~ss)[0]].tolist()
        raise ParameterError(f"clusters {p.cluster_ids[r]!r} and {p.cluster_ids[s]!r}: "
                             "outlier parameters may not have edges between clusters")
    oo_rows = be[sr & ss]
    oo = np.stack([single_node[oo_rows[:, 0]], single_node[oo_rows[:, 1]], oo_rows[:, 2]], axis=1)
    oc_rows = be[sr ^ ss]
    o_blk = np.where(sr[sr ^ ss], oc_rows[:, 0], oc_rows[:, 1])
    c_blk = np.where(sr[sr ^ ss], oc_rows[:, 1], oc_rows[:, 0])
    oc = np.stack([single_node[o_blk], c_blk, oc_rows[:, 2]], axis=1)
    return oo.reshape(-1, 3), oc.reshape(-1, 3), single_node


def _outlier_cluster_edges(p: NetworkParams, oc: np.ndarray, gen: np.random.Generator) -> np.ndarray:
    """For each ``(outlier, cluster, count)`` row pick ``count`` distinct
    cluster members, degree-proportionally. Returns compact-index pairs."""
    if len(oc) == 0:
        return np.empty((0, 2), dtype=np.int64)
    sampler = StubSampler(p.membership, p.degrees, p.n_clusters)
    counts = oc[:, 2]
    group = np.repeat(np.arange(len(oc)), counts)
    ends = sampler.draw(np.repeat(oc[:, 1], counts), gen)
    # rows whose with-replacement draw collided are redrawn without replacement
    n = len(p.node_ids)
    keys = group * n + ends
    srt = np.sort(keys)
    dup_groups = np.unique(srt[1:][np.diff(srt) == 0] // n) if len(srt) > 1 else np.empty(0, np.int64)
    if len(dup_groups):
        sizes = p.cluster_sizes()
        starts = np.concatenate([[0], np.cumsum(sizes)])
        by_cluster = np.lexsort((np.arange(n), p.membership))
        row_start = np.concatenate([[0], np.cumsum(counts)])
        for gi in dup_groups.tolist():
            _, cl, cnt = oc[gi].tolist()
            mem = by_cluster[starts[cl]:starts[cl + 1]]
            w = p.degrees[mem].astype(float)
            pos_mem = mem[w > 0]
            if cnt <= len(pos_mem):
                pick = gen.choice(pos_mem, size=cnt, replace=False, p=w[w > 0] / w[w > 0].sum())
            else:
                rest = mem[w <= 0]
                extra = gen.choice(rest, size=min(cnt - len(pos_mem), len(rest)), replace=False)
                pick = np.concatenate([pos_mem, extra])
            seg = np.full(cnt, -1, dtype=np.int64)
            seg[:len(pick)] = pick
            ends[row_start[gi]:row_start[gi + 1]] = seg
    outl = np.repeat(oc[:, 0], counts)
    keep = ends >= 0  # counts above the cluster size are capped
    return np.stack([outl[keep], ends[keep]], axis=1)


def _oo_edges(oo: np.ndarray) -> np.ndarray:
    if len(oo) == 0:
        return np.empty((0, 2), dtype=np.int64)
    return np.repeat(oo[:, :2], oo[:, 2], axis=0)


def strategy1(params: NetworkParams, rng) -> MultiGraph:
    gen = as_generator(rng)
    oo, oc, _ = _split_rows(params)
    pairs = np.concatenate([_oo_edges(oo), _outlier_cluster_edges(params, oc, gen)])
    return MultiGraph(params.node_ids, params.node_ids[pairs])


def strategy2(params: NetworkParams, rng) -> MultiGraph:
    gen = as_generator(rng)
    oo, oc, single_node = _split_rows(params)
    n = len(params.node_ids)
    oo_deg = np.bincount(oo[:, 0], weights=oo[:, 2], minlength=n) + \
        np.bincount(oo[:, 1], weights=oo[:, 2], minlength=n)
    outl = np.sort(single_node[single_node >= 0])
    block = NetworkParams(
        node_ids=params.node_ids[outl],
        membership=np.zeros(len(outl), dtype=np.int64),
        cluster_ids=["outliers"],
        degrees=oo_deg[outl].astype(np.int64),
        block_edges=[[0, 0, int(oo[:, 2].sum())]] if len(oo) else np.empty((0, 3)),
        connectivity=[0],
    )
    inner = sample_sbm(block, gen).edges
    cross = params.node_ids[_outlier_cluster_edges(params, oc, gen)]
    return MultiGraph(params.node_ids, np.concatenate([inner, cross]))


def strategy3(params: NetworkParams, rng) -> MultiGraph:
    gen = as_generator(rng)
    oo, oc, _ = _split_rows(params)
    sizes = params.cluster_sizes()
    single = sizes == 1
    # block 0 = all outliers, clusters keep their order after it
    new_id = np.zeros(params.n_clusters, dtype=np.int64)
    new_id[~single] = 1 + np.arange(int((~single).sum()))
    k = 1 + int((~single).sum())
    rows = []
    if len(oo):
        rows.append([0, 0, int(oo[:, 2].sum())])
    if len(oc):
        tot = np.bincount(new_id[oc[:, 1]], weights=oc[:, 2], minlength=k).astype(np.int64)
        rows.extend([0, s, int(tot[s])] for s in np.flatnonzero(tot).tolist())
    merged = NetworkParams(
        node_ids=params.node_ids,
        membership=new_id[params.membership],
        cluster_ids=["outliers"] + [params.cluster_ids[r] for r in np.flatnonzero(~single).tolist()],
        degrees=params.degrees,
        block_edges=np.asarray(rows, dtype=np.int64).reshape(-1, 3),
        connectivity=np.zeros(k, dtype=np.int64),
    )
    return sample_sbm(merged, gen)


STRATEGIES = {
    OutlierStrategy.S1: strategy1,
    OutlierStrategy.S2: strategy2,
    OutlierStrategy.S3: strategy3,
}


def postprocess(n_star: MultiGraph | Graph, c: Clustering) -> tuple[Graph, Clustering]:
    """Simplify and hand back the original clustering (outliers as singletons)."""
    g = simplify(n_star) if isinstance(n_star, MultiGraph) else n_star
    return g, c.restrict(g.nodes)


def generate_outliers(params: NetworkParams, strategy, rng) -> Graph:
    strategy = OutlierStrategy(strategy)
    mg = STRATEGIES[strategy](params, rng)
    g, _ = postprocess(mg, params.clustering())
    return g

"""Generator for "real" clustered test networks.

Each cluster is a cycle over its members plus degree-skewed chords, so every
cluster is connected with edge connectivity >= 2 and many members keep an
intra-cluster degree of exactly 2. Inter-cluster edges and outlier edges are
added on top with the same skewed node weights. Node ids are sparse.
"""

from __future__ import annotations

import numpy as np

from reccs.graph import Clustering, Graph


def clustered_network(n_nodes=1000, n_clusters=20, outlier_frac=0.1, chord_deg=2.0,
                      mixing=0.15, outlier_deg=3.0, seed=0, min_size=10):
    rng = np.random.default_rng(seed)
    ids = np.sort(rng.choice(8 * n_nodes, size=n_nodes, replace=False))
    perm = rng.permutation(n_nodes)
    n_out = int(round(outlier_frac * n_nodes))
    n_cl = n_nodes - n_out
    spare = n_cl - min_size * n_clusters
    if spare < 0:
        raise ValueError("too many clusters for the node count")
    sizes = min_size + rng.multinomial(spare, rng.dirichlet(np.ones(n_clusters) * 2.0))
    weight = rng.pareto(2.5, size=n_nodes) + 1.0
    membership = np.full(n_nodes, -1, dtype=np.int64)
    edges = []
    start = 0
    for r, s in enumerate(sizes.tolist()):
        mem = perm[start:start + s]
        start += s
        membership[mem] = r
        edges.append(np.stack([mem, np.roll(mem, 1)], axis=1))
        n_chords = int(round(chord_deg * s / 2))
        if n_chords:
            w = weight[mem] / weight[mem].sum()
            edges.append(np.stack([rng.choice(mem, n_chords, p=w), rng.choice(mem, n_chords, p=w)], axis=1))
    intra = sum(len(e) for e in edges)
    clustered = perm[:n_cl]
    n_inter = int(round(mixing * intra))
    if n_inter and n_clusters > 1:
        w = weight[clustered] / weight[clustered].sum()
        a = rng.choice(clustered, n_inter, p=w)
        b = rng.choice(clustered, n_inter, p=w)
        keep = membership[a] != membership[b]
        edges.append(np.stack([a[keep], b[keep]], axis=1))
    outl = perm[n_cl:]
    if n_out:
        deg = 1 + rng.poisson(outlier_deg - 1, size=n_out)
        src = np.repeat(outl, deg)
        w = weight / weight.sum()
        dst = rng.choice(n_nodes, len(src), p=w)
        edges.append(np.stack([src, dst], axis=1))
    e = np.concatenate(edges)
    g = Graph.from_edges(ids[e], nodes=ids)
    labels = membership.copy()
    labels[outl] = n_clusters + np.arange(n_out)
    c = Clustering(ids, labels, [f"c{r}" for r in range(n_clusters)] + [None] * n_out)
    return g, c


def fixture_suite(count=20, seed=2024):
    """Desk-scale fixtures: 500-5000 nodes, 10-50 clusters."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(500, 5001))
        k = int(rng.integers(10, min(50, n // 12) + 1))
        out.append(clustered_network(n_nodes=n, n_clusters=k, outlier_frac=float(rng.uniform(0.02, 0.2)),
                                     chord_deg=float(rng.uniform(1.0, 4.0)), mixing=float(rng.uniform(0.05, 0.3)),
                                     seed=int(rng.integers(2**31))))
    return out


def large_network(n_nodes=1_000_000, n_edges=10_000_000, mean_size=50, outlier_frac=0.05, mixing=0.2, seed=0,
                  oversample=1.25):
    """Vectorised variant of :func:`clustered_network` for scale tests.

    Returns ``(edges, node_ids, labels)`` with ``labels[i] == -1`` for
    outliers. About ``oversample * n_edges`` pairs are drawn and then
    deduplicated, leaving roughly ``n_edges`` distinct edges.
    """
    rng = np.random.default_rng(seed)
    n_out = int(outlier_frac * n_nodes)
    n_cl = n_nodes - n_out
    sizes = np.maximum(10, rng.geometric(1.0 / mean_size, size=2 * n_cl // mean_size))
    sizes = sizes[np.cumsum(sizes) <= n_cl]
    sizes[-1] += n_cl - sizes.sum()
    k = len(sizes)
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    perm = rng.permutation(n_nodes)
    clustered, outl = perm[:n_cl], perm[n_cl:]
    label_of_pos = np.repeat(np.arange(k), sizes)
    pos = np.arange(n_cl)
    nxt = np.where(pos + 1 < starts[label_of_pos] + sizes[label_of_pos], pos + 1, starts[label_of_pos])
    ring = np.stack([clustered, clustered[nxt]], axis=1)
    w = rng.pareto(2.5, size=n_nodes) + 1.0
    n_out_edges = 3 * n_out
    remaining = max(int(oversample * n_edges) - n_cl - n_out_edges, 0)
    n_inter = int(mixing * remaining)
    n_chord = remaining - n_inter
    # chords: a cluster proportional to size, endpoints weight-proportional inside it
    wc = w[clustered]
    cum = np.cumsum(wc)
    lo = np.concatenate([[0.0], cum])[starts]
    hi = cum[starts + sizes - 1]
    cl = rng.choice(k, n_chord, p=sizes / sizes.sum())
    a = np.searchsorted(cum, lo[cl] + rng.random(n_chord) * (hi[cl] - lo[cl]), side="right")
    b = np.searchsorted(cum, lo[cl] + rng.random(n_chord) * (hi[cl] - lo[cl]), side="right")
    a = np.minimum(a, starts[cl] + sizes[cl] - 1)
    b = np.minimum(b, starts[cl] + sizes[cl] - 1)
    chords = np.stack([clustered[a], clustered[b]], axis=1)
    tot = cum[-1]
    a = np.minimum(np.searchsorted(cum, rng.random(n_inter) * tot, side="right"), n_cl - 1)
    b = np.minimum(np.searchsorted(cum, rng.random(n_inter) * tot, side="right"), n_cl - 1)
    inter = np.stack([clustered[a], clustered[b]], axis=1)
    inter = inter[label_of_pos[a] != label_of_pos[b]]
    src = np.repeat(outl, 3)
    dst = rng.integers(0, n_nodes, size=len(src))
    labels = np.full(n_nodes, -1, dtype=np.int64)
    labels[clustered] = label_of_pos
    ids = np.arange(n_nodes, dtype=np.int64)
    e = np.concatenate([ring, chords, inter, np.stack([src, dst], axis=1)])
    e = np.sort(e[e[:, 0] != e[:, 1]], axis=1)
    e = np.unique(e[:, 0] * n_nodes + e[:, 1])
    return np.stack(np.divmod(e, n_nodes), axis=1), ids, labels


def write_large(dir_path, **kw):
    """Write the :func:`large_network` fixture as an edge list and clustering file."""
    from pathlib import Path

    d = Path(dir_path)
    edges, ids, labels = large_network(**kw)
    g_path, c_path = d / "large_graph.txt", d / "large_clustering.tsv"
    with open(g_path, "w") as f:
        f.write("\n".join(f"{u} {v}" for u, v in edges.tolist()))
        f.write("\n")
    keep = labels >= 0
    with open(c_path, "w") as f:
        f.write("\n".join(f"{v}\tc{l}" for v, l in zip(ids[keep].tolist(), labels[keep].tolist())))
        f.write("\n")
    return g_path, c_path

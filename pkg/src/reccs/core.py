"""RECCS: add edges to a simplified SBM sample until every cluster reaches its
edge-connectivity target, then spend leftover degree on extra edges.

Phase 1 works cluster by cluster (stages 1-3); each cluster owns a private
random stream and touches only its own nodes, so clusters can be processed
in any order or concurrently. Phase 2 is one sequential pass over the global
residual-degree state, in two variants:

* ``v1`` pairs any two nodes with residual degree;
* ``v2`` does the same but stops adding inter-cluster edges once the target
  inter-cluster count of the input has been reached.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import random

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

from .graph import Clustering, Graph, ParameterError, cluster_edge_groups
from .mincut import cut_kernel
from .params import NetworkParams
from .rng import RngStream, as_generator

PHASE2_VARIANTS = ("v1", "v2")
_RETRIES = 32


class ReccsError(RuntimeError):
    pass


@dataclass
class ReccsConfig:
    phase2_variant: str = "v1"
    master_seed: int = 0
    max_stage3_iterations: int = 100_000
    threads: int = 1

    def __post_init__(self):
        if self.phase2_variant not in PHASE2_VARIANTS:
            raise ValueError(f"phase2_variant must be one of {PHASE2_VARIANTS}")
        if self.max_stage3_iterations < 1:
            raise ValueError("max_stage3_iterations must be >= 1")


@dataclass
class ReccsStats:
    stage1_edges: int = 0
    stage2_edges: int = 0
    stage3_edges: int = 0
    stage3_iterations: int = 0
    phase2_edges: int = 0
    inter_target: int = 0
    inter_after_phase1: int = 0
    inter_final: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


class AvailableDegree:
    """Target minus current degree, per compact node index of the working graph."""

    def __init__(self, target: np.ndarray, current: np.ndarray):
        self.target = np.asarray(target, dtype=np.int64).copy()
        self.current = np.asarray(current, dtype=np.int64).copy()

    @classmethod
    def from_graph(cls, p: NetworkParams, n: Graph) -> AvailableDegree:
        return cls(_targets_for(p, n), n.degrees())

    def residual(self) -> np.ndarray:
        return self.target - self.current

    def available(self) -> np.ndarray:
        return np.maximum(self.residual(), 0)

    def add_edges_index(self, pairs: np.ndarray) -> None:
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        self.current += np.bincount(pairs.ravel(), minlength=len(self.current))


def _targets_for(p: NetworkParams, n: Graph) -> np.ndarray:
    if np.array_equal(p.node_ids, n.nodes):
        return p.degrees
    pos = np.searchsorted(p.node_ids, n.nodes)
    if n.n and (pos.max() >= len(p.node_ids) or np.any(p.node_ids[pos] != n.nodes)):
        raise ParameterError("parameters do not cover the graph's nodes")
    return p.degrees[pos]


def connectivity_targets(p: NetworkParams, c: Clustering) -> np.ndarray:
    """Per-cluster target ``max(k(C), 1)`` in ``c``'s cluster order, checked
    against ``|C| - 1``."""
    pc = p.clustering()
    sizes = c.sizes()
    k = np.ones(c.n_clusters, dtype=np.int64)
    if pc == c:
        k = np.maximum(p.connectivity, 1)
    else:
        # match clusters through their smallest member
        _, first = np.unique(c.assignment, return_index=True)
        pos = np.searchsorted(p.node_ids, c.nodes[first])
        k = np.maximum(p.connectivity[p.membership[pos]], 1)
    for r in np.flatnonzero((sizes > 1) & (k > sizes - 1)).tolist():
        raise ParameterError(
            f"cluster {c.labels[r]!r}: connectivity target {int(k[r])} is infeasible "
            f"for {int(sizes[r])} nodes")
    return k


class _ClusterWork:
    """Mutable cluster-local state owned by a single worker."""

    def __init__(self, size: int, local_edges: np.ndarray, residual, rnd: random.Random):
        self.size = size
        self.adj = [set() for _ in range(size)]
        for a, b in local_edges.tolist():
            self.adj[a].add(b)
            self.adj[b].add(a)
        self.edges = [tuple(e) for e in local_edges.tolist()]
        self.res = list(residual)
        self.rnd = rnd
        self.added: list[tuple[int, int]] = []
        self.pool = [x for x in range(size) if self.res[x] > 0]

    def add(self, a: int, b: int) -> None:
        self.adj[a].add(b)
        self.adj[b].add(a)
        self.edges.append((a, b))
        self.added.append((a, b))
        self.res[a] -= 1
        self.res[b] -= 1

    def _ok(self, v: int, x: int) -> bool:
        return x != v and x not in self.adj[v]

    def _draw(self, v: int, pool: list[int], alive, good) -> int | None:
        """Random ``x`` in ``pool`` with ``good(x)`` that can be joined to ``v``.

        Entries failing ``alive`` are pruned lazily. Small pools are scanned
        exhaustively after the random tries, large ones are not.
        """
        rnd = self.rnd
        for _ in range(16):
            if not pool:
                return None
            i = rnd.randrange(len(pool))
            x = pool[i]
            if not alive(x):
                pool[i] = pool[-1]
                pool.pop()
                continue
            if good(x) and self._ok(v, x):
                return x
        if len(pool) > 256:
            return None
        cands = [x for x in pool if alive(x) and good(x) and self._ok(v, x)]
        return rnd.choice(cands) if cands else None

    def pick_partner(self, v: int, k: int = 0, lack: list[int] | None = None) -> int | None:
        """Random non-neighbour of ``v``. Preference: residual degree and
        still below ``k`` neighbours, residual degree, below ``k``, anything."""
        def has_res(x):
            return self.res[x] > 0

        def short(x):
            return len(self.adj[x]) < k

        def anything(x):
            return True

        if lack is not None:
            x = self._draw(v, lack, short, has_res)
            if x is not None:
                return x
        x = self._draw(v, self.pool, has_res, anything)
        if x is not None:
            return x
        if lack is not None:
            x = self._draw(v, lack, short, anything)
            if x is not None:
                return x
        rnd = self.rnd
        for _ in range(8):
            x = rnd.randrange(self.size)
            if self._ok(v, x):
                return x
        cands = [x for x in range(self.size) if self._ok(v, x)]
        return rnd.choice(cands) if cands else None

    def side_order(self, side: list[int]) -> list[int]:
        """Residual-degree nodes first (largest residual first, random ties),
        then the rest in random order."""
        rnd = self.rnd
        keyed = [(-self.res[x] if self.res[x] > 0 else 1, rnd.random(), x) for x in side]
        keyed.sort()
        return [x for _, _, x in keyed]

    def add_across(self, side_a: list[int], side_b: list[int], count: int) -> int:
        """Add up to ``count`` new edges between two disjoint node sets,
        round-robin over both sides. Returns the number added."""
        a_ord = self.side_order(side_a)
        b_ord = self.side_order(side_b)
        nb = len(b_ord)
        added = ia = jb = 0
        idle = 0
        while added < count and idle < len(a_ord):
            a = a_ord[ia % len(a_ord)]
            ia += 1
            for t in range(nb):
                b = b_ord[(jb + t) % nb]
                if b not in self.adj[a]:
                    self.add(a, b)
                    jb += t + 1
                    added += 1
                    idle = 0
                    break
            else:
                idle += 1
        return added

    def components(self) -> list[list[int]]:
        if not self.edges:
            return [[x] for x in range(self.size)]
        e = np.asarray(self.edges, dtype=np.int64)
        mat = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(self.size, self.size))
        _, lab = _cc(mat, directed=False)
        groups: dict[int, list[int]] = {}
        for x, l in enumerate(lab.tolist()):
            groups.setdefault(l, []).append(x)
        return list(groups.values())

    def cut(self, k: int) -> tuple[int, np.ndarray]:
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        return cut_kernel(self.size, e, bound=k)


def _stage1(w: _ClusterWork, k: int) -> int:
    before = len(w.added)
    order = list(range(w.size))
    w.rnd.shuffle(order)
    lack = [x for x in order if len(w.adj[x]) < k]
    for v in order:
        while len(w.adj[v]) < k:
            x = w.pick_partner(v, k, lack)
            if x is None:
                raise ParameterError(f"cannot give a node {k} neighbours in a cluster of {w.size}")
            w.add(v, x)
    return len(w.added) - before


def _stage2(w: _ClusterWork, k: int) -> int:
    comps = w.components()
    if len(comps) <= 1:
        return 0
    # largest first; ties go to the component holding the smallest node
    li = max(range(len(comps)), key=lambda i: (len(comps[i]), -comps[i][0]))
    largest = comps[li]
    added = 0
    for i, comp in enumerate(comps):
        if i != li:
            added += w.add_across(comp, largest, min(k, len(comp) * len(largest)))
    return added


def _stage3(w: _ClusterWork, k: int, max_iter: int, name) -> tuple[int, int]:
    added = 0
    for it in range(max_iter + 1):
        value, mask = w.cut(k)
        if value >= k:
            return added, it
        if it == max_iter:
            break
        side_a = np.flatnonzero(mask).tolist()
        side_b = np.flatnonzero(~mask).tolist()
        got = w.add_across(side_a, side_b, k - value)
        if got == 0:
            raise ReccsError(f"cluster {name!r}: no edge can be added across a cut of value {value}")
        added += got
    raise ReccsError(f"cluster {name!r}: edge connectivity {k} not reached after {max_iter} iterations")


def _cluster_phase1(size, local, residual, k, seed, max_iter, name, stages=(1, 2, 3)):
    """Run the requested phase-1 stages on one cluster.

    Returns ``(added local edges, per-stage counts, stage-3 iterations)``.
    """
    if size < 2:
        return [], (0, 0, 0), 0
    if stages == (1, 2, 3) and len(local):
        deg = np.bincount(local.ravel(), minlength=size)
        if deg.min() >= k and cut_kernel(size, local, bound=k)[0] >= k:
            return [], (0, 0, 0), 0
    w = _ClusterWork(size, local, residual, random.Random(seed))
    s1 = _stage1(w, k) if 1 in stages else 0
    s2 = _stage2(w, k) if 2 in stages else 0
    s3, iters = _stage3(w, k, max_iter, name) if 3 in stages else (0, 0)
    return w.added, (s1, s2, s3), iters


def _phase1(n: Graph, c: Clustering, ks: np.ndarray, avail: AvailableDegree, seeds, max_iter: int,
            threads: int = 1, stages=(1, 2, 3)):
    asg = c.aligned_to(n)
    members, local, bounds = cluster_edge_groups(n, asg, c.n_clusters)
    residual = avail.residual()

    def one(r):
        mem = members[r]
        return _cluster_phase1(len(mem), local[bounds[r]:bounds[r + 1]], residual[mem], int(ks[r]),
                               int(seeds[r]), max_iter, c.labels[r], stages)

    rs = range(c.n_clusters)
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(one, rs))
    else:
        results = [one(r) for r in rs]
    pairs = []
    counts = np.zeros(3, dtype=np.int64)
    iters = 0
    for r, (added, cnt, it) in zip(rs, results):
        if added:
            pairs.append(members[r][np.asarray(added, dtype=np.int64)])
        counts += cnt
        iters += it
    pairs = np.concatenate(pairs) if pairs else np.empty((0, 2), dtype=np.int64)
    avail.add_edges_index(pairs)
    return pairs, counts, iters


def _stage_wrapper(stage, n, c, p, avail, rng, max_iter=100_000):
    gen = as_generator(rng)
    ks = connectivity_targets(p, c)
    seeds = gen.integers(0, 2**63 - 1, size=c.n_clusters)
    pairs, _, _ = _phase1(n, c, ks, avail, seeds, max_iter, stages=(stage,))
    return [tuple(e) for e in n.nodes[pairs].tolist()]


def phase1_stage1_min_degree(n: Graph, c: Clustering, p: NetworkParams, avail: AvailableDegree, rng):
    """Give every node at least ``k(C)`` neighbours inside its cluster.

    Returns the added edges (original ids); ``avail`` is updated in place.
    """
    return _stage_wrapper(1, n, c, p, avail, rng)


def phase1_stage2_connect(n: Graph, c: Clustering, p: NetworkParams, avail: AvailableDegree, rng):
    """Join every non-largest component of each cluster to its largest one
    with ``min(k(C), feasible)`` edges."""
    return _stage_wrapper(2, n, c, p, avail, rng)


def phase1_stage3_connectivity(n: Graph, c: Clustering, p: NetworkParams, avail: AvailableDegree, rng,
                               max_iter: int = 100_000):
    """Repeatedly patch the current min cut of each cluster until it reaches ``k(C)``."""
    return _stage_wrapper(3, n, c, p, avail, rng, max_iter)


class _Pool:
    """Set of ints with O(1) insert/remove and uniform sampling."""

    __slots__ = ("items", "pos")

    def __init__(self, items=()):
        self.items = list(items)
        self.pos = {x: i for i, x in enumerate(self.items)}

    def __len__(self):
        return len(self.items)

    def discard(self, x):
        i = self.pos.pop(x, None)
        if i is None:
            return
        last = self.items.pop()
        if i < len(self.items):
            self.items[i] = last
            self.pos[last] = i

    def sample(self, rnd: random.Random):
        return self.items[rnd.randrange(len(self.items))]


def _phase2(n: Graph, residual: np.ndarray, rng, membership: np.ndarray | None = None,
            inter_budget: int | None = None) -> np.ndarray:
    """Pair residual-degree nodes; returns added compact-index pairs.

    With ``inter_budget`` set (v2) at most that many inter-cluster edges are
    added and ``membership`` must be given.
    """
    gen = as_generator(rng)
    rnd = random.Random(int(gen.integers(0, 2**63 - 1)))
    res_arr = np.asarray(residual, dtype=np.int64)
    avail_idx = np.flatnonzero(res_arr > 0)
    if len(avail_idx) < 2:
        return np.empty((0, 2), dtype=np.int64)
    nn = n.n
    # adjacency is only ever queried between two residual-degree nodes
    e = n.edge_index_pairs()
    on = res_arr > 0
    sub = e[on[e[:, 0]] & on[e[:, 1]]]
    eset = set((sub[:, 0] * nn + sub[:, 1]).tolist())
    res = dict(zip(avail_idx.tolist(), res_arr[avail_idx].tolist()))
    restricted = inter_budget is not None
    budget = int(inter_budget) if restricted else 0
    cl = dict(zip(avail_idx.tolist(), membership[avail_idx].tolist())) if restricted else None
    pool = _Pool(avail_idx.tolist())
    cpools: dict[int, _Pool] = {}
    if restricted:
        for x in avail_idx.tolist():
            cpools.setdefault(cl[x], _Pool()).items.append(x)
        for cp in cpools.values():
            cp.pos = {x: i for i, x in enumerate(cp.items)}

    # largest residual first, random tie-break
    order = avail_idx[np.lexsort((gen.random(len(avail_idx)), -res_arr[avail_idx]))].tolist()
    added: list[tuple[int, int]] = []

    def eligible(u, v):
        if v == u or res[v] <= 0:
            return False
        if (u * nn + v if u < v else v * nn + u) in eset:
            return False
        return not restricted or budget > 0 or cl[u] == cl[v]

    def drop(x):
        pool.discard(x)
        if restricted:
            cpools[cl[x]].discard(x)

    for u in order:
        while res[u] > 0:
            src = pool if (not restricted or budget > 0) else cpools[cl[u]]
            v = None
            for _ in range(_RETRIES):
                if len(src) < 2:
                    break
                x = src.sample(rnd)
                if eligible(u, x):
                    v = x
                    break
            if v is None:
                cands = list(src.items)
                rnd.shuffle(cands)
                for x in cands:
                    if eligible(u, x):
                        v = x
                        break
            if v is None:
                break
            eset.add(u * nn + v if u < v else v * nn + u)
            res[u] -= 1
            res[v] -= 1
            if restricted and cl[u] != cl[v]:
                budget -= 1
            added.append((u, v))
            if res[v] == 0:
                drop(v)
        drop(u)
    return np.asarray(added, dtype=np.int64).reshape(-1, 2)


def _inter_count(n: Graph, asg: np.ndarray) -> int:
    e = n.edge_index_pairs()
    return int(np.count_nonzero(asg[e[:, 0]] != asg[e[:, 1]]))


def phase2_v1(n: Graph, p: NetworkParams, avail: AvailableDegree, rng):
    """Add edges between residual-degree nodes until no eligible pair is left."""
    pairs = _phase2(n, avail.residual(), rng)
    avail.add_edges_index(pairs)
    return [tuple(e) for e in n.nodes[pairs].tolist()]


def phase2_v2(n: Graph, c: Clustering, p: NetworkParams, avail: AvailableDegree, rng):
    """Like :func:`phase2_v1` but inter-cluster additions stop once the
    target inter-cluster edge count of ``p`` is reached."""
    asg = c.aligned_to(n)
    budget = max(p.inter_edges() - _inter_count(n, asg), 0)
    pairs = _phase2(n, avail.residual(), rng, asg, budget)
    avail.add_edges_index(pairs)
    return [tuple(e) for e in n.nodes[pairs].tolist()]


def run_reccs_with_stats(n_c: Graph, c: Clustering, p: NetworkParams, cfg: ReccsConfig,
                         rng: RngStream | None = None) -> tuple[Graph, ReccsStats]:
    if rng is None:
        rng = RngStream(cfg.master_seed).child("reccs")
    c = c.restrict(n_c.nodes) if not np.array_equal(c.nodes, n_c.nodes) else c
    if np.any(c.is_singleton()):
        raise ParameterError("RECCS input clustering must not contain singleton clusters")
    asg = c.assignment
    ks = connectivity_targets(p, c)
    avail = AvailableDegree.from_graph(p, n_c)
    stats = ReccsStats(inter_target=p.inter_edges())

    seeds = rng.child("phase1").generator().integers(0, 2**63 - 1, size=c.n_clusters)
    p1, counts, iters = _phase1(n_c, c, ks, avail, seeds, cfg.max_stage3_iterations, cfg.threads)
    stats.stage1_edges, stats.stage2_edges, stats.stage3_edges = (int(x) for x in counts)
    stats.stage3_iterations = iters
    e = n_c.edge_index_pairs()
    g1 = Graph._from_index_edges(n_c.nodes, np.concatenate([e[:, 0], p1[:, 0]]),
                                 np.concatenate([e[:, 1], p1[:, 1]]))
    stats.inter_after_phase1 = _inter_count(g1, asg)

    gen2 = rng.child("phase2").generator()
    if cfg.phase2_variant == "v1":
        p2 = _phase2(g1, avail.residual(), gen2)
    else:
        budget = max(stats.inter_target - stats.inter_after_phase1, 0)
        p2 = _phase2(g1, avail.residual(), gen2, asg, budget)
    stats.phase2_edges = len(p2)
    if len(p2):
        e = g1.edge_index_pairs()
        out = Graph._from_index_edges(g1.nodes, np.concatenate([e[:, 0], p2[:, 0]]),
                                      np.concatenate([e[:, 1], p2[:, 1]]))
    else:
        out = g1
    stats.inter_final = _inter_count(out, asg)
    return out, stats


def run_reccs(n_c: Graph, c: Clustering, p: NetworkParams, cfg: ReccsConfig) -> Graph:
    """Both RECCS phases; the output contains every edge of ``n_c``."""
    return run_reccs_with_stats(n_c, c, p, cfg)[0]

"""Global minimum edge cut.

The solver is Stoer–Wagner's maximum-adjacency (MA) scan with the
Nagamochi–Ibaraki contraction rule: in each scan every edge whose MA
certificate ``q(e) = r(y) + w(e)`` reaches the current bound is contracted,
not just the final ``s-t`` pair. Candidate cuts are always "one super-node
versus the rest", so the witness is the member set of that super-node.

All work happens in a numba kernel over edge arrays; it releases the GIL so
callers may fan out over clusters with threads.
"""

from __future__ import annotations

from dataclasses import dataclass
import heapq

import numpy as np
from numba import njit

from .graph import Graph, InputError

BRUTE_FORCE_MAX_NODES = 20
_INF = np.iinfo(np.int64).max // 4


@dataclass(frozen=True)
class CutResult:
    value: int
    side_a: frozenset
    side_b: frozenset


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True, nogil=True)
def _mincut_kernel(n, src, dst, bound):
    """Return ``(value, witness_mask)``.

    With ``bound < inf`` the search stops as soon as a cut below ``bound`` is
    seen and otherwise only certifies ``min cut >= bound`` (``value`` is then
    some cut value ``>= bound``, not necessarily the minimum).
    """
    label = np.arange(n)
    witness = np.zeros(n, dtype=np.bool_)
    best = _INF
    cur_n = n
    u = src.copy()
    v = dst.copy()
    w = np.ones(len(src), dtype=np.int64)
    while cur_n > 1:
        # weighted degrees -> trivial cuts
        deg = np.zeros(cur_n, dtype=np.int64)
        for i in range(len(u)):
            deg[u[i]] += w[i]
            deg[v[i]] += w[i]
        for x in range(cur_n):
            if deg[x] < best:
                best = deg[x]
                for o in range(n):
                    witness[o] = label[o] == x
        if best == 0 or (bound < _INF and best < bound):
            return best, witness
        lam = best if best < bound else bound
        # CSR of the contracted graph
        indptr = np.zeros(cur_n + 1, dtype=np.int64)
        for i in range(len(u)):
            indptr[u[i] + 1] += 1
            indptr[v[i] + 1] += 1
        for x in range(cur_n):
            indptr[x + 1] += indptr[x]
        fill = indptr[:-1].copy()
        nbr = np.empty(2 * len(u), dtype=np.int64)
        nw = np.empty(2 * len(u), dtype=np.int64)
        for i in range(len(u)):
            a = u[i]
            b = v[i]
            nbr[fill[a]] = b
            nw[fill[a]] = w[i]
            fill[a] += 1
            nbr[fill[b]] = a
            nw[fill[b]] = w[i]
            fill[b] += 1
        # MA scan
        r = np.zeros(cur_n, dtype=np.int64)
        seen = np.zeros(cur_n, dtype=np.bool_)
        parent = np.arange(cur_n)
        heap = [(np.int64(0), np.int64(0))]
        scanned = 0
        while scanned < cur_n:
            if len(heap) == 0:
                # disconnected: the scanned part is a zero cut
                for o in range(n):
                    witness[o] = seen[label[o]]
                return np.int64(0), witness
            negr, x = heapq.heappop(heap)
            if seen[x] or -negr != r[x]:
                continue
            seen[x] = True
            scanned += 1
            for p in range(indptr[x], indptr[x + 1]):
                y = nbr[p]
                if seen[y]:
                    continue
                if r[y] + nw[p] >= lam:
                    ra = _find(parent, x)
                    rb = _find(parent, y)
                    if ra != rb:
                        if ra < rb:
                            parent[rb] = ra
                        else:
                            parent[ra] = rb
                r[y] += nw[p]
                heapq.heappush(heap, (-r[y], y))
        # relabel super-nodes by first appearance
        newid = np.full(cur_n, -1, dtype=np.int64)
        nxt = 0
        for x in range(cur_n):
            rt = _find(parent, x)
            if newid[rt] < 0:
                newid[rt] = nxt
                nxt += 1
        for x in range(cur_n):
            newid[x] = newid[_find(parent, x)]
        for o in range(n):
            label[o] = newid[label[o]]
        new_n = nxt
        # rebuild edge list, merging parallels
        keys = np.empty(len(u), dtype=np.int64)
        kw = np.empty(len(u), dtype=np.int64)
        k = 0
        for i in range(len(u)):
            a = newid[u[i]]
            b = newid[v[i]]
            if a == b:
                continue
            if a > b:
                a, b = b, a
            keys[k] = a * new_n + b
            kw[k] = w[i]
            k += 1
        keys = keys[:k]
        kw = kw[:k]
        order = np.argsort(keys, kind="mergesort")
        nu = np.empty(k, dtype=np.int64)
        nv = np.empty(k, dtype=np.int64)
        nwt = np.empty(k, dtype=np.int64)
        m2 = -1
        last = -1
        for j in range(k):
            key = keys[order[j]]
            if key != last:
                m2 += 1
                nu[m2] = key // new_n
                nv[m2] = key % new_n
                nwt[m2] = 0
                last = key
            nwt[m2] += kw[order[j]]
        u = nu[:m2 + 1]
        v = nv[:m2 + 1]
        w = nwt[:m2 + 1]
        cur_n = new_n
    return best, witness


def cut_kernel(n: int, edges: np.ndarray, bound: int | None = None) -> tuple[int, np.ndarray]:
    """Kernel entry on local indices ``0..n-1``; returns ``(value, side_a mask)``."""
    if n < 2:
        raise InputError("min cut needs at least two nodes")
    edges = np.ascontiguousarray(edges, dtype=np.int64).reshape(-1, 2)
    b = _INF if bound is None else int(bound)
    value, mask = _mincut_kernel(n, edges[:, 0].copy(), edges[:, 1].copy(), b)
    return int(value), mask


def _result(g: Graph, value: int, mask: np.ndarray) -> CutResult:
    return CutResult(value, frozenset(g.nodes[mask].tolist()), frozenset(g.nodes[~mask].tolist()))


def _check(g: Graph) -> None:
    if g.n < 2:
        raise InputError("min cut needs at least two nodes")


def global_min_cut(g: Graph) -> CutResult:
    """Exact global min cut of a connected graph with a witness partition."""
    _check(g)
    value, mask = cut_kernel(g.n, g.edge_index_pairs())
    if value == 0:
        raise InputError("min cut requires a connected graph")
    return _result(g, value, mask)


def min_cut_at_least(g: Graph, k: int) -> tuple[bool, CutResult | None]:
    """Decide ``min cut >= k``; on failure also return a cut of value ``< k``."""
    _check(g)
    value, mask = cut_kernel(g.n, g.edge_index_pairs(), bound=k)
    if value == 0:
        raise InputError("min cut requires a connected graph")
    if value >= k:
        return True, None
    return False, _result(g, value, mask)


def min_cut_value(g: Graph) -> int:
    """Min cut value, ``0`` when disconnected or smaller than two nodes."""
    if g.n < 2:
        return 0
    return cut_kernel(g.n, g.edge_index_pairs())[0]


def brute_force_min_cut(g: Graph) -> CutResult:
    """Enumerate every bipartition; test oracle for small graphs."""
    _check(g)
    if g.n > BRUTE_FORCE_MAX_NODES:
        raise InputError(f"brute force limited to {BRUTE_FORCE_MAX_NODES} nodes")
    n = g.n
    e = g.edge_index_pairs()
    # node 0 is always on side A; bit i-1 of the mask puts node i on side B
    masks = np.arange(1, 1 << (n - 1), dtype=np.int64)
    cut = np.zeros(len(masks), dtype=np.int64)
    for a, b in e.tolist():
        side_a = 0 if a == 0 else (masks >> (a - 1)) & 1
        side_b = 0 if b == 0 else (masks >> (b - 1)) & 1
        cut += side_a ^ side_b
    best = int(np.argmin(cut))
    m = int(masks[best])
    in_b = np.array([i > 0 and (m >> (i - 1)) & 1 for i in range(n)], dtype=bool)
    return _result(g, int(cut[best]), ~in_b)


def crossing_edges(g: Graph, side_a) -> int:
    """Number of edges of ``g`` with exactly one endpoint in ``side_a``."""
    mask = np.zeros(g.n, dtype=bool)
    mask[g.index_of(sorted(side_a))] = True
    e = g.edge_index_pairs()
    return int(np.count_nonzero(mask[e[:, 0]] != mask[e[:, 1]]))

"""Degree-corrected SBM sampling with exact block-pair edge counts.

For every block pair ``(r, s)`` exactly ``B[r][s]`` edges are placed; each
endpoint is drawn independently from its block with probability proportional
to the target degree. Endpoint draws are stub lookups: a uniform integer in
``[0, D_r)`` (``D_r`` the block's degree total) is mapped to a node through
the cumulative degree array, so nodes of degree 0 are never picked.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph, MultiGraph, ParameterError, simplify
from .params import NetworkParams
from .rng import as_generator


class StubSampler:
    """Degree-proportional node sampler, one categorical per block."""

    def __init__(self, membership: np.ndarray, weights: np.ndarray, n_blocks: int):
        self.order = np.lexsort((np.arange(len(membership)), membership))
        w = np.asarray(weights, dtype=np.int64)[self.order]
        self.cum = np.cumsum(w)
        self.totals = np.bincount(membership, weights=weights, minlength=n_blocks).astype(np.int64)
        self.offsets = np.zeros(n_blocks, dtype=np.int64)
        np.cumsum(self.totals[:-1], out=self.offsets[1:])

    def draw(self, blocks: np.ndarray, gen: np.random.Generator) -> np.ndarray:
        """One node index per entry of ``blocks``."""
        blocks = np.asarray(blocks, dtype=np.int64)
        if blocks.size == 0:
            return np.empty(0, dtype=np.int64)
        tot = self.totals[blocks]
        if np.any(tot <= 0):
            bad = int(blocks[np.flatnonzero(tot <= 0)[0]])
            raise ParameterError(f"block {bad} has edges to place but zero total degree")
        stub = self.offsets[blocks] + gen.integers(0, tot)
        return self.order[np.searchsorted(self.cum, stub, side="right")]


def sample_sbm(p: NetworkParams, rng) -> MultiGraph:
    """Multigraph with exactly the requested edge count per block pair."""
    gen = as_generator(rng)
    be = p.block_edges
    be = be[be[:, 2] > 0]
    if len(be) == 0:
        return MultiGraph(p.node_ids, np.empty((0, 2), dtype=np.int64))
    sampler = StubSampler(p.membership, p.degrees, p.n_clusters)
    counts = be[:, 2]
    blocks = np.stack([np.repeat(be[:, 0], counts), np.repeat(be[:, 1], counts)], axis=1)
    ends = sampler.draw(blocks.ravel(), gen).reshape(-1, 2)
    return MultiGraph(p.node_ids, p.node_ids[ends])


def generate_simple_sbm(p: NetworkParams, rng) -> Graph:
    return simplify(sample_sbm(p, rng))

"""Two-step generation: SBM + RECCS on the clustered part, outlier edges on
the rest, merged on the original node set."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
import platform

import numpy as np

from . import __version__
from .core import ReccsConfig, run_reccs_with_stats
from .graph import Clustering, Graph, simplify
from .outliers import STRATEGIES, OutlierStrategy, postprocess
from .params import ParamSet, extract_param_set
from .rng import RngStream
from .sbm import sample_sbm

RECCS_CHOICES = ("v1", "v2", "none")
OUTLIER_CHOICES = ("s1", "s2", "s3", "none")
MANIFEST_FORMAT = "reccs-manifest-v1"


@dataclass
class PipelineConfig:
    reccs: str = "v1"
    outliers: str = "s1"
    master_seed: int = 0
    threads: int = 1
    max_stage3_iterations: int = 100_000

    def __post_init__(self):
        self.reccs = "none" if self.reccs in (None, "sbm") else self.reccs
        self.outliers = "none" if self.outliers is None else self.outliers
        if self.reccs not in RECCS_CHOICES:
            raise ValueError(f"reccs must be one of {RECCS_CHOICES}, got {self.reccs!r}")
        if self.outliers not in OUTLIER_CHOICES:
            raise ValueError(f"outliers must be one of {OUTLIER_CHOICES}, got {self.outliers!r}")


@dataclass
class PipelineResult:
    graph: Graph
    clustering: Clustering
    step1: Graph
    step2: Graph
    counts: dict = field(default_factory=dict)


def generate_from_params(ps: ParamSet, cfg: PipelineConfig) -> PipelineResult:
    root = RngStream(cfg.master_seed)
    p = ps.clustered
    p.validate()
    ps.outlier.validate()
    counts: dict = {}

    mg = sample_sbm(p, root.child("sbm").generator())
    n_c = simplify(mg)
    counts["sbm_multigraph_edges"] = mg.edge_count
    counts["sbm_simple_edges"] = n_c.edge_count
    if cfg.reccs == "none":
        step1 = n_c
    else:
        rcfg = ReccsConfig(cfg.reccs, cfg.master_seed, cfg.max_stage3_iterations, cfg.threads)
        step1, stats = run_reccs_with_stats(n_c, p.clustering(), p, rcfg, rng=root.child("reccs"))
        counts["reccs"] = stats.as_dict()
    counts["step1_edges"] = step1.edge_count

    full = ps.outlier.clustering()
    if cfg.outliers == "none":
        step2 = Graph.empty(ps.outlier.node_ids)
    else:
        strategy = OutlierStrategy(cfg.outliers)
        ms = STRATEGIES[strategy](ps.outlier, root.child("outliers").generator())
        counts["outlier_multigraph_edges"] = ms.edge_count
        step2, _ = postprocess(ms, full)
    counts["step2_edges"] = step2.edge_count

    k1, k2 = step1.edge_keys(), step2.edge_keys()
    clash = np.intersect1d(k1, k2, assume_unique=True)
    if len(clash):
        raise RuntimeError(f"step 1 and step 2 share {len(clash)} edge(s); outlier edges must touch an outlier")
    merged = Graph.from_edges(np.concatenate([step1.edges(), step2.edges()]), nodes=ps.outlier.node_ids)
    counts["output_edges"] = merged.edge_count
    return PipelineResult(merged, full, step1, step2, counts)


def run_pipeline(g: Graph, c: Clustering, cfg: PipelineConfig) -> tuple[Graph, Clustering]:
    res = generate_from_params(extract_param_set(g, c, cfg.threads), cfg)
    return res.graph, res.clustering


def manifest(cfg: PipelineConfig, res: PipelineResult, inputs: dict | None = None) -> dict:
    return {
        "format": MANIFEST_FORMAT,
        "config": asdict(cfg),
        "inputs": inputs or {},
        "versions": {
            "reccs": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "counts": res.counts,
    }

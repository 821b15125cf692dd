import itertools

import numpy as np
import pytest

from reccs.graph import Clustering, Graph, induced_subgraph, is_connected
from reccs.params import extract_param_set, split_real_network
from reccs.pipeline import PipelineConfig, generate_from_params, manifest, run_pipeline


def G(pairs, nodes=None):
    return Graph.from_edges(np.asarray(pairs, dtype=np.int64).reshape(-1, 2), nodes=nodes)


def edge_set(g):
    return {tuple(e) for e in g.edges().tolist()}


ALL = list(itertools.product(["v1", "v2", "none"], ["s1", "s2", "s3", "none"]))


def test_no_outliers_strategy_irrelevant():
    g = G([(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
    c = Clustering(g.nodes, [0, 0, 0, 1, 1, 1])
    outs = {s: run_pipeline(g, c, PipelineConfig("v1", s, master_seed=3))[0] for s in ("s1", "s2", "s3", "none")}
    assert len({frozenset(edge_set(x)) for x in outs.values()}) == 1
    res = generate_from_params(extract_param_set(g, c), PipelineConfig("v1", "s1", master_seed=3))
    assert res.step2.edge_count == 0 and res.graph == res.step1


def test_all_outliers():
    g = G([(0, 1), (1, 2), (2, 3)])
    c = Clustering(g.nodes, np.arange(4))
    out, c2 = run_pipeline(g, c, PipelineConfig("v1", "s1"))
    assert out == g and c2 == c
    res = generate_from_params(extract_param_set(g, c), PipelineConfig("v2", "s3"))
    assert res.step1.edge_count == 0 and res.graph.edge_count == res.step2.edge_count


@pytest.mark.parametrize("reccs,outl", ALL)
def test_disjoint_union_and_nodes(toy, reccs, outl):
    g, c = toy
    res = generate_from_params(extract_param_set(g, c), PipelineConfig(reccs, outl, master_seed=11))
    a, b = edge_set(res.step1), edge_set(res.step2)
    assert not (a & b)
    assert edge_set(res.graph) == a | b
    assert res.graph.edge_count == len(a) + len(b)
    assert np.array_equal(res.graph.nodes, g.nodes)
    assert res.clustering == c
    if reccs != "none":
        for r in np.flatnonzero(~c.is_singleton()).tolist():
            assert is_connected(induced_subgraph(res.graph, c.members(r)))


def test_step1_unaffected_by_outlier_strategy(toy):
    g, c = toy
    ps = extract_param_set(g, c)
    steps = {s: generate_from_params(ps, PipelineConfig("v1", s, master_seed=5)).step1 for s in ("s1", "s2", "s3")}
    assert steps["s1"] == steps["s2"] == steps["s3"]


@pytest.mark.parametrize("reccs,outl", ALL)
def test_deterministic(toy, reccs, outl):
    g, c = toy
    ps = extract_param_set(g, c)
    a = generate_from_params(ps, PipelineConfig(reccs, outl, master_seed=8, threads=1))
    b = generate_from_params(ps, PipelineConfig(reccs, outl, master_seed=8, threads=3))
    assert a.graph == b.graph and a.counts == b.counts


def test_seed_changes_output(toy):
    g, c = toy
    ps = extract_param_set(g, c)
    a = generate_from_params(ps, PipelineConfig(master_seed=1)).graph
    b = generate_from_params(ps, PipelineConfig(master_seed=2)).graph
    assert a != b


def test_manifest_contents(toy):
    g, c = toy
    cfg = PipelineConfig("v2", "s2", master_seed=9)
    res = generate_from_params(extract_param_set(g, c), cfg)
    man = manifest(cfg, res, {"graph": "g.txt"})
    assert man["format"] == "reccs-manifest-v1"
    assert man["config"]["master_seed"] == 9 and man["config"]["reccs"] == "v2"
    assert man["counts"]["output_edges"] == res.graph.edge_count
    assert man["counts"]["step1_edges"] + man["counts"]["step2_edges"] == res.graph.edge_count
    assert {"reccs", "numpy", "python"} <= set(man["versions"])


def test_config_validation():
    assert PipelineConfig(reccs="sbm").reccs == "none"
    with pytest.raises(ValueError):
        PipelineConfig(reccs="v3")
    with pytest.raises(ValueError):
        PipelineConfig(outliers="s4")

import numpy as np
import pytest
from hypothesis import given

from conftest import graphs
from reccs.graph import (Clustering, Graph, InputError, MultiGraph, as_multigraph, connected_components,
                         induced_subgraph, simplify)


def E(*pairs):
    return np.asarray(pairs, dtype=np.int64).reshape(-1, 2)


def edge_set(g):
    return {tuple(e) for e in g.edges().tolist()}


def test_induced_subgraph_triangle():
    g = Graph.from_edges(E((1, 2), (2, 3), (1, 3)))
    h = induced_subgraph(g, [1, 2])
    assert edge_set(h) == {(1, 2)}
    assert h.nodes.tolist() == [1, 2]


def test_induced_subgraph_identity():
    g = Graph.from_edges(E((1, 2), (2, 3), (1, 3), (3, 7)))
    assert induced_subgraph(g, g.nodes) == g


def test_induced_subgraph_path_alternate_nodes():
    g = Graph.from_edges(E((0, 1), (1, 2), (2, 3), (3, 4)))
    h = induced_subgraph(g, [0, 2, 4])
    assert h.n == 3 and h.edge_count == 0


def test_induced_subgraph_unknown_node():
    g = Graph.from_edges(E((0, 1)))
    with pytest.raises(InputError):
        induced_subgraph(g, [0, 5])


def test_connected_components_examples():
    assert connected_components(Graph.empty()) == []
    assert connected_components(Graph.from_edges(E((4, 5), (5, 6), (4, 6)))) == [{4, 5, 6}]
    assert connected_components(Graph.from_edges(E((2, 3), (0, 1)))) == [{0, 1}, {2, 3}]


def test_simplify_examples():
    g = simplify(MultiGraph([1, 2], E((1, 1), (1, 2), (1, 2))))
    assert edge_set(g) == {(1, 2)}
    simple = Graph.from_edges(E((1, 2), (2, 3)))
    assert simplify(as_multigraph(simple)) == simple
    g = simplify(MultiGraph([3, 4], E((3, 3), (3, 3))))
    assert g.edge_count == 0 and g.nodes.tolist() == [3, 4]


def test_graph_rejects_loops_and_parallels():
    g = Graph.from_edges(E((1, 2), (2, 1), (2, 2), (1, 2)))
    assert g.edge_count == 1
    assert g.degree(2) == 1


def test_arbitrary_ids_and_isolated_nodes():
    g = Graph.from_edges(E((1000, 7)), nodes=[3, 7, 1000])
    assert g.nodes.tolist() == [3, 7, 1000]
    assert g.degree(3) == 0 and g.has_edge(1000, 7) and not g.has_edge(3, 7)
    assert 3 in g and 4 not in g


@given(graphs(max_nodes=15))
def test_graph_invariants(g):
    adj = {v: set(g.neighbors(v).tolist()) for v in g.nodes.tolist()}
    for v, nb in adj.items():
        assert v not in nb
        for u in nb:
            assert v in adj[u]
    assert g.edge_count == sum(len(nb) for nb in adj.values()) // 2
    assert simplify(as_multigraph(g)) == g


@given(graphs(max_nodes=15))
def test_simplify_idempotent(g):
    doubled = MultiGraph(g.nodes, np.concatenate([g.edges(), g.edges()[:, ::-1]]))
    once = simplify(doubled)
    assert once == g
    assert simplify(as_multigraph(once)) == once


@given(graphs(max_nodes=15))
def test_components_partition(g):
    comps = connected_components(g)
    seen = set()
    for comp in comps:
        assert not (comp & seen)
        seen |= comp
    assert seen == set(g.nodes.tolist())
    assert [min(cm) for cm in comps] == sorted(min(cm) for cm in comps)
    for u, v in g.edges().tolist():
        assert any(u in cm and v in cm for cm in comps)


@given(graphs(max_nodes=15))
def test_induced_subgraph_edge_count(g):
    nodes = g.nodes[::2]
    h = induced_subgraph(g, nodes)
    keep = set(nodes.tolist())
    assert h.edge_count <= g.edge_count
    assert edge_set(h) == {(u, v) for u, v in edge_set(g) if u in keep and v in keep}


def test_clustering_singletons_and_order():
    c = Clustering.from_mapping({5: "A", 2: "A", 9: "B"}, nodes=[1, 2, 5, 9])
    # cluster order follows the smallest member: {1}, A, B
    assert c.n_clusters == 3
    assert c.labels == [None, "A", "B"]
    assert c.outliers().tolist() == [1, 9]
    assert c.clustered_nodes().tolist() == [2, 5]
    assert c.cluster_of(5) == c.cluster_of(2)


def test_clustering_duplicate_node():
    with pytest.raises(InputError):
        Clustering([1, 1], [0, 1])

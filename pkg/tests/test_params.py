import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from reccs.graph import Clustering, Graph, ParameterError, induced_subgraph, is_connected
from reccs.mincut import brute_force_min_cut
from reccs.params import NetworkParams, extract_params, extract_param_set, split_real_network


def K(n, offset=0):
    return [(offset + i, offset + j) for i, j in itertools.combinations(range(n), 2)]


def edge_set(g):
    return {tuple(e) for e in g.edges().tolist()}


def test_k4_single_cluster():
    g = Graph.from_edges(np.array(K(4)))
    c = Clustering(g.nodes, np.zeros(4))
    p = extract_params(g, c)
    assert p.degrees.tolist() == [3, 3, 3, 3]
    assert p.block_matrix().tolist() == [[6]]
    assert p.connectivity.tolist() == [brute_force_min_cut(g).value] == [3]


def test_two_triangles_joined():
    g = Graph.from_edges(np.array(K(3) + K(3, 3) + [(2, 3)]))
    c = Clustering(g.nodes, [0, 0, 0, 1, 1, 1])
    p = extract_params(g, c)
    assert p.block_matrix().tolist() == [[3, 1], [1, 3]]
    tri = Graph.from_edges(np.array(K(3)))
    assert p.connectivity.tolist() == [brute_force_min_cut(tri).value] * 2 == [2, 2]


def test_single_node_singleton():
    g = Graph.empty([4])
    p = extract_params(g, Clustering([4], [0]))
    assert p.degrees.tolist() == [0] and p.connectivity.tolist() == [0]


def test_disconnected_cluster_has_zero_connectivity():
    g = Graph.from_edges(np.array([(0, 1), (2, 3)]))
    p = extract_params(g, Clustering(g.nodes, [0, 0, 0, 0]))
    assert p.connectivity.tolist() == [0]


def test_split_no_outliers():
    g = Graph.from_edges(np.array(K(4)))
    g_c, g_star = split_real_network(g, Clustering(g.nodes, np.zeros(4)))
    assert g_c == g and g_star.edge_count == 0 and g_star.n == 4


def test_split_all_outliers():
    g = Graph.from_edges(np.array(K(4)))
    g_c, g_star = split_real_network(g, Clustering(g.nodes, np.arange(4)))
    assert g_c.n == 0 and g_c.edge_count == 0 and g_star == g


def test_split_star():
    hub, x = 0, 1
    g = Graph.from_edges(np.array([(hub, x), (hub, 2), (hub, 3), (hub, 4)]))
    c = Clustering(g.nodes, [0, 0, 1, 2, 3])
    g_c, g_star = split_real_network(g, c)
    assert edge_set(g_c) == {(0, 1)}
    assert edge_set(g_star) == {(0, 2), (0, 3), (0, 4)}


@st.composite
def clustered_graphs(draw, max_nodes=14):
    g = draw(graphs(max_nodes=max_nodes))
    labels = draw(st.lists(st.integers(0, 3), min_size=g.n, max_size=g.n))
    return g, Clustering(g.nodes, np.asarray(labels, dtype=np.int64))


@given(clustered_graphs())
def test_degree_sum_identity(gc):
    g, c = gc
    p = extract_params(g, c)
    assert p.degrees.sum() == 2 * p.total_edges()
    B = p.block_matrix()
    assert np.all(B >= 0) and np.array_equal(B, B.T)


@given(clustered_graphs())
def test_connectivity_bounds(gc):
    g, c = gc
    p = extract_params(g, c)
    for r in range(c.n_clusters):
        mem = c.members(r)
        if len(mem) < 2:
            assert p.connectivity[r] == 0
            continue
        h = induced_subgraph(g, mem)
        if not is_connected(h):
            assert p.connectivity[r] == 0
            continue
        assert 1 <= p.connectivity[r] <= h.degrees().min() <= len(mem) - 1
        assert p.connectivity[r] == brute_force_min_cut(h).value


@given(clustered_graphs())
def test_split_partitions_edges(gc):
    g, c = gc
    g_c, g_star = split_real_network(g, c)
    a, b = edge_set(g_c), edge_set(g_star)
    assert not (a & b) and a | b == edge_set(g)
    assert g_star.n == g.n


def test_param_set_degrees_are_subnetwork_degrees(toy):
    g, c = toy
    ps = extract_param_set(g, c)
    g_c, g_star = split_real_network(g, c)
    assert np.array_equal(ps.clustered.degrees, g_c.degrees())
    assert np.array_equal(ps.outlier.degrees, g_star.degrees())
    assert not ps.clustered.clustering().is_singleton().any()


def test_validate_names_infeasible_cluster():
    p = NetworkParams(node_ids=[0, 1, 2], membership=[0, 0, 0], cluster_ids=["tight"], degrees=[2, 2, 2],
                      block_edges=[[0, 0, 3]], connectivity=[3])
    with pytest.raises(ParameterError, match="tight"):
        p.validate()


def test_extraction_thread_independent(toy):
    g, c = toy
    assert extract_params(g, c, threads=1) == extract_params(g, c, threads=4)

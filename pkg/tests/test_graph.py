import networkx as nx
import numpy as np
import pytest

from girg_lab.graph.core import Graph, SubgraphView, canonical_edges
from girg_lab.graph.ops import (
    bfs_distances,
    connected_components,
    eccentricity,
    external_neighborhood,
    giant_component,
    induced_by_degree,
    induced_by_weight,
    is_connected,
    isolated_count,
    tie_counts,
)
from girg_lab.model.kernel import ModelParams, VertexTable
from girg_lab.sample.sampler import sample_graph_naive


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges().tolist())
    return h


def test_canonical_edges_dedupes_and_orients():
    us, vs = canonical_edges(4, np.array([2, 0, 1, 3]), np.array([0, 2, 3, 1]))
    assert us.tolist() == [0, 1]
    assert vs.tolist() == [2, 3]
    with pytest.raises(ValueError):
        canonical_edges(3, np.array([1]), np.array([1]))
    with pytest.raises(ValueError):
        canonical_edges(3, np.array([0]), np.array([3]))


def test_graph_basics():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 0)])
    assert (g.n, g.m) == (4, 3)
    assert g.degree.tolist() == [2, 2, 2, 0]
    assert g.neighbors(1).tolist() == [0, 2]
    assert g.edges().tolist() == [[0, 1], [0, 2], [1, 2]]
    assert g.adjacency_matrix().sum() == 6
    with pytest.raises(ValueError):
        g.weights


def test_empty_graph():
    g = Graph.from_edges(0)
    assert (g.n, g.m) == (0, 0)
    assert connected_components(g).count == 0
    assert not is_connected(g)
    assert giant_component(g).size == 0


def test_external_neighborhood():
    g = path(5)
    assert external_neighborhood(g, [2]).tolist() == [1, 3]
    assert external_neighborhood(g, [0, 1]).tolist() == [2]
    assert external_neighborhood(g, range(5)).tolist() == []
    with pytest.raises(ValueError):
        external_neighborhood(g, [7])


def test_external_neighborhood_matches_networkx():
    g = sample_graph_naive(ModelParams(n=200, seed=1))
    h = to_nx(g)
    rng = np.random.default_rng(0)
    for _ in range(20):
        s = set(rng.choice(g.n, size=10, replace=False).tolist())
        expected = sorted(nx.node_boundary(h, s))
        assert external_neighborhood(g, s).tolist() == expected


def test_external_neighborhood_bounded_by_degree_sum():
    g = sample_graph_naive(ModelParams(n=300, seed=4))
    view = induced_by_weight(g, 1.5)
    rng = np.random.default_rng(1)
    for graph in (g, view.graph):
        for size in (1, 5, 40):
            s = rng.choice(graph.n, size=size, replace=False)
            assert external_neighborhood(graph, s).size <= graph.degree[s].sum()


def test_induced_views_compose():
    g = sample_graph_naive(ModelParams(n=400, seed=2))
    view = induced_by_weight(g, 1.5)
    # weight filter on the view equals the tighter filter on the parent
    heavier = induced_by_weight(view.graph, 3.0)
    assert view.to_parent(heavier.kept).tolist() == induced_by_weight(g, 3.0).kept.tolist()
    # degree filter on the view uses degrees inside the view
    linked = induced_by_degree(view.graph, 1)
    expected = view.kept[view.induced_degree >= 1]
    assert view.to_parent(linked.kept).tolist() == expected.tolist()
    direct = SubgraphView(g, expected).graph
    assert np.array_equal(linked.graph.edges(), direct.edges())


def weighted_star():
    weights = np.array([10.0, 1.0, 2.0, 3.0, 1.5])
    positions = np.linspace(0.0, 0.8, 5)[:, None]
    return Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (2, 3)], VertexTable(weights, positions))


def test_induced_by_weight_maps_ids():
    g = weighted_star()
    view = induced_by_weight(g, 2.0)
    assert view.kept.tolist() == [0, 2, 3]
    assert view.to_local[2] == 1
    assert view.to_local[1] == -1
    assert view.to_parent(np.array([2])).tolist() == [3]
    assert view.graph.m == 3
    assert view.induced_degree.tolist() == [2, 2, 2]
    assert view.parent_degree.tolist() == [3, 2, 2]
    assert view.graph.weights.tolist() == [10.0, 2.0, 3.0]
    assert isolated_count(view) == 0
    with pytest.raises(ValueError):
        induced_by_weight(g, 5.0, 1.0)


def test_isolated_and_restrict():
    g = weighted_star()
    view = induced_by_weight(g, 1.0, 2.0)
    assert view.kept.tolist() == [1, 2, 4]
    assert isolated_count(view) == 3
    sub = view.restrict(np.array([True, False, True]))
    assert sub.kept.tolist() == [1, 4]
    assert induced_by_degree(g, 3).kept.tolist() == [0]


def test_components_and_giant():
    g = Graph.from_edges(7, [(0, 1), (2, 3), (3, 4), (5, 6)])
    comps = connected_components(g)
    assert comps.labels.tolist() == [0, 0, 1, 1, 1, 2, 2]
    assert comps.sizes.tolist() == [2, 3, 2]
    assert comps.largest() == 1
    assert giant_component(g).kept.tolist() == [2, 3, 4]
    assert not is_connected(g)
    assert is_connected(path(3))


def test_components_match_networkx():
    g = sample_graph_naive(ModelParams(n=300, seed=5))
    expected = sorted(len(c) for c in nx.connected_components(to_nx(g)))
    assert sorted(connected_components(g).sizes.tolist()) == expected


def test_bfs_and_eccentricity():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3)])
    assert bfs_distances(g, 0).tolist() == [0, 1, 2, 3, -1]
    assert eccentricity(g, 1) == 2
    with pytest.raises(ValueError):
        bfs_distances(g, 9)


def test_subgraph_view_whole():
    g = path(4)
    view = SubgraphView.whole(g)
    assert len(view) == 4
    assert np.array_equal(view.graph.edges(), g.edges())


def test_tie_counts_partition_edges():
    p = ModelParams(n=300, seed=2)
    g = sample_graph_naive(p)
    strong, weak = tie_counts(g, p)
    assert strong + weak == g.m
    assert strong >= 0 and weak >= 0

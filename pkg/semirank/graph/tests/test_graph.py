import numpy as np
import pytest
import networkx as nx

from semirank.graph import Graph, WeightVector, build_laplacian, laplacian_operator, weighted_degrees, \
    is_connected, connected_components, smallest_component, volume
from semirank.utils.errors import ConfigError


def random_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.shape[0]) < p
    return Graph(n, np.stack([iu[keep], ju[keep]], axis=1))


@pytest.fixture(scope='function')
def path3():
    g = Graph(3, [(1, 2), (0, 1)])
    return g, WeightVector([2.0, 3.0])


@pytest.mark.graphtest
class TestGraph:

    def test_canonical_order(self):
        g = Graph(4, [(3, 1), (2, 0), (1, 0)], er_mask=[True, False, True])
        assert g.edges.tolist() == [[0, 1], [0, 2], [1, 3]]
        assert g.er_mask.tolist() == [True, False, True]
        assert g.tails.tolist() == [0, 0, 1]
        assert g.heads.tolist() == [1, 2, 3]
        assert g.edge_index([(3, 1), (0, 2)]).tolist() == [2, 1]
        assert g.has_edge(2, 0) and not g.has_edge(2, 3)

    @pytest.mark.parametrize('edges', [[(0, 0)], [(0, 1), (1, 0)], [(0, 5)], [(-1, 1)]])
    def test_invalid_edges(self, edges):
        with pytest.raises(ConfigError):
            Graph(3, edges)

    def test_invalid_n(self):
        with pytest.raises(ConfigError):
            Graph(1, [])

    def test_missing_edge_index(self):
        g = Graph.from_pairs(3, [(0, 1)])
        with pytest.raises(ConfigError):
            g.edge_index([(1, 2)])

    def test_subgraph_union(self):
        g = Graph(4, [(0, 1), (1, 2), (2, 3)], er_mask=[True, True, False])
        er = g.er_subgraph()
        assert er.edges.tolist() == [[0, 1], [1, 2]]
        aug = er.union([(2, 1), (3, 0), (0, 3)])
        assert aug.m == 3
        assert aug.edges.tolist() == [[0, 1], [0, 3], [1, 2]]
        assert aug.er_mask.tolist() == [True, False, True]
        plain = Graph(3, [(0, 1)]).union([(1, 2)])
        assert plain.er_mask.tolist() == [True, False]

    def test_equality(self):
        assert Graph(3, [(1, 0), (2, 1)]) == Graph.from_pairs(3, [(0, 1), (1, 2)])
        assert Graph(3, [(0, 1)]) != Graph(3, [(0, 1)], er_mask=[True])


@pytest.mark.graphtest
class TestWeightVector:

    def test_validation(self):
        with pytest.raises(ConfigError):
            WeightVector([1.0, -0.1])
        with pytest.raises(ConfigError):
            WeightVector([1.0, np.inf])
        w = WeightVector([0.5, 2.0])
        assert w.w_max == 2.0
        assert np.allclose((w * 2).values, [1.0, 4.0])
        assert len(w) == 2

    def test_dimension_mismatch(self, path3):
        g, _ = path3
        with pytest.raises(ConfigError):
            build_laplacian(g, WeightVector([1.0]))
        with pytest.raises(ConfigError):
            weighted_degrees(g, WeightVector([1.0, 1.0, 1.0]))


@pytest.mark.graphtest
class TestLaplacian:

    def test_single_edge(self):
        g = Graph(2, [(0, 1)])
        assert build_laplacian(g, WeightVector([1.0])).tolist() == [[1.0, -1.0], [-1.0, 1.0]]

    def test_triangle(self):
        g = Graph.from_pairs(3, [(0, 1), (0, 2), (1, 2)])
        lap = build_laplacian(g)
        assert np.all(np.diag(lap) == 2)
        assert lap[0, 1] == -1 and lap[1, 2] == -1
        assert np.allclose(np.linalg.eigvalsh(lap), [0, 3, 3])

    def test_path(self, path3):
        g, w = path3
        expected = [[2, -2, 0], [-2, 5, -3], [0, -3, 3]]
        assert np.array_equal(build_laplacian(g, w), np.array(expected, dtype=float))

    @pytest.mark.parametrize('seed', [0, 1, 2])
    def test_properties(self, seed):
        rng = np.random.default_rng(seed)
        g = random_graph(30, 0.3, seed)
        w = WeightVector(rng.exponential(size=g.m))
        lap = build_laplacian(g, w)
        assert np.allclose(lap, lap.T)
        assert np.max(np.abs(lap @ np.ones(g.n))) <= 1e-12
        for _ in range(100):
            x = rng.standard_normal(g.n)
            direct = np.sum(w.values * (x[g.heads] - x[g.tails]) ** 2)
            assert abs(x @ lap @ x - direct) <= 1e-10 * max(1.0, direct)
        op = laplacian_operator(g, w)
        v = rng.standard_normal((g.n, 5))
        assert np.max(np.abs(op @ v - lap @ v)) <= 1e-10 * max(1.0, np.abs(lap @ v).max())

    @pytest.mark.parametrize('seed', [3, 4, 5])
    def test_min_degree_dominates_gap(self, seed):
        rng = np.random.default_rng(seed)
        g = random_graph(25, 0.4, seed)
        w = WeightVector(rng.uniform(0.1, 2.0, size=g.m))
        if not is_connected(g, w):
            pytest.skip('random draw disconnected')
        gap = np.linalg.eigvalsh(build_laplacian(g, w))[1]
        assert weighted_degrees(g, w).min() >= 0.5 * gap * (1 - 1e-9)


@pytest.mark.graphtest
class TestDegreesAndVolume:

    def test_star(self):
        g = Graph.from_pairs(4, [(0, 1), (0, 2), (0, 3)])
        assert weighted_degrees(g).tolist() == [3, 1, 1, 1]
        assert weighted_degrees(g, WeightVector.zeros(g)).tolist() == [0, 0, 0, 0]

    def test_path(self, path3):
        g, w = path3
        assert weighted_degrees(g, w).tolist() == [2, 5, 3]
        assert volume(g, w, {1}) == 5

    def test_volume(self):
        g = Graph.from_pairs(3, [(0, 1), (0, 2), (1, 2)])
        assert volume(g, None, range(3)) == 6
        assert volume(g, None, []) == 0
        with pytest.raises(ConfigError):
            volume(g, None, [3])

    def test_volume_complement(self):
        rng = np.random.default_rng(7)
        g = random_graph(20, 0.3, 7)
        w = WeightVector(rng.exponential(size=g.m))
        total = volume(g, w, range(g.n))
        for _ in range(20):
            s = np.flatnonzero(rng.random(g.n) < 0.5)
            rest = np.setdiff1d(np.arange(g.n), s)
            assert abs(volume(g, w, s) + volume(g, w, rest) - total) <= 1e-10 * total


@pytest.mark.graphtest
class TestConnectivity:

    def test_threshold(self):
        g = Graph(2, [(0, 1)])
        assert is_connected(g, WeightVector([1.0]), 0.0)
        assert not is_connected(g, WeightVector([1e-15]), 1e-12)
        with pytest.raises(ConfigError):
            is_connected(g, None, -1.0)

    def test_triangle_with_zero_edge(self):
        g = Graph.from_pairs(3, [(0, 1), (0, 2), (1, 2)])
        assert is_connected(g, WeightVector([1.0, 0.0, 1.0]), 0.0)

    def test_components(self):
        g = Graph.from_pairs(5, [(0, 1), (1, 2), (3, 4)])
        labels = connected_components(g)
        assert labels[0] == labels[2] and labels[3] == labels[4] and labels[0] != labels[3]
        assert smallest_component(g).tolist() == [3, 4]

    @pytest.mark.parametrize('seed', range(5))
    def test_against_networkx(self, seed):
        g = random_graph(15, 0.12, seed)
        ref = nx.Graph()
        ref.add_nodes_from(range(g.n))
        ref.add_edges_from(g.edges.tolist())
        assert is_connected(g) == nx.is_connected(ref)
        assert len(np.unique(connected_components(g))) == nx.number_connected_components(ref)

import numpy as np
import pytest

from semirank.graph import Graph, build_laplacian, weighted_degrees
from semirank.sampling import gen_er, apply_clique_adversary, gen_cluster_graph
from semirank.utils.errors import ConfigError


@pytest.mark.samplingtest
class TestGenER:

    def test_complete(self):
        g = gen_er(7, 1.0, seed=0)
        assert g.m == 21
        assert g.er_mask.all()

    def test_almost_empty(self):
        assert gen_er(10, 1e-9, seed=0).m == 0

    def test_deterministic(self):
        assert gen_er(40, 0.3, seed=5) == gen_er(40, 0.3, seed=5)
        assert gen_er(40, 0.3, seed=5) != gen_er(40, 0.3, seed=6)

    @pytest.mark.parametrize('p', [0.0, -0.1, 1.5])
    def test_invalid_p(self, p):
        with pytest.raises(ConfigError):
            gen_er(10, p, seed=0)

    @pytest.mark.slow
    def test_spectral_gap_and_degree(self):
        n, p = 300, 0.2
        good = 0
        for seed in range(100):
            g = gen_er(n, p, seed=seed)
            gap = np.linalg.eigvalsh(build_laplacian(g))[1]
            good += int(gap >= n * p / 2 and weighted_degrees(g).max() <= 2 * n * p)
        assert good >= 99


@pytest.mark.samplingtest
class TestCliqueAdversary:

    def test_complete_is_fixed_point(self):
        g = gen_er(12, 1.0, seed=0)
        assert apply_clique_adversary(g, seed=3) == g

    def test_empty_n6(self):
        g = Graph(6, np.zeros((0, 2)), er_mask=np.zeros(0, dtype=bool))
        out = apply_clique_adversary(g, seed=1)
        assert out.m == 2
        assert not out.er_mask.any()
        (a0, a1), (b0, b1) = out.edges.tolist()
        assert a1 < 3 and b0 >= 3

    @pytest.mark.parametrize('n', [7, 10, 200])
    def test_floor_sizes(self, n):
        g = Graph(n, np.zeros((0, 2)), er_mask=np.zeros(0, dtype=bool))
        out = apply_clique_adversary(g, seed=n)
        third = n // 3
        assert out.m == 2 * third * (third - 1) // 2
        degrees = weighted_degrees(out)
        assert np.count_nonzero(degrees == third - 1) == 2 * third
        planted = out.edges
        assert np.all((planted < n // 2).all(axis=1) | (planted >= n // 2).all(axis=1))

    def test_requires_er_mask(self):
        with pytest.raises(ConfigError):
            apply_clique_adversary(Graph(6, [(0, 1)]), seed=0)

    @pytest.mark.parametrize('seed', range(3))
    def test_monotone_and_clique_degrees(self, seed):
        n = 200
        g = gen_er(n, 0.25, seed=seed)
        out = apply_clique_adversary(g, seed=seed + 100)
        idx = out.edge_index(g.edges)
        assert np.array_equal(out.er_mask[idx], g.er_mask)
        assert out.er_subgraph() == g
        assert weighted_degrees(out).max() >= 65
        planted = out.edges[~out.er_mask]
        assert np.all((planted < n // 2).all(axis=1) | (planted >= n // 2).all(axis=1))


@pytest.mark.samplingtest
class TestClusterGraph:

    def test_collapses_to_er(self):
        g = gen_cluster_graph([10, 15], [0.3, 0.3], 0.3, seed=2)
        assert g.er_mask.all()

    def test_dense_clusters(self):
        g = gen_cluster_graph([5, 6], [1.0, 1.0], 1e-9, seed=0)
        assert g.m == 10 + 15
        assert not g.er_mask.any()

    @pytest.mark.parametrize(
        'sizes,p,q', [
            ([5, 5], [0.5, 0.2], 0.3),
            ([5], [0.5, 0.5], 0.1),
            ([5, 5], [0.5, 1.2], 0.1),
            ([0, 5], [1, 1], 0.5),
        ]
    )
    def test_invalid(self, sizes, p, q):
        with pytest.raises(ConfigError):
            gen_cluster_graph(sizes, p, q, seed=0)

    def test_er_edge_count(self):
        n, q = 100, 0.2
        pairs = n * (n - 1) / 2
        sigma = np.sqrt(pairs * q * (1 - q))
        counts = []
        for seed in range(50):
            g = gen_cluster_graph([50, 50], [0.8, 0.8], q, seed=seed)
            counts.append(g.er_mask.sum())
            assert abs(counts[-1] - q * pairs) <= 4.5 * sigma
        assert abs(np.mean(counts) - q * pairs) <= 3 * sigma / np.sqrt(50)

    @pytest.mark.slow
    def test_er_pair_inclusion(self):
        q, trials = 0.3, 10000
        counts = np.zeros((6, 6))
        for seed in range(trials):
            er = gen_cluster_graph([3, 3], [0.9, 0.6], q, seed=seed).er_subgraph()
            counts[er.tails, er.heads] += 1
        iu, ju = np.triu_indices(6, k=1)
        sigma = np.sqrt(trials * q * (1 - q))
        assert np.all(np.abs(counts[iu, ju] - trials * q) <= 3.5 * sigma)

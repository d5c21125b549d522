from itertools import combinations, product
import numpy as np
import pytest

from semirank.graph import Graph, WeightVector, weighted_degrees
from semirank.spectral import Embedding
from semirank.oracles import GainVector, edge_gains, greedy_b_matching, greedy_dual_certificate, \
    exact_lp_oracle_small, approx_packing_oracle, matching_value, check_b_feasible
from semirank.utils.errors import ConfigError, InstanceTooLargeError, OracleError

TRIANGLE = Graph.from_pairs(3, [(0, 1), (0, 2), (1, 2)])
PATH = Graph.from_pairs(3, [(0, 1), (1, 2)])


def random_instance(rng, n_max=6, max_gain=None):
    n = int(rng.integers(2, n_max + 1))
    pairs = [p for p in combinations(range(n), 2) if rng.random() < 0.6]
    g = Graph.from_pairs(n, pairs)
    if max_gain is None:
        c = rng.exponential(size=g.m)
    else:
        c = rng.integers(0, max_gain + 1, size=g.m).astype(float)
    return g, c, int(rng.integers(1, 4))


@pytest.mark.oracletest
class TestEdgeGains:

    def test_closed_forms(self):
        g = Graph(2, [(0, 1)])
        assert edge_gains(g, Embedding(np.array([[1.0, 2.0], [1.0, 2.0]]))).c.tolist() == [0.0]
        assert edge_gains(g, Embedding(np.array([[3.0, 0.0], [0.0, 0.0]]))).c.tolist() == [9.0]

    def test_against_dense(self):
        rng = np.random.default_rng(0)
        g, _, _ = random_instance(rng, n_max=12)
        V = rng.standard_normal((g.n, 7))
        X = V @ V.T
        dense = np.array([X[i, i] + X[j, j] - 2 * X[i, j] for i, j in g.edges])
        c = edge_gains(g, Embedding(V)).c
        assert np.allclose(c, dense, rtol=1e-10, atol=1e-12)

    def test_invalid(self):
        with pytest.raises(ConfigError):
            GainVector([1.0, -1.0])
        with pytest.raises(ConfigError):
            edge_gains(PATH, np.zeros((4, 2)))


@pytest.mark.oracletest
class TestGreedy:

    def test_path(self):
        w = greedy_b_matching(PATH, np.array([3.0, 2.0]), 1)
        assert w.values.tolist() == [1.0, 0.0]
        opt, _ = exact_lp_oracle_small(PATH, np.array([3.0, 2.0]), 1)
        assert opt == 3.0
        cert = greedy_dual_certificate(PATH, np.array([3.0, 2.0]), 1, w)
        assert cert.s.tolist() == [3.0, 3.0, 0.0]
        assert cert.ell.tolist() == [0.0, 0.0]
        assert cert.value == 6.0

    def test_triangle(self):
        w = greedy_b_matching(TRIANGLE, np.ones(3), 1)
        assert w.values.tolist() == [1.0, 0.0, 0.0]
        assert matching_value(np.ones(3), w) >= 0.5 * 1.5

    def test_zero_gains(self):
        w = greedy_b_matching(TRIANGLE, np.zeros(3), 2)
        assert not w.values.any()
        cert = greedy_dual_certificate(TRIANGLE, np.zeros(3), 2, w)
        assert not cert.s.any() and not cert.ell.any() and cert.value == 0.0

    def test_tie_break_by_index(self):
        g = Graph.from_pairs(4, [(0, 1), (1, 2), (2, 3)])
        assert greedy_b_matching(g, np.ones(3), 1).values.tolist() == [1.0, 0.0, 1.0]

    def test_invalid_budget(self):
        with pytest.raises(ConfigError):
            greedy_b_matching(PATH, np.ones(2), 0)
        with pytest.raises(ConfigError):
            greedy_b_matching(PATH, np.ones(2), 1.5)

    def test_non_greedy_matching_rejected(self):
        with pytest.raises(OracleError):
            greedy_dual_certificate(PATH, np.array([3.0, 2.0]), 1, WeightVector([0.0, 1.0]))
        with pytest.raises(ConfigError):
            greedy_dual_certificate(PATH, np.array([3.0, 2.0]), 1, WeightVector([0.5, 0.0]))

    def test_random_sandwich(self):
        rng = np.random.default_rng(1)
        for _ in range(1000):
            g, c, b = random_instance(rng)
            w = greedy_b_matching(g, c, b)
            assert check_b_feasible(g, w, b)
            assert set(np.unique(w.values)) <= {0.0, 1.0}
            cert = greedy_dual_certificate(g, c, b, w)
            slack = cert.s[g.tails] + cert.s[g.heads] + cert.ell - c
            assert np.all(slack >= -1e-9)
            greedy_value = matching_value(c, w)
            opt, w_opt = exact_lp_oracle_small(g, c, b)
            assert check_b_feasible(g, w_opt, b)
            assert greedy_value >= 0.5 * opt - 1e-9
            assert opt <= cert.value + 1e-9
            assert cert.value <= 2 * greedy_value + 1e-9

    def test_exhaustive_half_approximation(self):
        edges_all = list(combinations(range(3), 2))
        for mask in product([0, 1], repeat=len(edges_all)):
            g = Graph.from_pairs(3, [e for e, keep in zip(edges_all, mask) if keep])
            for gains in product(range(5), repeat=g.m):
                c = np.array(gains, dtype=float)
                for b in (1, 2, 3):
                    greedy_value = matching_value(c, greedy_b_matching(g, c, b))
                    opt, _ = exact_lp_oracle_small(g, c, b)
                    assert 2 * greedy_value >= opt

    @pytest.mark.slow
    @pytest.mark.parametrize('n', [4, 5])
    def test_exhaustive_graphs_random_gains(self, n):
        rng = np.random.default_rng(n)
        edges_all = list(combinations(range(n), 2))
        for mask in product([0, 1], repeat=len(edges_all)):
            g = Graph.from_pairs(n, [e for e, keep in zip(edges_all, mask) if keep])
            for _ in range(3):
                c = rng.integers(0, 5, size=g.m).astype(float)
                b = int(rng.integers(1, 4))
                greedy_value = matching_value(c, greedy_b_matching(g, c, b))
                opt, _ = exact_lp_oracle_small(g, c, b)
                assert 2 * greedy_value >= opt


@pytest.mark.oracletest
class TestExactLP:

    def test_triangle(self):
        opt, w = exact_lp_oracle_small(TRIANGLE, np.ones(3), 1)
        assert opt == 1.5
        assert w.values.tolist() == [0.5, 0.5, 0.5]

    def test_single_edge(self):
        opt, w = exact_lp_oracle_small(Graph(2, [(0, 1)]), np.array([5.0]), 3)
        assert opt == 5.0 and w.values.tolist() == [1.0]

    def test_empty(self):
        opt, w = exact_lp_oracle_small(Graph(3, np.zeros((0, 2))), np.zeros(0), 1)
        assert opt == 0.0 and len(w) == 0

    def test_too_large(self):
        g = Graph.from_pairs(7, list(combinations(range(7), 2)))
        with pytest.raises(InstanceTooLargeError):
            exact_lp_oracle_small(g, np.ones(g.m), 1)


@pytest.mark.oracletest
class TestPackingOracle:

    def test_single_edge(self):
        w = approx_packing_oracle(Graph(2, [(0, 1)]), np.array([2.0]), 1, eps=0.5)
        assert w.values.tolist() == [1.0]

    def test_triangle(self):
        w = approx_packing_oracle(TRIANGLE, np.ones(3), 1, eps=0.1)
        assert matching_value(np.ones(3), w) >= 1.35
        assert check_b_feasible(TRIANGLE, w, 1)

    def test_zero_gains(self):
        assert not approx_packing_oracle(TRIANGLE, np.zeros(3), 1).values.any()

    @pytest.mark.parametrize('eps', [0.0, 0.75])
    def test_invalid_eps(self, eps):
        with pytest.raises(ConfigError):
            approx_packing_oracle(TRIANGLE, np.ones(3), 1, eps=eps)

    def test_against_exact(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            g, c, b = random_instance(rng)
            eps = 0.1
            w = approx_packing_oracle(g, c, b, eps=eps)
            opt, _ = exact_lp_oracle_small(g, c, b)
            assert check_b_feasible(g, w, b)
            assert np.all(weighted_degrees(g, w) <= b + 1e-9)
            assert matching_value(c, w) >= (1 - eps) * opt - 1e-9

    def test_keeps_reported_optimum(self, mocker):
        # a solver point that overloads every vertex is halved and keeps 1.5 of the claimed optimum
        mocker.patch(
            'semirank.oracles.lp.linprog', return_value=mocker.Mock(status=0, x=np.ones(3), fun=-1.5, message='ok')
        )
        w = approx_packing_oracle(TRIANGLE, np.ones(3), 1, eps=0.1)
        assert w.values == pytest.approx([0.5, 0.5, 0.5])
        mocker.patch(
            'semirank.oracles.lp.linprog', return_value=mocker.Mock(status=0, x=np.ones(3), fun=-3.0, message='ok')
        )
        with pytest.raises(OracleError, match='below'):
            approx_packing_oracle(TRIANGLE, np.ones(3), 1, eps=0.1)
        assert approx_packing_oracle(TRIANGLE, np.ones(3), 1, eps=0.5).values == pytest.approx([0.5, 0.5, 0.5])

    def test_solver_failure(self, mocker):
        failed = mocker.Mock(status=4, x=None, message='numerical difficulties')
        mocker.patch('semirank.oracles.lp.linprog', return_value=failed)
        with pytest.raises(OracleError):
            approx_packing_oracle(TRIANGLE, np.ones(3), 1)

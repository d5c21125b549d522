import math
import numpy as np
import pytest

from semirank.graph import Graph, WeightVector
from semirank.mle import top_k, error_metrics, bq_diagnostics, write_theta
from semirank.sampling import BTLInstance, gen_btl_scores
from semirank.utils.errors import ConfigError


def complete_graph(n):
    iu, ju = np.triu_indices(n, k=1)
    return Graph(n, np.stack([iu, ju], axis=1))


@pytest.mark.mletest
class TestTopK:

    def test_examples(self):
        assert set(top_k(np.array([3.0, 1.0, 2.0]), 2).tolist()) == {0, 2}
        assert top_k(np.zeros(4), 2).tolist() == [0, 1]
        assert sorted(top_k(np.array([0.1, -0.3, 0.2]), 3).tolist()) == [0, 1, 2]

    def test_rank_order(self):
        assert top_k(np.array([1.0, 5.0, 3.0, 5.0]), 3).tolist() == [1, 3, 2]

    @pytest.mark.parametrize('k', [0, 4])
    def test_invalid(self, k):
        with pytest.raises(ConfigError):
            top_k(np.zeros(3), k)


@pytest.mark.mletest
class TestErrorMetrics:

    def test_exact(self):
        b = gen_btl_scores(6, 2, 0.5)
        assert tuple(error_metrics(b.theta_star, b)) == pytest.approx((0.0, 0.0, 1.0), abs=1e-12)

    def test_shift_invariance(self):
        b = BTLInstance([0.3, -0.2, 0.9, 0.0], 2)
        theta = b.theta_star + np.array([0.1, -0.05, 0.02, 0.0])
        assert error_metrics(theta + 7.0, b) == pytest.approx(error_metrics(theta, b))

    def test_accuracy(self):
        b = gen_btl_scores(5, 2, 1.0)
        m = error_metrics(np.array([1.0, 0.0, 2.0, 0.0, 0.0]), b)
        assert m.topk_accuracy == 0.5

    def test_triangle_inequalities(self):
        rng = np.random.default_rng(0)
        b = gen_btl_scores(20, 5, 0.4)
        for _ in range(200):
            theta = rng.standard_normal(20)
            m = error_metrics(theta, b)
            assert m.pairwise_linf <= 2 * m.linf + 1e-12
            assert m.linf <= m.pairwise_linf + 1e-12

    def test_mismatched(self):
        with pytest.raises(ConfigError):
            error_metrics(np.zeros(3), gen_btl_scores(4, 1, 1.0))


@pytest.mark.mletest
class TestBQDiagnostics:

    def test_complete_graph(self):
        n, kappa, reps = 12, 2.0, 10
        g = complete_graph(n)
        bq = bq_diagnostics(g, None, kappa, reps, float(n))
        assert bq.b_bound == pytest.approx(kappa * math.sqrt(math.log(n) / (reps * n)))
        assert bq.q_bound == pytest.approx(kappa ** 3 * (n - 1) ** 2 * math.log(n) ** 2 / (reps * n ** 3))

    def test_reps_scaling(self):
        g = complete_graph(8)
        w = WeightVector(np.linspace(0.2, 1.0, g.m))
        a = bq_diagnostics(g, w, 3.0, 10, 2.5)
        b = bq_diagnostics(g, w, 3.0, 20, 2.5)
        assert b.b_bound == pytest.approx(a.b_bound / math.sqrt(2))
        assert b.q_bound == pytest.approx(a.q_bound / 2)

    def test_threshold_identity(self):
        # Q = 4B solved for L gives L = kappa^4 w_max d_max^4 log^3(n) / (16 lambda^5)
        g = complete_graph(10)
        w = WeightVector(np.full(g.m, 0.5))
        kappa, lam = 1.7, 3.0
        w_max, d_max, log_n = 0.5, 4.5, math.log(10)
        reps = kappa ** 4 * w_max * d_max ** 4 * log_n ** 3 / (16 * lam ** 5)
        bq = bq_diagnostics(g, w, kappa, 1, lam)
        # both bounds are powers of L, so rescale instead of passing a fractional L
        b_at = bq.b_bound / math.sqrt(reps)
        q_at = bq.q_bound / reps
        assert q_at == pytest.approx(4 * b_at)

    def test_invalid(self):
        with pytest.raises(ConfigError):
            bq_diagnostics(complete_graph(3), None, 1.0, 1, 0.0)


@pytest.mark.mletest
class TestWriteTheta:

    def test_format(self, tmp_path):
        path = str(tmp_path / 'theta.csv')
        write_theta(path, np.array([0.5, -0.5, 0.1]))
        with open(path) as f:
            assert f.read() == 'vertex,theta\n0,0.5\n1,-0.5\n2,0.10000000000000001\n'

import math
import numpy as np
import pytest
import scipy.linalg

from semirank.graph import Graph, WeightVector, build_laplacian
from semirank.spectral import exp_action, exp_action_scaled, jl_dimension, jl_matrix, centered_gram_trace, \
    Embedding
from semirank.spectral.expm import _lanczos_column
from semirank.utils.errors import ConfigError, ExpActionError


@pytest.fixture(scope='module')
def random_instance():
    rng = np.random.default_rng(0)
    n = 50
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.shape[0]) < 0.15
    g = Graph(n, np.stack([iu[keep], ju[keep]], axis=1))
    w = WeightVector(rng.uniform(0.1, 1.5, size=g.m))
    return g, w, rng.standard_normal((n, 4))


@pytest.mark.spectraltest
class TestExpAction:

    @pytest.mark.parametrize('method', ['lanczos', 'dense'])
    def test_eta_zero(self, random_instance, method):
        g, w, V0 = random_instance
        assert np.array_equal(exp_action(g, w, 0.0, V0, method=method), V0)

    @pytest.mark.parametrize('method', ['lanczos', 'dense'])
    def test_single_edge(self, method):
        g = Graph(2, [(0, 1)])
        eta = 0.4
        out = exp_action(g, None, eta, np.array([1.0, 0.0]), delta=1e-12, method=method)
        expected = [(1 + math.exp(-2 * eta)) / 2, (1 - math.exp(-2 * eta)) / 2]
        assert np.allclose(out, expected, atol=1e-12)

    @pytest.mark.parametrize('method', ['lanczos', 'dense'])
    @pytest.mark.parametrize('delta', [1e-4, 1e-8])
    @pytest.mark.parametrize('eta', [0.05, 1.0, 6.0])
    def test_against_dense_oracle(self, random_instance, method, delta, eta):
        g, w, V0 = random_instance
        oracle = scipy.linalg.expm(-eta * build_laplacian(g, w)) @ V0
        out = exp_action(g, w, eta, V0, delta=delta, method=method)
        err = np.linalg.norm(out - oracle, axis=0)
        assert np.all(err <= delta * np.linalg.norm(V0, axis=0))

    def test_semigroup(self, random_instance):
        g, w, V0 = random_instance
        delta = 1e-9
        two_step = exp_action(g, w, 0.3, exp_action(g, w, 0.5, V0, delta=delta), delta=delta)
        one_step = exp_action(g, w, 0.8, V0, delta=delta)
        assert np.all(np.linalg.norm(two_step - one_step, axis=0) <= 3 * delta * np.linalg.norm(V0, axis=0))

    @pytest.mark.parametrize('method', ['lanczos', 'dense'])
    def test_scaled_centered(self, random_instance, method):
        g, w, V0 = random_instance
        centered = V0 - V0.mean(axis=0)
        eta = 40.0
        scaled, log_scale = exp_action_scaled(g, w, eta, centered, delta=1e-10, method=method, deflate=True)
        evals, evecs = np.linalg.eigh(build_laplacian(g, w))
        gap = evals[1]
        # oracle on 1^perp, shifted by the gap so it stays O(1)
        oracle = evecs[:, 1:] @ (np.exp(-eta * (evals[1:] - gap))[:, None] * (evecs[:, 1:].T @ centered))
        assert log_scale <= -eta * gap + 1e-6
        assert np.abs(scaled).max() > 1e-6
        restored = scaled * np.exp(log_scale + eta * gap)
        assert np.allclose(restored, oracle, atol=1e-8 * np.abs(centered).max())

    def test_lanczos_never_densifies(self, random_instance, mocker):
        g, w, V0 = random_instance
        spy = mocker.patch('semirank.spectral.expm.build_laplacian', side_effect=AssertionError('dense'))
        exp_action(g, w, 1.0, V0, method='lanczos')
        assert spy.call_count == 0

    def test_max_dim_exceeded(self, random_instance):
        g, w, V0 = random_instance
        with pytest.raises(ExpActionError, match='error estimate'):
            exp_action(g, w, 5.0, V0, delta=1e-12, max_dim=2)

    @pytest.mark.parametrize('delta', [1e-4, 1e-8])
    def test_error_estimate(self, random_instance, delta):
        g, w, V0 = random_instance
        lap = build_laplacian(g, w)
        v = V0[:, 0]
        y, shift, estimate = _lanczos_column(lambda x: lap @ x, v, 0.7, delta, g.n)
        assert 0.0 <= estimate <= delta
        exact = scipy.linalg.expm(-0.7 * lap) @ v
        assert np.linalg.norm(np.exp(-0.7 * shift) * y - exact) <= delta * np.linalg.norm(v)

    def test_invalid(self, random_instance):
        g, w, V0 = random_instance
        with pytest.raises(ConfigError):
            exp_action(g, w, -1.0, V0)
        with pytest.raises(ConfigError):
            exp_action(g, w, 1.0, V0[:10])
        with pytest.raises(ConfigError):
            exp_action(g, w, 1.0, V0, method='chebyshev')


@pytest.mark.spectraltest
class TestSketch:

    def test_entries(self):
        R = jl_matrix(30, 17, seed=3)
        assert R.shape == (30, 17)
        assert np.all(np.abs(R) == 1 / math.sqrt(17))
        assert np.array_equal(R, jl_matrix(30, 17, seed=3))
        with pytest.raises(ConfigError):
            jl_matrix(3, 0, seed=0)

    def test_identical_rows(self):
        A = np.tile(np.random.default_rng(0).standard_normal(40), (3, 1))
        S = A @ jl_matrix(40, 9, seed=1)
        assert np.linalg.norm(S[0] - S[2]) == 0.0

    def test_dimension(self):
        assert jl_dimension(200, 0.5, 120) == math.ceil(120 * math.log(200) / 0.25)
        assert jl_dimension(100, 0.25) == math.ceil(24 * math.log(100) / 0.0625)

    @pytest.mark.slow
    def test_distance_preservation(self):
        n, eps = 200, 0.5
        k = jl_dimension(n, eps, 120)
        A = np.random.default_rng(7).standard_normal((40, n))
        iu, ju = np.triu_indices(A.shape[0], k=1)
        exact = np.sum((A[iu] - A[ju]) ** 2, axis=1)
        for seed in range(50):
            S = A @ jl_matrix(n, k, seed=seed)
            sketched = np.sum((S[iu] - S[ju]) ** 2, axis=1)
            ratio = sketched / exact
            assert np.mean((ratio > 1 - eps) & (ratio < 1 + eps)) >= 0.95

    def test_centered_gram_trace(self):
        assert centered_gram_trace(np.tile([[1.0, -2.0]], (5, 1))) == pytest.approx(0.0, abs=1e-15)
        assert centered_gram_trace(np.array([[1.0], [0.0]])) == pytest.approx(0.5)
        U = np.random.default_rng(2).standard_normal((25, 6))
        proj = np.eye(25) - np.ones((25, 25)) / 25
        dense = np.trace(proj @ U @ U.T)
        assert abs(centered_gram_trace(U) - dense) <= 1e-10 * dense

    def test_embedding_normalization(self):
        U = np.random.default_rng(4).standard_normal((12, 5))
        emb = Embedding.from_unnormalized(U)
        assert centered_gram_trace(emb.matrix) == pytest.approx(1.0, abs=1e-8)
        assert emb.columns == 5 and emb.n == 12
        with pytest.raises(ConfigError):
            Embedding.from_unnormalized(np.ones((4, 2)))

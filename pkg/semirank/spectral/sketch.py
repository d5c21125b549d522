import math
from typing import Union
import numpy as np

from semirank.utils.errors import ConfigError


def jl_dimension(n: int, eps: float, jl_const: float = 24.0) -> int:
    r"""
    Overview:
        Sketch width ``k = ceil(jl_const * ln(n) / eps^2)``; the proven constant is 120.
    """
    if not (0 < eps < 1):
        raise ConfigError("eps must lie in (0, 1), got {}".format(eps))
    return max(1, int(math.ceil(jl_const * math.log(n) / eps ** 2)))


def jl_matrix(n: int, k: int, seed: Union[int, np.random.SeedSequence, np.random.Generator]) -> np.ndarray:
    r"""
    Overview:
        ``n x k`` random sign matrix with entries ``+-1/sqrt(k)``, iid and uniform.
    """
    if k < 1:
        raise ConfigError("k must be >= 1, got {}".format(k))
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    signs = rng.integers(0, 2, size=(n, k), dtype=np.int8) * 2 - 1
    return signs.astype(np.float64) / math.sqrt(k)


def centered_gram_trace(U: np.ndarray) -> float:
    r"""
    Overview:
        ``<Pi, U U^T> = Tr(U U^T) - |U^T 1|^2 / n`` in ``O(nk)``, where ``Pi`` projects onto ``1^perp``.
        Computed as the squared norm of the column-centered ``U`` to avoid cancellation.
    """
    U = np.asarray(U, dtype=np.float64)
    if U.ndim == 1:
        U = U[:, None]
    centered = U - U.mean(axis=0, keepdims=True)
    return float(np.sum(centered ** 2))


class Embedding:
    r"""
    Overview:
        Gram factor ``V`` (``n x k``) of a density-matrix candidate ``X = V V^T`` on ``1^perp``.
    Interface:
        from_unnormalized, matrix, columns, n, gram
    """

    def __init__(self, matrix: np.ndarray) -> None:
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2:
            raise ConfigError("embedding must be a 2-d matrix")
        if not np.all(np.isfinite(matrix)):
            raise ConfigError("embedding must be finite")
        self._matrix = matrix

    @classmethod
    def from_unnormalized(cls, U: np.ndarray) -> 'Embedding':
        r"""
        Overview:
            ``V = U / sqrt(<Pi, U U^T>)`` so that ``<Pi, V V^T> = 1``.
        """
        trace = centered_gram_trace(U)
        if not trace > 0:
            raise ConfigError("cannot normalize an embedding whose centered Gram trace is {}".format(trace))
        return cls(np.asarray(U, dtype=np.float64) / math.sqrt(trace))

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def n(self) -> int:
        return self._matrix.shape[0]

    @property
    def columns(self) -> int:
        return self._matrix.shape[1]

    def gram(self) -> np.ndarray:
        return self._matrix @ self._matrix.T

    def __repr__(self) -> str:
        return 'Embedding(n={}, k={})'.format(self.n, self.columns)

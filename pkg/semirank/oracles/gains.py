from typing import Sequence, Union
import numpy as np

from semirank.graph import Graph
from semirank.spectral import Embedding
from semirank.utils.errors import ConfigError

# rows of the embedding gathered per block of edges
_GATHER_BUDGET = 1 << 22


class GainVector:
    r"""
    Overview:
        Per-edge gains ``c_ij = <L_ij, V V^T> = |v_i - v_j|^2``, nonnegative and finite.
    """

    def __init__(self, c: Union[Sequence[float], np.ndarray]) -> None:
        c = np.array(c, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(c)) or np.any(c < 0):
            raise ConfigError("gains must be finite and nonnegative")
        c.setflags(write=False)
        self._c = c

    @property
    def c(self) -> np.ndarray:
        return self._c

    def __len__(self) -> int:
        return self._c.shape[0]

    def __array__(self, dtype=None):
        return self._c if dtype is None else self._c.astype(dtype)

    def __repr__(self) -> str:
        return 'GainVector(m={})'.format(len(self))


def edge_gains(g: Graph, emb: Union[Embedding, np.ndarray]) -> GainVector:
    r"""
    Overview:
        Squared row distances of the embedding along every edge, ``O(k)`` per edge.
    """
    V = emb.matrix if isinstance(emb, Embedding) else np.asarray(emb, dtype=np.float64)
    if V.ndim == 1:
        V = V[:, None]
    if V.shape[0] != g.n:
        raise ConfigError("embedding has {} rows but graph has {} vertices".format(V.shape[0], g.n))
    c = np.empty(g.m)
    block = max(1, _GATHER_BUDGET // max(1, V.shape[1]))
    for start in range(0, g.m, block):
        stop = min(start + block, g.m)
        diff = V[g.tails[start:stop]] - V[g.heads[start:stop]]
        c[start:stop] = np.einsum('ij,ij->i', diff, diff)
    return GainVector(c)

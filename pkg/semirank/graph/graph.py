from typing import Iterable, Optional, Sequence, Union
import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _cc

from semirank.utils.errors import ConfigError

DEFAULT_TOL = 1e-12


class Graph:
    r"""
    Overview:
        Undirected simple graph on vertices ``0..n-1``. Edges are stored canonically as ``(min, max)``
        pairs sorted lexicographically, and the edge index used by every per-edge vector is the
        position in that sorted list. ``er_mask`` optionally marks the edges of the hidden
        Erdos-Renyi base graph (simulation metadata).
    Interface:
        n, m, edges, tails, heads, er_mask, edge_index, subgraph, er_subgraph, union
    """

    def __init__(self, n: int, edges: Union[Sequence, np.ndarray], er_mask: Optional[Sequence[bool]] = None) -> None:
        n = int(n)
        if n < 2:
            raise ConfigError("graph needs at least 2 vertices, got n={}".format(n))
        pairs = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if er_mask is not None:
            er_mask = np.asarray(er_mask, dtype=bool).reshape(-1)
            if er_mask.shape[0] != pairs.shape[0]:
                raise ConfigError("er_mask has {} entries for {} edges".format(er_mask.shape[0], pairs.shape[0]))
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise ConfigError("edge endpoint out of range [0, {})".format(n))
        if np.any(pairs[:, 0] == pairs[:, 1]):
            v = int(pairs[pairs[:, 0] == pairs[:, 1]][0, 0])
            raise ConfigError("self-loop at vertex {}".format(v))
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        order = np.lexsort((hi, lo))
        canon = np.stack([lo[order], hi[order]], axis=1) if pairs.size else np.zeros((0, 2), dtype=np.int64)
        if canon.shape[0] > 1:
            dup = np.all(canon[1:] == canon[:-1], axis=1)
            if np.any(dup):
                i, j = canon[1:][dup][0]
                raise ConfigError("duplicate edge ({}, {})".format(i, j))
        self._n = n
        self._edges = canon
        self._edges.setflags(write=False)
        self._keys = canon[:, 0] * n + canon[:, 1]
        self._keys.setflags(write=False)
        if er_mask is not None:
            er_mask = er_mask[order].copy()
            er_mask.setflags(write=False)
        self._er_mask = er_mask

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable, er_mask: Optional[Sequence[bool]] = None) -> 'Graph':
        return cls(n, np.array(list(pairs), dtype=np.int64).reshape(-1, 2), er_mask)

    def edge_index(self, pairs: Union[Sequence, np.ndarray]) -> np.ndarray:
        r"""
        Overview:
            Canonical edge indices of the given vertex pairs (either orientation). Raises if a pair
            is not an edge.
        """
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        keys = np.minimum(pairs[:, 0], pairs[:, 1]) * self._n + np.maximum(pairs[:, 0], pairs[:, 1])
        idx = np.searchsorted(self._keys, keys)
        idx_c = np.minimum(idx, max(self.m - 1, 0))
        found = (idx < self.m) & (self._keys[idx_c] == keys) if self.m else np.zeros(len(keys), dtype=bool)
        if not np.all(found):
            i, j = pairs[~found][0]
            raise ConfigError("({}, {}) is not an edge of the graph".format(i, j))
        return idx

    def has_edge(self, i: int, j: int) -> bool:
        key = min(i, j) * self._n + max(i, j)
        idx = np.searchsorted(self._keys, key)
        return bool(idx < self.m and self._keys[idx] == key)

    def subgraph(self, mask: Sequence[bool]) -> 'Graph':
        mask = np.asarray(mask, dtype=bool)
        if mask.shape[0] != self.m:
            raise ConfigError("edge mask has {} entries for {} edges".format(mask.shape[0], self.m))
        er = None if self._er_mask is None else self._er_mask[mask]
        return Graph(self._n, self._edges[mask], er)

    def er_subgraph(self) -> 'Graph':
        if self._er_mask is None:
            raise ConfigError("graph carries no er_mask")
        return self.subgraph(self._er_mask)

    def union(self, pairs: Union[Sequence, np.ndarray]) -> 'Graph':
        r"""
        Overview:
            Monotone augmentation: add ``pairs`` that are not yet edges. Existing edges keep their
            ``er_mask`` entry, added edges are marked ``False``.
        """
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        keys = np.unique(lo * self._n + hi)
        new_keys = np.setdiff1d(keys, self._keys, assume_unique=True)
        new_edges = np.stack([new_keys // self._n, new_keys % self._n], axis=1)
        edges = np.concatenate([self._edges, new_edges], axis=0)
        old_mask = self._er_mask if self._er_mask is not None else np.ones(self.m, dtype=bool)
        er = np.concatenate([old_mask, np.zeros(len(new_keys), dtype=bool)])
        return Graph(self._n, edges, er)

    def __repr__(self) -> str:
        return 'Graph(n={}, m={})'.format(self._n, self.m)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        same_mask = (self._er_mask is None and other._er_mask is None) or (
            self._er_mask is not None and other._er_mask is not None and np.array_equal(self._er_mask, other._er_mask)
        )
        return self._n == other._n and np.array_equal(self._edges, other._edges) and same_mask

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return self._edges.shape[0]

    @property
    def edges(self) -> np.ndarray:
        return self._edges

    @property
    def tails(self) -> np.ndarray:
        # lower-indexed endpoint j of the canonical orientation i > j
        return self._edges[:, 0]

    @property
    def heads(self) -> np.ndarray:
        return self._edges[:, 1]

    @property
    def er_mask(self) -> Optional[np.ndarray]:
        return self._er_mask


class WeightVector:
    r"""
    Overview:
        Nonnegative finite weights, one per edge of an associated graph (canonical edge order).
    """

    def __init__(self, values: Union[Sequence[float], np.ndarray]) -> None:
        values = np.array(values, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(values)):
            raise ConfigError("weights must be finite")
        if np.any(values < 0):
            raise ConfigError("weights must be nonnegative, min is {}".format(values.min()))
        values.setflags(write=False)
        self._values = values

    @classmethod
    def ones(cls, g: Graph) -> 'WeightVector':
        return cls(np.ones(g.m))

    @classmethod
    def zeros(cls, g: Graph) -> 'WeightVector':
        return cls(np.zeros(g.m))

    @classmethod
    def indicator(cls, mask: Sequence[bool]) -> 'WeightVector':
        return cls(np.asarray(mask, dtype=np.float64))

    def __len__(self) -> int:
        return self._values.shape[0]

    def __array__(self, dtype=None):
        return self._values if dtype is None else self._values.astype(dtype)

    def __mul__(self, other) -> 'WeightVector':
        return WeightVector(self._values * np.asarray(other, dtype=np.float64))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return 'WeightVector(m={}, w_max={})'.format(len(self), self.w_max)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def w_max(self) -> float:
        return float(self._values.max()) if len(self) else 0.0


def _as_values(g: Graph, w: Optional[Union[WeightVector, np.ndarray]]) -> np.ndarray:
    if w is None:
        return np.ones(g.m)
    values = w.values if isinstance(w, WeightVector) else np.asarray(w, dtype=np.float64).reshape(-1)
    if values.shape[0] != g.m:
        raise ConfigError("weight vector has {} entries but graph has {} edges".format(values.shape[0], g.m))
    return values


def build_laplacian(g: Graph, w: Optional[WeightVector] = None) -> np.ndarray:
    r"""
    Overview:
        Dense weighted Laplacian ``L_w = sum_ij w_ij (e_i - e_j)(e_i - e_j)^T``.
    Arguments:
        - g (:obj:`Graph`): the graph
        - w (:obj:`WeightVector`): per-edge weights, unit weights when omitted
    Returns:
        - laplacian (:obj:`np.ndarray`): symmetric ``n x n`` matrix with zero row sums
    """
    values = _as_values(g, w)
    adj = np.zeros((g.n, g.n))
    adj[g.tails, g.heads] = values
    adj += adj.T
    lap = -adj
    lap[np.diag_indices(g.n)] = adj.sum(axis=1)
    return lap


def laplacian_operator(g: Graph, w: Optional[WeightVector] = None) -> sp.csr_matrix:
    r"""
    Overview:
        Sparse ``L_w`` assembled from the signed incidence matrix, for matrix-free products.
    """
    values = _as_values(g, w)
    rows = np.repeat(np.arange(g.m), 2)
    cols = g.edges.reshape(-1)
    signs = np.tile(np.array([-1.0, 1.0]), g.m)
    incidence = sp.csr_matrix((signs, (rows, cols)), shape=(g.m, g.n))
    return (incidence.T @ sp.diags(values) @ incidence).tocsr()


def weighted_degrees(g: Graph, w: Optional[WeightVector] = None) -> np.ndarray:
    values = _as_values(g, w)
    return np.bincount(g.tails, values, minlength=g.n) + np.bincount(g.heads, values, minlength=g.n)


def connected_components(g: Graph, w: Optional[WeightVector] = None, tol: float = DEFAULT_TOL) -> np.ndarray:
    r"""
    Overview:
        Component label per vertex of the subgraph made of edges with ``w > tol``.
    """
    values = _as_values(g, w)
    keep = values > tol
    adj = sp.coo_matrix((np.ones(int(keep.sum())), (g.tails[keep], g.heads[keep])), shape=(g.n, g.n))
    _, labels = _cc(adj, directed=False)
    return labels


def is_connected(g: Graph, w: Optional[WeightVector] = None, tol: float = DEFAULT_TOL) -> bool:
    if tol < 0:
        raise ConfigError("tol must be nonnegative")
    labels = connected_components(g, w, tol)
    return bool(np.all(labels == labels[0]))


def smallest_component(g: Graph, w: Optional[WeightVector] = None, tol: float = DEFAULT_TOL) -> np.ndarray:
    labels = connected_components(g, w, tol)
    counts = np.bincount(labels)
    return np.flatnonzero(labels == int(np.argmin(counts)))


def volume(g: Graph, w: Optional[WeightVector], s: Iterable[int]) -> float:
    r"""
    Overview:
        ``vol(S)``, the sum of weighted degrees over the vertex set ``s``.
    """
    s = np.unique(np.asarray(list(s), dtype=np.int64))
    if s.size and (s.min() < 0 or s.max() >= g.n):
        raise ConfigError("vertex out of range [0, {})".format(g.n))
    return float(weighted_degrees(g, w)[s].sum())

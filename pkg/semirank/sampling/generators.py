from typing import Sequence
import numpy as np

from ditk import logging

from semirank.graph import Graph
from semirank.utils.errors import ConfigError


def gen_er(n: int, p: float, seed: int) -> Graph:
    r"""
    Overview:
        Erdos-Renyi graph ``G(n, p)``: every unordered pair is an edge independently with
        probability ``p``. All edges are marked in ``er_mask``.
    """
    if n < 2:
        raise ConfigError("n must be >= 2, got {}".format(n))
    if not (0 < p <= 1):
        raise ConfigError("p must lie in (0, 1], got {}".format(p))
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.shape[0]) < p
    edges = np.stack([iu[keep], ju[keep]], axis=1)
    return Graph(n, edges, np.ones(edges.shape[0], dtype=bool))


def apply_clique_adversary(g: Graph, seed: int) -> Graph:
    r"""
    Overview:
        Monotone clique-planting adversary. Picks ``A``, ``floor(n / 3)`` vertices among the first
        ``floor(n / 2)``, and ``B``, ``floor(n / 3)`` vertices among the remaining ones, then adds every
        pair inside ``A`` and inside ``B``. Every vertex of ``A`` or ``B`` ends with degree at least
        ``floor(n / 3) - 1``. Planted edges are flagged ``er_mask=False``; edges already present keep
        their flag.
    """
    n = g.n
    if g.er_mask is None:
        raise ConfigError("clique adversary needs a graph with er_mask")
    rng = np.random.default_rng(seed)
    half, third = n // 2, n // 3
    a = np.sort(rng.choice(half, size=third, replace=False))
    b = np.sort(half + rng.choice(n - half, size=third, replace=False))
    pairs = []
    for part in (a, b):
        ii, jj = np.triu_indices(third, k=1)
        pairs.append(np.stack([part[ii], part[jj]], axis=1))
    out = g.union(np.concatenate(pairs, axis=0))
    logging.debug('clique adversary planted {} new edges on n={}'.format(out.m - g.m, n))
    return out


def gen_cluster_graph(sizes: Sequence[int], p_within: Sequence[float], q: float, seed: int) -> Graph:
    r"""
    Overview:
        Cluster sampling model with the coupled construction: draw ``delta_ij ~ U(0, 1)`` once per
        pair; the pair is an edge when ``delta_ij < p_t`` for two vertices of cluster ``t`` or when
        ``delta_ij < q``. ``er_mask`` marks the ``G(n, q)`` subgraph ``{delta_ij < q}``.
    Arguments:
        - sizes (:obj:`Sequence[int]`): cluster sizes, vertices are assigned to clusters in order
        - p_within (:obj:`Sequence[float]`): within-cluster edge probabilities
        - q (:obj:`float`): cross-cluster edge probability, ``q <= min(p_within)``
    """
    sizes = [int(s) for s in sizes]
    p_within = [float(p) for p in p_within]
    if len(sizes) != len(p_within) or not sizes:
        raise ConfigError("sizes and p_within must be non-empty and of equal length")
    if any(s < 1 for s in sizes):
        raise ConfigError("cluster sizes must be positive")
    if any(not (0 < p <= 1) for p in p_within) or not (0 < q <= 1):
        raise ConfigError("probabilities must lie in (0, 1]")
    if q > min(p_within):
        raise ConfigError("q={} exceeds a within-cluster probability {}".format(q, min(p_within)))
    n = sum(sizes)
    if n < 2:
        raise ConfigError("cluster graph needs at least 2 vertices")
    labels = np.repeat(np.arange(len(sizes)), sizes)
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    delta = rng.random(iu.shape[0])
    same = labels[iu] == labels[ju]
    threshold = np.where(same, np.asarray(p_within)[labels[iu]], q)
    keep = delta < threshold
    er = delta[keep] < q
    return Graph(n, np.stack([iu[keep], ju[keep]], axis=1), er)

from typing import Optional, Sequence, Union
import numpy as np
from scipy.special import expit

from semirank.graph import Graph
from semirank.utils.errors import ConfigError, GraphFormatError
from semirank.utils.io_utils import fmt_float


class BTLInstance:
    r"""
    Overview:
        Latent Bradley-Terry-Luce scores. ``theta_star`` is centered on construction (the model is
        shift invariant) and ``delta_k`` is the gap between the ``K``-th and ``K+1``-th largest
        scores, which must be positive.
    Interface:
        theta_star, k_top, delta_k, kappa, n
    """

    def __init__(self, theta_star: Union[Sequence[float], np.ndarray], k_top: int) -> None:
        theta = np.array(theta_star, dtype=np.float64).reshape(-1)
        n = theta.shape[0]
        if n < 2:
            raise ConfigError("BTL instance needs at least 2 items")
        if not np.all(np.isfinite(theta)):
            raise ConfigError("scores must be finite")
        if not (1 <= k_top < n):
            raise ConfigError("K must satisfy 1 <= K < n, got K={} n={}".format(k_top, n))
        theta = theta - theta.mean()
        ordered = np.sort(theta)[::-1]
        delta_k = float(ordered[k_top - 1] - ordered[k_top])
        if delta_k <= 0:
            raise ConfigError("score gap at K={} must be positive, got {}".format(k_top, delta_k))
        theta.setflags(write=False)
        self._theta = theta
        self._k_top = int(k_top)
        self._delta_k = delta_k

    @property
    def theta_star(self) -> np.ndarray:
        return self._theta

    @property
    def n(self) -> int:
        return self._theta.shape[0]

    @property
    def k_top(self) -> int:
        return self._k_top

    @property
    def delta_k(self) -> float:
        return self._delta_k

    @property
    def kappa(self) -> float:
        return float(np.exp(self._theta.max() - self._theta.min()))

    def __repr__(self) -> str:
        return 'BTLInstance(n={}, K={}, delta_k={:.4g})'.format(self.n, self._k_top, self._delta_k)


class ComparisonData:
    r"""
    Overview:
        Averaged comparison outcomes, one entry per canonical edge. For edge ``(j, i)`` stored with
        ``j < i``, ``y`` is the fraction of the ``reps`` comparisons won by the lower-indexed
        item ``j``; ``y_ji = 1 - y`` is the fraction won by ``i``.
    Arguments:
        - y (:obj:`np.ndarray`): win rates in canonical edge order
        - reps (:obj:`int`): number of repetitions ``L`` per edge
        - strict (:obj:`bool`): require every ``y`` to lie on the ``1/L`` grid
    """

    def __init__(self, y: Union[Sequence[float], np.ndarray], reps: int, strict: bool = True) -> None:
        y = np.array(y, dtype=np.float64).reshape(-1)
        reps = int(reps)
        if reps < 1:
            raise ConfigError("L must be >= 1, got {}".format(reps))
        if not np.all(np.isfinite(y)) or np.any(y < 0) or np.any(y > 1):
            raise ConfigError("win rates must lie in [0, 1]")
        if strict:
            counts = y * reps
            if np.any(np.abs(counts - np.round(counts)) > 1e-9 * reps):
                raise ConfigError("win rates must be multiples of 1/L with L={}".format(reps))
            y = np.round(counts) / reps
        y.setflags(write=False)
        self._y = y
        self._reps = reps

    @property
    def y(self) -> np.ndarray:
        return self._y

    @property
    def y_ji(self) -> np.ndarray:
        return 1.0 - self._y

    @property
    def reps(self) -> int:
        return self._reps

    def __len__(self) -> int:
        return self._y.shape[0]

    def __repr__(self) -> str:
        return 'ComparisonData(m={}, L={})'.format(len(self), self._reps)


def gen_btl_scores(n: int, k_top: int, delta_k: float) -> BTLInstance:
    r"""
    Overview:
        Two-level scores: the first ``K`` items get ``delta_k``, the rest 0, then centered.
    """
    if not (1 <= k_top < n):
        raise ConfigError("K must satisfy 1 <= K < n, got K={} n={}".format(k_top, n))
    if not delta_k > 0:
        raise ConfigError("delta_k must be positive, got {}".format(delta_k))
    theta = np.zeros(n)
    theta[:k_top] = delta_k
    return BTLInstance(theta, k_top)


def win_probability(g: Graph, theta: np.ndarray) -> np.ndarray:
    r"""
    Overview:
        Per canonical edge ``(j, i)``, ``j < i``, the probability that ``j`` wins:
        ``e^{theta_j} / (e^{theta_i} + e^{theta_j})``.
    """
    theta = np.asarray(theta, dtype=np.float64)
    return expit(theta[g.tails] - theta[g.heads])


def sample_comparisons(
        g: Graph, b: BTLInstance, reps: int, seed: Union[int, np.random.SeedSequence]
) -> ComparisonData:
    r"""
    Overview:
        Draw ``L`` iid BTL outcomes per edge and average them. The number of wins of each edge is
        one binomial draw, taken in canonical edge order from the generator seeded by ``seed``.
    Arguments:
        - g (:obj:`Graph`): comparison graph
        - b (:obj:`BTLInstance`): latent scores, one per vertex of ``g``
        - reps (:obj:`int`): repetitions ``L >= 1``
        - seed (:obj:`int`): generator seed
    Returns:
        - data (:obj:`ComparisonData`): averaged outcomes
    """
    if reps < 1:
        raise ConfigError("L must be >= 1, got {}".format(reps))
    if b.n != g.n:
        raise ConfigError("BTL instance has {} items but graph has {} vertices".format(b.n, g.n))
    rng = np.random.default_rng(seed)
    wins = rng.binomial(int(reps), win_probability(g, b.theta_star))
    return ComparisonData(wins / float(reps), reps)


def restrict_comparisons(data: ComparisonData, g: Graph, mask: Sequence[bool]) -> ComparisonData:
    r"""
    Overview:
        Outcomes on the sub-edge-set selected by ``mask``, aligned with ``g.subgraph(mask)``.
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.shape[0] != g.m or len(data) != g.m:
        raise ConfigError("mask and comparison data must have one entry per edge of the graph")
    return ComparisonData(data.y[mask], data.reps)


def write_comparisons(path: str, g: Graph, data: ComparisonData) -> None:
    if len(data) != g.m:
        raise ConfigError("comparison data has {} entries but graph has {} edges".format(len(data), g.m))
    with open(path, 'w', newline='\n') as f:
        f.write('{}\n'.format(data.reps))
        for k in range(g.m):
            f.write('{} {} {}\n'.format(int(g.heads[k]), int(g.tails[k]), fmt_float(data.y[k])))


def read_comparisons(path: str, g: Graph, strict: Optional[bool] = True) -> ComparisonData:
    r"""
    Overview:
        Read the comparison file format: header ``L``, then one line ``i j y`` per edge with
        ``i > j``. Every edge of ``g`` must appear exactly once.
    """
    try:
        with open(path, 'r') as f:
            raw = f.readlines()
    except OSError as e:
        raise ConfigError("cannot read {}: {}".format(path, e))
    lines = [(no, line.split('#', 1)[0].split()) for no, line in enumerate(raw, start=1)]
    lines = [(no, tokens) for no, tokens in lines if tokens]
    if not lines:
        raise GraphFormatError(path, 1, "empty file, expected header 'L'")
    head_no, head = lines[0]
    try:
        reps = int(head[0])
    except ValueError:
        raise GraphFormatError(path, head_no, "L must be an integer, got '{}'".format(head[0]))
    if len(head) != 1 or reps < 1:
        raise GraphFormatError(path, head_no, "header must be a single integer L >= 1")
    y = np.full(g.m, np.nan)
    for lineno, tokens in lines[1:]:
        if len(tokens) != 3:
            raise GraphFormatError(path, lineno, "expected 'i j y'")
        try:
            i, j, val = int(tokens[0]), int(tokens[1]), float(tokens[2])
        except ValueError:
            raise GraphFormatError(path, lineno, "cannot parse '{}'".format(' '.join(tokens)))
        if i <= j:
            raise GraphFormatError(path, lineno, "edges must be written with i > j")
        if not (0 <= j and i < g.n) or not g.has_edge(i, j):
            raise GraphFormatError(path, lineno, "({}, {}) is not an edge of the graph".format(i, j))
        k = int(g.edge_index([(j, i)])[0])
        if not np.isnan(y[k]):
            raise GraphFormatError(path, lineno, "duplicate edge ({}, {})".format(i, j))
        y[k] = val
    if np.any(np.isnan(y)):
        k = int(np.flatnonzero(np.isnan(y))[0])
        raise ConfigError("{}: no outcome for edge ({}, {})".format(path, int(g.heads[k]), int(g.tails[k])))
    return ComparisonData(y, reps, strict=bool(strict))

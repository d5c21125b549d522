from dataclasses import dataclass
from typing import Optional, Union
import numpy as np

from semirank.graph import Graph, WeightVector, weighted_degrees
from semirank.oracles.gains import GainVector
from semirank.utils.errors import ConfigError, OracleError

FEASIBILITY_TOL = 1e-9


def _gains(g: Graph, c: Union[GainVector, np.ndarray]) -> np.ndarray:
    values = c.c if isinstance(c, GainVector) else np.asarray(c, dtype=np.float64).reshape(-1)
    if values.shape[0] != g.m:
        raise ConfigError("gain vector has {} entries but graph has {} edges".format(values.shape[0], g.m))
    return values


def _check_budget(b: int) -> int:
    if int(b) != b or b < 1:
        raise ConfigError("degree budget b must be an integer >= 1, got {}".format(b))
    return int(b)


def matching_value(c: Union[GainVector, np.ndarray], w: Union[WeightVector, np.ndarray]) -> float:
    return float(np.dot(np.asarray(c, dtype=np.float64), np.asarray(w, dtype=np.float64)))


def check_b_feasible(g: Graph, w: Union[WeightVector, np.ndarray], b: float, tol: float = FEASIBILITY_TOL) -> bool:
    r"""
    Overview:
        Whether ``0 <= w <= 1`` and every weighted degree is at most ``b``, each within ``tol``.
    """
    values = np.asarray(w, dtype=np.float64)
    if values.shape[0] != g.m:
        raise ConfigError("weight vector has {} entries but graph has {} edges".format(values.shape[0], g.m))
    if np.any(values < -tol) or np.any(values > 1 + tol):
        return False
    return bool(np.all(weighted_degrees(g, np.clip(values, 0, None)) <= b + tol))


def greedy_b_matching(g: Graph, c: Union[GainVector, np.ndarray], b: int) -> WeightVector:
    r"""
    Overview:
        Greedy maximal b-matching: scan edges by decreasing gain (ties by edge index) and take an
        edge with weight 1 while both endpoints have fewer than ``b`` matched edges. Edges with zero
        gain are never taken. The result is a 1/2-approximation of the fractional b-matching LP.
    Arguments:
        - g (:obj:`Graph`): graph
        - c (:obj:`GainVector`): per-edge gains
        - b (:obj:`int`): degree budget, ``b >= 1``
    Returns:
        - w (:obj:`WeightVector`): 0/1 matching indicator
    """
    values = _gains(g, c)
    b = _check_budget(b)
    order = np.lexsort((np.arange(g.m), -values))
    tails, heads = g.tails.tolist(), g.heads.tolist()
    count = [0] * g.n
    chosen = np.zeros(g.m)
    for e in order.tolist():
        if values[e] <= 0:
            break
        i, j = tails[e], heads[e]
        if count[i] < b and count[j] < b:
            chosen[e] = 1.0
            count[i] += 1
            count[j] += 1
    return WeightVector(chosen)


@dataclass
class DualCertificate:
    r"""
    Overview:
        Feasible solution of the dual of the fractional b-matching LP:
        ``s_i + s_j + ell_ij >= c_ij`` on every edge, with objective ``value = b * sum(s) + sum(ell)``.
    """
    s: np.ndarray
    ell: np.ndarray
    value: float


def greedy_dual_certificate(
        g: Graph,
        c: Union[GainVector, np.ndarray],
        b: int,
        matching: Optional[WeightVector] = None
) -> DualCertificate:
    r"""
    Overview:
        Dual fitting for the greedy matching. ``s_i`` is the gain of the last matched edge at ``i``
        when ``i`` is saturated, otherwise 0; ``ell_ij = max(c_ij - s_i - s_j, 0)`` on matched edges.
        The value is at most twice the greedy value and at least the LP optimum.
    Raises:
        - OracleError: the fitted dual is infeasible, i.e. ``matching`` is not the greedy output.
    """
    values = _gains(g, c)
    b = _check_budget(b)
    if matching is None:
        matching = greedy_b_matching(g, values, b)
    w = np.asarray(matching, dtype=np.float64)
    if w.shape[0] != g.m or not np.all((w == 0) | (w == 1)):
        raise ConfigError("matching must be a 0/1 vector with one entry per edge")
    matched = w == 1
    deg = weighted_degrees(g, w)
    if np.any(deg > b):
        raise ConfigError("matching exceeds the degree budget b={}".format(b))

    # smallest matched gain at each vertex is the one added last
    last = np.full(g.n, np.inf)
    idx = np.flatnonzero(matched)
    np.minimum.at(last, g.tails[idx], values[idx])
    np.minimum.at(last, g.heads[idx], values[idx])
    s = np.where(deg == b, last, 0.0)
    s[~np.isfinite(s)] = 0.0
    ell = np.where(matched, np.maximum(values - s[g.tails] - s[g.heads], 0.0), 0.0)
    slack = s[g.tails] + s[g.heads] + ell - values
    if np.any(slack < -FEASIBILITY_TOL):
        e = int(np.argmin(slack))
        raise OracleError(
            "infeasible dual certificate at edge ({}, {}): slack {:.3g}".format(
                int(g.tails[e]), int(g.heads[e]), slack[e]
            )
        )
    return DualCertificate(s=s, ell=ell, value=float(b * s.sum() + ell.sum()))

from typing import Tuple, Union
import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from ditk import logging

from semirank.graph import Graph, WeightVector, weighted_degrees
from semirank.oracles.gains import GainVector
from semirank.oracles.greedy import _gains, _check_budget
from semirank.utils.errors import ConfigError, InstanceTooLargeError, OracleError

EXACT_LP_MAX_EDGES = 20


def exact_lp_oracle_small(g: Graph, c: Union[GainVector, np.ndarray], b: int) -> Tuple[float, WeightVector]:
    r"""
    Overview:
        Exact optimum of ``max sum c_ij w_ij`` over ``0 <= w <= 1`` with weighted degrees at most ``b``.
        The polytope has half-integral vertices, so a branch and bound over ``w in {0, 1/2, 1}^E`` is
        exact. Supports at most 20 edges.
    Returns:
        - opt_value (:obj:`float`): LP optimum
        - w_opt (:obj:`WeightVector`): an optimal half-integral weighting
    """
    values = _gains(g, c)
    b = _check_budget(b)
    if g.m > EXACT_LP_MAX_EDGES:
        raise InstanceTooLargeError(
            "exact LP oracle enumerates half-integral points and supports m <= {}, got m={}".format(
                EXACT_LP_MAX_EDGES, g.m
            )
        )
    edges = [int(e) for e in np.lexsort((np.arange(g.m), -values)) if values[e] > 0]
    tails, heads = g.tails.tolist(), g.heads.tolist()
    gains = [float(values[e]) for e in edges]
    # suffix sums bound the remaining gain with every edge at full weight
    suffix = [0.0] * (len(edges) + 1)
    for pos in range(len(edges) - 1, -1, -1):
        suffix[pos] = suffix[pos + 1] + gains[pos]
    budget = [2 * b] * g.n  # in half units
    halves = [0] * len(edges)
    best = [0.0, [0] * len(edges)]

    def search(pos: int, acc: float) -> None:
        if acc > best[0]:
            best[0], best[1] = acc, list(halves)
        if pos == len(edges) or acc + suffix[pos] <= best[0]:
            return
        e = edges[pos]
        i, j = tails[e], heads[e]
        for h in (2, 1, 0):
            if h > budget[i] or h > budget[j]:
                continue
            halves[pos] = h
            budget[i] -= h
            budget[j] -= h
            search(pos + 1, acc + 0.5 * h * gains[pos])
            budget[i] += h
            budget[j] += h
        halves[pos] = 0

    search(0, 0.0)
    w = np.zeros(g.m)
    for pos, e in enumerate(edges):
        w[e] = 0.5 * best[1][pos]
    return float(np.dot(values, w)), WeightVector(w)


def approx_packing_oracle(g: Graph, c: Union[GainVector, np.ndarray], b: int, eps: float = 0.1) -> WeightVector:
    r"""
    Overview:
        ``(1 - eps)``-approximate fractional b-matching. The packing LP is solved with the HiGHS solver
        over the edges of positive gain, then clipped into the feasible set; the returned weights
        satisfy the box and degree constraints within ``1e-9`` and keep at least ``(1 - eps)`` of the
        optimum reported by the solver.
    Raises:
        - OracleError: the LP solver did not report an optimum, or the clipped weights lose more than
          an ``eps`` fraction of it
    """
    values = _gains(g, c)
    b = _check_budget(b)
    if not (0 < eps <= 0.5):
        raise ConfigError("eps must lie in (0, 1/2], got {}".format(eps))
    active = np.flatnonzero(values > 0)
    w = np.zeros(g.m)
    if active.size == 0:
        return WeightVector(w)
    rows = np.concatenate([g.tails[active], g.heads[active]])
    cols = np.tile(np.arange(active.size), 2)
    incidence = sp.csr_matrix((np.ones(rows.shape[0]), (rows, cols)), shape=(g.n, active.size))
    res = linprog(
        -values[active],
        A_ub=incidence,
        b_ub=np.full(g.n, float(b)),
        bounds=(0.0, 1.0),
        method='highs',
        options={'primal_feasibility_tolerance': 1e-10, 'dual_feasibility_tolerance': 1e-10},
    )
    if res.status != 0 or res.x is None:
        raise OracleError("packing LP failed: {}".format(res.message))
    w[active] = np.clip(res.x, 0.0, 1.0)
    max_deg = weighted_degrees(g, w).max()
    if max_deg > b:
        w *= b / max_deg
    value, opt = float(values @ w), -float(res.fun)
    if value < (1 - eps) * opt - 1e-9:
        raise OracleError(
            "packing LP weights reach {:.6g}, below (1 - {}) of the optimum {:.6g}".format(value, eps, opt)
        )
    logging.debug('packing LP oracle: value {:.6g} of {:.6g} over {} active edges'.format(value, opt, active.size))
    return WeightVector(w)

from dataclasses import dataclass
from typing import List, Tuple, Union
import math
import numpy as np

from semirank.graph import Graph, WeightVector, build_laplacian, weighted_degrees
from semirank.graph.graph import _as_values
from semirank.spectral import lambda_n_minus_1
from semirank.utils.errors import ConfigError

FEASIBILITY_SLACK = 1e-9


@dataclass
class Violation:
    kind: str  # 'edge' or 'vertex'
    index: int
    value: float

    def __str__(self) -> str:
        what = 'weight' if self.kind == 'edge' else 'weighted degree'
        return '{} {}: {} {}'.format(self.kind, self.index, what, repr(self.value))


def degree_budget(n: int, p: float) -> int:
    r"""
    Overview:
        Integer degree budget of the oracles, ``b = floor(2pn)``, so that every 0/1 response stays in
        the feasible set. Equals ``round(2pn)`` whenever ``2pn`` is an integer.
    """
    if not (0 < p <= 1):
        raise ConfigError("p must lie in (0, 1], got {}".format(p))
    b = int(math.floor(2 * p * n + 1e-9))
    if b < 1:
        raise ConfigError("degree budget 2pn = {:.4g} < 1; p is too small for n={}".format(2 * p * n, n))
    return b


def verify_feasibility(g: Graph, w: Union[WeightVector, np.ndarray], p: float) -> Tuple[bool, List[Violation]]:
    r"""
    Overview:
        Membership in the feasible set ``F = {0 <= w <= 1, weighted degrees <= 2pn}``, each bound with
        slack ``1e-9``.
    Returns:
        - feasible (:obj:`bool`): whether ``w`` lies in ``F``
        - violations (:obj:`List[Violation]`): offending edges and vertices
    """
    values = _as_values(g, w)
    violations = []
    for e in np.flatnonzero((values < -FEASIBILITY_SLACK) | (values > 1 + FEASIBILITY_SLACK)):
        violations.append(Violation('edge', int(e), float(values[e])))
    deg = weighted_degrees(g, values)
    cap = 2 * p * g.n
    for v in np.flatnonzero(deg > cap + FEASIBILITY_SLACK):
        violations.append(Violation('vertex', int(v), float(deg[v])))
    return not violations, violations


def er_witness_gap(g: Graph) -> float:
    r"""
    Overview:
        ``lambda_{n-1}`` of the weighting that keeps exactly the Erdos-Renyi edges, the feasible
        witness behind the lower bound on the optimal spectral gap.
    """
    if g.er_mask is None:
        raise ConfigError("graph carries no er_mask")
    return lambda_n_minus_1(build_laplacian(g, WeightVector.indicator(g.er_mask)))

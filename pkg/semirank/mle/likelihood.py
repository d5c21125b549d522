from typing import Optional, Tuple, Union
import numpy as np
from scipy.special import expit

from semirank.graph import Graph, WeightVector, build_laplacian
from semirank.graph.graph import _as_values
from semirank.sampling import ComparisonData
from semirank.utils.errors import ConfigError


def sigmoid(x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    return expit(x)


def log1pexp(x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    r"""
    Overview:
        ``log(1 + e^x)`` without overflow for large ``|x|``.
    """
    return np.logaddexp(0.0, x)


def _check_inputs(theta: np.ndarray, g: Graph, data: Optional[ComparisonData],
                  w: Optional[WeightVector]) -> Tuple[np.ndarray, np.ndarray]:
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    if theta.shape[0] != g.n:
        raise ConfigError("theta has {} entries but graph has {} vertices".format(theta.shape[0], g.n))
    if not np.all(np.isfinite(theta)):
        raise ConfigError("theta must be finite")
    if data is not None and len(data) != g.m:
        raise ConfigError("comparison data has {} entries but graph has {} edges".format(len(data), g.m))
    return theta, _as_values(g, w)


def score_differences(theta: np.ndarray, g: Graph) -> np.ndarray:
    # theta_i - theta_j per canonical edge (j, i), j < i
    return theta[g.heads] - theta[g.tails]


def nll(theta: np.ndarray, g: Graph, data: ComparisonData, w: Optional[WeightVector] = None) -> float:
    r"""
    Overview:
        Weighted negative log-likelihood
        ``sum_{i>j} w_ij (-y_ji (theta_i - theta_j) + log(1 + e^{theta_i - theta_j}))``, where ``y_ji`` is
        the fraction of comparisons won by the higher-indexed endpoint ``i``.
    Arguments:
        - theta (:obj:`np.ndarray`): scores, one per vertex
        - g (:obj:`Graph`): comparison graph
        - data (:obj:`ComparisonData`): averaged outcomes on ``g``
        - w (:obj:`WeightVector`): edge weights, unit weights when omitted
    """
    theta, values = _check_inputs(theta, g, data, w)
    d = score_differences(theta, g)
    # -y_ji d + log(1 + e^d) split by outcome so neither side cancels
    return float(np.sum(values * (data.y * log1pexp(d) + data.y_ji * log1pexp(-d))))


def gradient(theta: np.ndarray, g: Graph, data: ComparisonData, w: Optional[WeightVector] = None) -> np.ndarray:
    r"""
    Overview:
        Gradient of :func:`nll`. Every edge contributes along ``e_i - e_j``, so the result sums to zero.
    """
    theta, values = _check_inputs(theta, g, data, w)
    d = score_differences(theta, g)
    coeff = values * (data.y * sigmoid(d) - data.y_ji * sigmoid(-d))
    return np.bincount(g.heads, coeff, minlength=g.n) - np.bincount(g.tails, coeff, minlength=g.n)


def edge_curvature(theta: np.ndarray, g: Graph) -> np.ndarray:
    r"""
    Overview:
        ``z_ij = e^{theta_i - theta_j} / (1 + e^{theta_i - theta_j})^2``, in ``[1 / (4 kappa), 1 / 4]``.
    """
    d = score_differences(np.asarray(theta, dtype=np.float64), g)
    return sigmoid(d) * sigmoid(-d)


def hessian_laplacian(theta: np.ndarray, g: Graph, w: Optional[WeightVector] = None) -> np.ndarray:
    r"""
    Overview:
        Hessian of :func:`nll`, the Laplacian ``L_wz`` with edge weights ``w_ij z_ij(theta)``. It does
        not depend on the outcomes.
    """
    theta, values = _check_inputs(theta, g, None, w)
    return build_laplacian(g, WeightVector(values * edge_curvature(theta, g)))

import math
from typing import NamedTuple, Optional
import numpy as np

from semirank.graph import Graph, WeightVector, weighted_degrees
from semirank.graph.graph import _as_values
from semirank.sampling import BTLInstance
from semirank.utils.errors import ConfigError
from semirank.utils.io_utils import write_csv


class ErrorMetrics(NamedTuple):
    linf: float
    pairwise_linf: float
    topk_accuracy: float


class BQBounds(NamedTuple):
    r"""
    Overview:
        Entrywise error scales of the weighted MLE. The constants in front are unit placeholders, so
        the values are for comparing instances, not sharp bounds.
    """
    b_bound: float
    q_bound: float


def top_k(theta_hat: np.ndarray, k_top: int) -> np.ndarray:
    r"""
    Overview:
        Indices of the ``K`` largest scores in rank order; ties go to the lower index.
    """
    theta_hat = np.asarray(theta_hat, dtype=np.float64).reshape(-1)
    if not (1 <= k_top <= theta_hat.shape[0]):
        raise ConfigError("K must satisfy 1 <= K <= n, got K={} n={}".format(k_top, theta_hat.shape[0]))
    return np.argsort(-theta_hat, kind='stable')[:k_top]


def error_metrics(theta_hat: np.ndarray, b: BTLInstance, k_top: Optional[int] = None) -> ErrorMetrics:
    r"""
    Overview:
        ``linf = |theta_hat - theta*|_inf`` after centering ``theta_hat``, the worst pairwise difference
        error ``max_kl |(theta_hat_k - theta_hat_l) - (theta*_k - theta*_l)|``, and the share of the true
        top-``K`` set recovered by :func:`top_k`.
    Arguments:
        - theta_hat (:obj:`np.ndarray`): estimated scores
        - b (:obj:`BTLInstance`): ground truth
        - k_top (:obj:`int`): ``K``, defaults to ``b.k_top``
    """
    theta_hat = np.asarray(theta_hat, dtype=np.float64).reshape(-1)
    if theta_hat.shape[0] != b.n:
        raise ConfigError("theta_hat has {} entries but the instance has {} items".format(theta_hat.shape[0], b.n))
    k_top = b.k_top if k_top is None else int(k_top)
    diff = (theta_hat - theta_hat.mean()) - b.theta_star
    hits = np.intersect1d(top_k(theta_hat, k_top), top_k(b.theta_star, k_top)).shape[0]
    return ErrorMetrics(
        linf=float(np.max(np.abs(diff))),
        pairwise_linf=float(diff.max() - diff.min()),
        topk_accuracy=hits / float(k_top),
    )


def bq_diagnostics(
        g: Graph,
        w: Optional[WeightVector],
        kappa: float,
        reps: int,
        lambda_gap: float,
        c_b: float = 1.0,
        c_q: float = 1.0
) -> BQBounds:
    r"""
    Overview:
        ``B = c_b kappa sqrt(w_max log n / (L lambda))`` and
        ``Q = c_q kappa^3 w_max d_max^2 log^2 n / (L lambda^3)``, evaluated for the weighting ``w``.
    """
    if not lambda_gap > 0:
        raise ConfigError("lambda_gap must be positive, got {}".format(lambda_gap))
    if reps < 1 or kappa < 1:
        raise ConfigError("need L >= 1 and kappa >= 1")
    values = _as_values(g, w)
    w_max = float(values.max()) if values.size else 0.0
    d_max = float(weighted_degrees(g, values).max())
    log_n = math.log(g.n)
    b_bound = c_b * kappa * math.sqrt(w_max * log_n / (reps * lambda_gap))
    q_bound = c_q * kappa ** 3 * w_max * d_max ** 2 * log_n ** 2 / (reps * lambda_gap ** 3)
    return BQBounds(b_bound=b_bound, q_bound=q_bound)


def write_theta(path: str, theta: np.ndarray) -> None:
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    with open(path, 'w', newline='') as f:
        write_csv(f, ['vertex', 'theta'], ((v, float(t)) for v, t in enumerate(theta)))

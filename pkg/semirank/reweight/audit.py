import math
from dataclasses import dataclass
from typing import Dict, List, Tuple
import numpy as np
from easydict import EasyDict

from ditk import logging

from semirank.graph import Graph, WeightVector, build_laplacian
from semirank.reweight.mmwu import MMWUReweighter
from semirank.spectral import deflate_ones, heat_kernel_factor, lambda_n_minus_1
from semirank.utils.errors import InstanceTooLargeError

AUDIT_MAX_N = 200


@dataclass
class RegretLedger:
    r"""
    Overview:
        Both sides of the MMWU regret bound for the losses actually played:
        ``lambda_total >= sum(loss) - eta * sum(quad) - log(n) / eta``, with ``slack = lhs - rhs``.
        ``jl_fidelity[t]`` is the share of edges whose sketched gain is within ``(1 +- 2 eps)`` of
        the gain under the exact density matrix.
    """
    loss: np.ndarray
    quad: np.ndarray
    sketched_loss: np.ndarray
    jl_fidelity: np.ndarray
    eta: float
    lambda_total: float
    rhs: float
    slack: float

    def min_fidelity(self) -> float:
        known = self.jl_fidelity[~np.isnan(self.jl_fidelity)]
        return float(known.min()) if known.size else float('nan')

    def to_rows(self) -> List[Tuple[str, float]]:
        return [
            ('iterations', int(self.loss.shape[0])),
            ('lambda_total', self.lambda_total),
            ('regret_rhs', self.rhs),
            ('slack', self.slack),
            ('min_jl_fidelity', self.min_fidelity()),
        ]


def _density(g: Graph, acc: np.ndarray, eta: float) -> np.ndarray:
    # X = Pi exp(-eta L_acc) Pi / <Pi, exp(-eta L_acc)>, evaluated with a shifted spectrum
    proj = np.eye(g.n) - 1.0 / g.n
    U, _ = heat_kernel_factor(deflate_ones(build_laplacian(g, acc)), eta, proj, normalize=True)
    X = U @ U.T
    return X / np.trace(X)


def regret_audit(g: Graph, cfg: Dict, exact_updates: bool = True) -> RegretLedger:
    r"""
    Overview:
        Rerun the reweighting with recorded responses and evaluate the regret bound. With
        ``exact_updates`` the density matrices are formed densely from the played losses, where the
        bound holds exactly and the slack must be nonnegative; otherwise the
        sketched quantities recorded in the loop are used.
    Arguments:
        - g (:obj:`Graph`): graph, ``n <= 200`` when ``exact_updates``
        - cfg (:obj:`Dict`): reweighter config
        - exact_updates (:obj:`bool`): use exact dense density matrices
    """
    if exact_updates and g.n > AUDIT_MAX_N:
        raise InstanceTooLargeError(
            "exact regret audit forms dense matrices and supports n <= {}, got n={}".format(AUDIT_MAX_N, g.n)
        )
    cfg = EasyDict(dict(cfg or {}))
    cfg.record_responses = True
    reweighter = MMWUReweighter(cfg)
    report = reweighter.reweight(g)
    eta = report.eta
    eps = reweighter.cfg.eps

    acc = np.zeros(g.m)
    loss, quad, fidelity = [], [], []
    for record in report.responses:
        if exact_updates:
            X = _density(g, acc, eta)
            diag = np.diag(X)
            exact_gains = diag[g.tails] + diag[g.heads] - 2 * X[g.tails, g.heads]
            lap = build_laplacian(g, WeightVector(record.w_hat))
            LX = lap @ X
            loss.append(float(np.trace(LX)))
            quad.append(float(np.sum(LX * lap)))
            positive = exact_gains > 0
            ratio = record.gains[positive] / exact_gains[positive]
            fidelity.append(float(np.mean(np.abs(ratio - 1) <= 2 * eps)) if positive.any() else 1.0)
        else:
            loss.append(float(np.dot(record.w_hat, record.gains)))
            quad.append(record.quad)
            fidelity.append(np.nan)
        acc += record.w_hat

    loss, quad = np.array(loss), np.array(quad)
    lambda_total = lambda_n_minus_1(build_laplacian(g, acc))
    rhs = float(loss.sum() - eta * quad.sum() - math.log(g.n) / eta)
    slack = lambda_total - rhs
    logging.info('regret audit: lambda_total={:.6g} rhs={:.6g} slack={:.6g}'.format(lambda_total, rhs, slack))
    return RegretLedger(
        loss=loss,
        quad=quad,
        sketched_loss=np.array(report.per_iter_loss),
        jl_fidelity=np.array(fidelity),
        eta=eta,
        lambda_total=lambda_total,
        rhs=rhs,
        slack=slack,
    )

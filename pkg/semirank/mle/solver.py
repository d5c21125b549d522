import copy
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Union
import numpy as np
import scipy.linalg
from easydict import EasyDict
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ditk import logging
from ding.utils import deep_merge_dicts

from semirank.graph import Graph, WeightVector, is_connected, smallest_component
from semirank.graph.graph import _as_values
from semirank.mle.likelihood import nll, gradient, hessian_laplacian
from semirank.sampling import ComparisonData
from semirank.utils.config_utils import check_unknown_keys
from semirank.utils.errors import ConfigError, DivergenceError, DisconnectedGraphError

SOLVE_METHODS = ['damped_newton', 'precond_gd']
# relative rounding error of an nll evaluation; line searches accept changes below it
LOSS_ROUNDING = 64 * np.finfo(np.float64).eps


@dataclass
class SolveOptions:
    method: str = 'damped_newton'
    step: float = 0.5
    grad_tol: float = 1e-10
    max_iters: int = 5000
    theta_init: Optional[np.ndarray] = None


@dataclass
class MLEResult:
    theta: np.ndarray
    converged: bool
    iters: int
    # loss after each accepted step, starting with the loss at the initial point
    history: List[float] = field(default_factory=list, repr=False)
    wall_time: float = 0.0


def mle_exists(g: Graph, data: ComparisonData, w: Optional[WeightVector] = None, tol: float = 1e-12) -> bool:
    r"""
    Overview:
        Whether the weighted MLE has a finite minimizer: the directed graph with an arc ``i -> j``
        whenever ``i`` beat ``j`` at least once on an edge with ``w_ij > tol`` must be strongly connected.
    """
    values = _as_values(g, w)
    if len(data) != g.m:
        raise ConfigError("comparison data has {} entries but graph has {} edges".format(len(data), g.m))
    keep = values > tol
    tail_won = keep & (data.y > 0)
    head_won = keep & (data.y_ji > 0)
    src = np.concatenate([g.tails[tail_won], g.heads[head_won]])
    dst = np.concatenate([g.heads[tail_won], g.tails[head_won]])
    arcs = coo_matrix((np.ones(src.shape[0]), (src, dst)), shape=(g.n, g.n))
    n_comp, _ = connected_components(arcs, directed=True, connection='strong')
    return n_comp == 1


class MLESolver:
    r"""
    Overview:
        Weighted BTL maximum-likelihood solver. Both methods precondition the gradient with the
        pseudo-inverse of the Hessian Laplacian ``L_wz``: ``damped_newton`` refreshes it every step and
        backtracks until the Armijo condition holds up to the rounding error of the loss, ``precond_gd``
        freezes it at equal scores (``L_w / 4``) and takes fixed steps ``theta <- theta - step * L_wz^+ grad``.
        Convergence is judged on the gradient norm only; ``max_iters`` is the hard stop.
    Interface:
        default_config, solve
    """

    config = dict(
        method='damped_newton',
        # fixed step of precond_gd, in (0, 1]
        step=0.5,
        grad_tol=1e-10,
        step_tol=1e-8,
        max_iters=5000,
        # |theta|_inf above this bound means the minimizer is at infinity
        divergence_bound=50.0,
        armijo=dict(
            c=1e-4,
            shrink=0.5,
            max_backtracks=60,
        ),
        # edges at or below this weight do not count for connectivity
        weight_tol=1e-12,
    )

    @classmethod
    def default_config(cls: type) -> EasyDict:
        cfg = EasyDict(copy.deepcopy(cls.config))
        cfg.cfg_type = cls.__name__ + 'Dict'
        return cfg

    def __init__(self, cfg: Optional[Dict] = None) -> None:
        cfg = EasyDict(cfg or {})
        cfg.pop('cfg_type', None)
        check_unknown_keys(cfg, self.config, 'mle')
        self._cfg = EasyDict(deep_merge_dicts(self.default_config(), cfg))
        c = self._cfg
        if c.method not in SOLVE_METHODS:
            raise ConfigError("unknown solve method '{}', expected one of {}".format(c.method, SOLVE_METHODS))
        if not (0 < c.step <= 1):
            raise ConfigError("step must lie in (0, 1], got {}".format(c.step))
        if not c.grad_tol > 0:
            raise ConfigError("grad_tol must be positive")
        if int(c.max_iters) < 1:
            raise ConfigError("max_iters must be >= 1")
        if not c.divergence_bound > 0:
            raise ConfigError("divergence_bound must be positive")
        if not (0 < c.armijo.c < 1 and 0 < c.armijo.shrink < 1):
            raise ConfigError("armijo c and shrink must lie in (0, 1)")

    @property
    def cfg(self) -> EasyDict:
        return self._cfg

    @staticmethod
    def _preconditioner(lap: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
        # on 1^perp, (L + (alpha / n) 1 1^T)^{-1} acts as L^+ for a connected L
        n = lap.shape[0]
        alpha = float(np.trace(lap)) / (n - 1)
        try:
            factor = scipy.linalg.cho_factor(lap + alpha / n)
        except np.linalg.LinAlgError:
            raise DivergenceError(
                "Hessian Laplacian became numerically singular; the iterate is running off to infinity"
            )

        def apply(v: np.ndarray) -> np.ndarray:
            x = scipy.linalg.cho_solve(factor, v)
            return x - x.mean()

        return apply

    def _check_divergence(self, theta: np.ndarray, it: int) -> None:
        bound = self._cfg.divergence_bound
        if np.max(np.abs(theta)) > bound:
            raise DivergenceError(
                "MLE iterate left the ball |theta|_inf <= {} at iteration {}; "
                "the comparison outcomes admit no finite minimizer".format(bound, it)
            )

    def solve(
            self,
            g: Graph,
            data: ComparisonData,
            w: Optional[WeightVector] = None,
            theta_init: Optional[np.ndarray] = None
    ) -> MLEResult:
        r"""
        Overview:
            Minimize the weighted negative log-likelihood from ``theta_init`` (zero by default).
        Arguments:
            - g (:obj:`Graph`): comparison graph
            - data (:obj:`ComparisonData`): outcomes on ``g``
            - w (:obj:`WeightVector`): edge weights, unit weights when omitted
            - theta_init (:obj:`np.ndarray`): starting point, centered before use
        Returns:
            - result (:obj:`MLEResult`): centered estimate with convergence flag and loss history
        """
        c = self._cfg
        values = _as_values(g, w)
        w = WeightVector(values)
        if len(data) != g.m:
            raise ConfigError("comparison data has {} entries but graph has {} edges".format(len(data), g.m))
        if not is_connected(g, w, c.weight_tol):
            raise DisconnectedGraphError(smallest_component(g, w, c.weight_tol))
        if theta_init is None:
            theta = np.zeros(g.n)
        else:
            theta = np.array(theta_init, dtype=np.float64).reshape(-1)
            if theta.shape[0] != g.n or not np.all(np.isfinite(theta)):
                raise ConfigError("theta_init must be finite with one entry per vertex")
            theta -= theta.mean()

        start = time.time()
        loss = nll(theta, g, data, w)
        history = [loss]
        grad = gradient(theta, g, data, w)
        # Hessian at equal scores, where every edge curvature takes its maximum 1/4
        fixed = self._preconditioner(hessian_laplacian(np.zeros(g.n), g, w)) if c.method == 'precond_gd' else None
        converged = False
        it = 0
        while True:
            grad_norm = float(np.linalg.norm(grad))
            if grad_norm <= c.grad_tol or c.method == 'damped_newton':
                # Newton step at theta; stays O(1) when the minimizer is at infinity
                direction = -self._preconditioner(hessian_laplacian(theta, g, w))(grad)
                if grad_norm <= c.grad_tol and np.max(np.abs(direction)) <= c.step_tol:
                    converged = True
                    break
            if it >= c.max_iters:
                break
            it += 1
            if c.method == 'precond_gd':
                # L_w / 4 majorizes the Hessian at every theta
                new_theta = theta - c.step * fixed(grad)
                new_loss = nll(new_theta, g, data, w)
            else:
                slope = float(np.dot(grad, direction))
                noise = LOSS_ROUNDING * max(1.0, abs(loss))
                t = 1.0
                for _ in range(c.armijo.max_backtracks):
                    new_theta = theta + t * direction
                    new_loss = nll(new_theta, g, data, w)
                    if new_loss <= loss + c.armijo.c * t * slope + noise:
                        break
                    t *= c.armijo.shrink
                else:
                    logging.debug('line search stalled at iteration {}, loss {:.17g}'.format(it, loss))
                    break
            new_theta -= new_theta.mean()
            self._check_divergence(new_theta, it)
            theta, loss = new_theta, new_loss
            history.append(loss)
            grad = gradient(theta, g, data, w)
            if it % 50 == 0:
                logging.debug('mle iter {}: loss {:.10g} |grad| {:.3g}'.format(it, loss, float(np.linalg.norm(grad))))
        wall_time = time.time() - start
        if converged:
            logging.info('mle ({}) converged in {} iterations, loss {:.10g}'.format(c.method, it, loss))
        else:
            logging.warning(
                'mle ({}) stopped after {} iterations with |grad| = {:.3g} > {}'.format(
                    c.method, it, float(np.linalg.norm(grad)), c.grad_tol
                )
            )
        return MLEResult(theta=theta, converged=converged, iters=it, history=history, wall_time=wall_time)


def solve_mle(
        g: Graph,
        data: ComparisonData,
        w: Optional[WeightVector] = None,
        opts: Optional[Union[SolveOptions, Dict]] = None
) -> MLEResult:
    r"""
    Overview:
        Functional entry of :class:`MLESolver`. ``opts`` is either a :class:`SolveOptions` or a solver
        config dict; ``theta_init`` is taken from :class:`SolveOptions` when given.
    """
    theta_init = None
    if isinstance(opts, SolveOptions):
        theta_init = opts.theta_init
        opts = dict(method=opts.method, step=opts.step, grad_tol=opts.grad_tol, max_iters=opts.max_iters)
    return MLESolver(opts).solve(g, data, w, theta_init=theta_init)

import copy
import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple
import numpy as np
from easydict import EasyDict

from ditk import logging
from ding.utils import deep_merge_dicts

from semirank import ORACLES
from semirank.graph import Graph, WeightVector, build_laplacian, laplacian_operator
from semirank.oracles import edge_gains, greedy_b_matching, approx_packing_oracle, matching_value
from semirank.reweight.feasibility import degree_budget, verify_feasibility
from semirank.spectral import Embedding, deflate_ones, exp_action_scaled, heat_kernel_factor, jl_dimension, \
    jl_matrix, lambda_n_minus_1
from semirank.utils.config_utils import check_unknown_keys
from semirank.utils.errors import ConfigError, OracleError

EXP_MODES = ['auto', 'exact', 'dense', 'lanczos']


@dataclass
class MMWUParams:
    eps: float
    p: float
    eta: float
    iterations: int
    k: int
    budget: int
    oracle: str
    seed: int
    exp_delta: float
    mode: str
    lp_eps: float


@dataclass
class ResponseRecord:
    r"""
    Overview:
        What one iteration played: the oracle response, the sketched gains it answered, and the
        sketched quadratic term ``<(L^(t))^2, V V^T> = |L^(t) V|_F^2``.
    """
    w_hat: np.ndarray
    gains: np.ndarray
    quad: float


@dataclass
class ReweightReport:
    w_out: WeightVector
    lambda_gap: float
    feasible: bool
    per_iter_loss: List[float]
    wall_time: float
    budget: int
    iterations: int
    k: int
    eta: float
    mode: str
    responses: Optional[List[ResponseRecord]] = field(default=None, repr=False)

    def to_rows(self, timing: bool = False) -> List[Tuple[str, object]]:
        loss = np.asarray(self.per_iter_loss)
        rows = [
            ('lambda_gap', self.lambda_gap),
            ('feasible', int(self.feasible)),
            ('budget', self.budget),
            ('iterations', self.iterations),
            ('k', self.k),
            ('eta', self.eta),
            ('mode', self.mode),
            ('mean_iter_loss', float(loss.mean()) if loss.size else 0.0),
            ('w_max', self.w_out.w_max),
        ]
        if timing:
            rows.append(('wall_time', self.wall_time))
        return rows


class MMWUReweighter:
    r"""
    Overview:
        Matrix multiplicative weights solver of the saddle-point SDP
        ``max_{w in F} lambda_{n-1}(L_w)``. Each iteration embeds the current density matrix
        ``X = exp(-eta sum_s L^(s)) / <Pi, .>`` through a Gram factor, asks the oracle for the
        b-matching maximizing ``<L_w, X>``, and accumulates it; the output is the average response.
    Interface:
        default_config, make_params, reweight
    """

    config = dict(
        eps=0.25,
        # nominal sampling rate, required
        p=None,
        # sketch width, derived from jl_const when None
        k=None,
        jl_const=24,
        # number of MMWU rounds, 8 ln(n) / eps^2 when None
        iterations=None,
        oracle='greedy',
        lp_eps=0.1,
        seed=0,
        exp_delta=1e-6,
        # auto, exact, dense or lanczos
        exp_method='auto',
        record_responses=False,
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
        check_unknown_keys(cfg, self.config, 'reweight')
        self._cfg = EasyDict(deep_merge_dicts(self.default_config(), cfg))
        c = self._cfg
        if c.p is None:
            raise ConfigError("reweight config needs the sampling rate p")
        if not (0 < c.p <= 1):
            raise ConfigError("p must lie in (0, 1], got {}".format(c.p))
        if not (0 < c.eps <= 0.5):
            raise ConfigError("eps must lie in (0, 1/2], got {}".format(c.eps))
        if c.oracle not in ORACLES:
            raise ConfigError("unknown oracle '{}', expected one of {}".format(c.oracle, ORACLES))
        if c.exp_method not in EXP_MODES:
            raise ConfigError("unknown exp_method '{}', expected one of {}".format(c.exp_method, EXP_MODES))
        if c.iterations is not None and int(c.iterations) < 1:
            raise ConfigError("iterations must be >= 1")
        if c.k is not None and int(c.k) < 1:
            raise ConfigError("k must be >= 1")
        if not c.exp_delta > 0:
            raise ConfigError("exp_delta must be positive")

    @property
    def cfg(self) -> EasyDict:
        return self._cfg

    def make_params(self, n: int) -> MMWUParams:
        c = self._cfg
        if n < 2:
            raise ConfigError("reweighting needs n >= 2")
        budget = degree_budget(n, c.p)
        iterations = int(c.iterations) if c.iterations is not None else int(math.ceil(8 * math.log(n) / c.eps ** 2))
        k = int(c.k) if c.k is not None else jl_dimension(n, c.eps, c.jl_const)
        mode = c.exp_method
        if mode == 'auto':
            mode = 'exact' if k >= n else 'lanczos'
        return MMWUParams(
            eps=float(c.eps),
            p=float(c.p),
            eta=float(c.eps) / (4 * c.p * n),
            iterations=iterations,
            k=n if mode == 'exact' else k,
            budget=budget,
            oracle=c.oracle,
            seed=int(c.seed),
            exp_delta=float(c.exp_delta),
            mode=mode,
            lp_eps=float(c.lp_eps),
        )

    def _factor(self, g: Graph, acc: np.ndarray, params: MMWUParams, rng: np.random.Generator) -> np.ndarray:
        # Gram factor U with U U^T proportional to Pi exp(-eta sum L) Pi (exactly or after sketching)
        if params.mode == 'exact':
            lap = deflate_ones(build_laplacian(g, acc))
            proj = np.eye(g.n) - 1.0 / g.n
            U, _ = heat_kernel_factor(lap, params.eta, proj, normalize=True)
            return U
        R = jl_matrix(g.n, params.k, rng)
        R -= R.mean(axis=0, keepdims=True)
        U, _ = exp_action_scaled(
            g, WeightVector(acc), 0.5 * params.eta, R, delta=params.exp_delta, method=params.mode, deflate=True
        )
        return U

    def _respond(self, g: Graph, gains: np.ndarray, params: MMWUParams) -> np.ndarray:
        if params.oracle == 'lp':
            try:
                return approx_packing_oracle(g, gains, params.budget, params.lp_eps).values
            except OracleError as e:
                logging.warning('packing oracle failed ({}), falling back to greedy'.format(e))
        return greedy_b_matching(g, gains, params.budget).values

    def reweight(self, g: Graph) -> ReweightReport:
        r"""
        Overview:
            Run the MMWU iterations on ``g`` and return the averaged reweighting with its spectral gap.
            Connectivity of ``g`` is not required; ``lambda_gap`` exposes a failed reweighting.
        """
        params = self.make_params(g.n)
        record = bool(self._cfg.record_responses)
        rng = np.random.default_rng(params.seed)
        start = time.time()
        logging.info(
            'reweight n={} m={}: b={} T={} k={} eta={:.4g} mode={} oracle={}'.format(
                g.n, g.m, params.budget, params.iterations, params.k, params.eta, params.mode, params.oracle
            )
        )
        acc = np.zeros(g.m)
        losses = []
        responses = [] if record else None
        for t in range(params.iterations):
            emb = Embedding.from_unnormalized(self._factor(g, acc, params, rng))
            gains = edge_gains(g, emb).c
            w_hat = self._respond(g, gains, params)
            loss = matching_value(gains, w_hat)
            losses.append(loss)
            if record:
                lv = laplacian_operator(g, WeightVector(w_hat)) @ emb.matrix
                responses.append(ResponseRecord(w_hat=w_hat.copy(), gains=gains, quad=float(np.sum(lv ** 2))))
            acc += w_hat
            if t % 100 == 0:
                logging.debug('reweight iter {}/{}: loss {:.6g}'.format(t, params.iterations, loss))

        w_out = WeightVector(acc / params.iterations)
        support = int(np.count_nonzero(w_out.values > self._cfg.weight_tol))
        feasible, violations = verify_feasibility(g, w_out, params.p)
        if not feasible:
            logging.warning('reweighting left the feasible set: {}'.format(', '.join(str(v) for v in violations[:5])))
        gap = lambda_n_minus_1(build_laplacian(g, w_out))
        wall_time = time.time() - start
        logging.info(
            'reweight done in {:.2f}s: lambda_gap={:.6g}, support {}/{} edges'.format(wall_time, gap, support, g.m)
        )
        return ReweightReport(
            w_out=w_out,
            lambda_gap=gap,
            feasible=feasible,
            per_iter_loss=losses,
            wall_time=wall_time,
            budget=params.budget,
            iterations=params.iterations,
            k=params.k,
            eta=params.eta,
            mode=params.mode,
            responses=responses,
        )


def reweight(g: Graph, cfg: Dict) -> ReweightReport:
    return MMWUReweighter(cfg).reweight(g)

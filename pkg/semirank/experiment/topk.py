import copy
import time
from collections import Counter
from typing import Dict, List, Optional
import numpy as np
from easydict import EasyDict

from ditk import logging
from ding.utils import deep_merge_dicts

from semirank.experiment.methods import TrialContext, get_method
from semirank.experiment.records import TrialRecord
from semirank.graph import Graph, WeightVector, build_laplacian, weighted_degrees
from semirank.mle import MLESolver, error_metrics, mle_exists
from semirank.reweight import MMWUReweighter, degree_budget
from semirank.sampling import BTLInstance, gen_btl_scores, gen_cluster_graph, gen_er, apply_clique_adversary, \
    sample_comparisons
from semirank.spectral import lambda_n_minus_1
from semirank.utils.config_utils import check_unknown_keys
from semirank.utils.errors import ConfigError, DisconnectedGraphError, DivergenceError, SolverError
from semirank.utils.pool_utils import map_jobs, worker_count
from semirank.utils.seed_utils import derive_seed

ADVERSARIES = ['none', 'clique', 'cluster']

# substream keys under (seed, trial)
GRAPH_STREAM, ADVERSARY_STREAM, COMPARISON_STREAM, REWEIGHT_STREAM = 0, 1, 2, 3


def check_delta_grid(grid: List[float]) -> List[float]:
    grid = [float(d) for d in grid]
    if not grid:
        raise ConfigError("delta_grid must not be empty")
    if grid[0] <= 0 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("delta_grid must be positive and strictly increasing")
    return grid


def make_semi_random_graph(cfg: EasyDict, trial: int) -> Graph:
    r"""
    Overview:
        The graph observed in ``trial``: ``G(n, p)`` plus the configured monotone adversary, or the
        cluster sampling model when ``adversary='cluster'``.
    """
    graph_seed = derive_seed(cfg.seed, trial, GRAPH_STREAM)
    if cfg.adversary == 'cluster':
        c = cfg.cluster
        return gen_cluster_graph(c.sizes, c.p_within, c.q, graph_seed)
    g = gen_er(cfg.n, cfg.p, graph_seed)
    if cfg.adversary == 'clique':
        g = apply_clique_adversary(g, derive_seed(cfg.seed, trial, ADVERSARY_STREAM))
    return g


def solve_method(name: str, ctx: TrialContext, b: BTLInstance, solver: MLESolver, delta_k: float, trial: int,
                 timing: bool) -> TrialRecord:
    start = time.time()
    nan = float('nan')
    record = TrialRecord(delta_k, trial, name, nan, nan, nan, nan, nan, 0.0)
    try:
        graph, data, w = get_method(name)(ctx)
    except SolverError as e:
        logging.warning('trial {} delta_k={}: {} has no input ({})'.format(trial, delta_k, name, e))
        record.status = 'failed'
        return record
    record.lambda_gap = lambda_n_minus_1(build_laplacian(graph, w))
    record.d_max = float(weighted_degrees(graph, w).max())
    try:
        result = solver.solve(graph, data, w)
    except DivergenceError:
        record.status = 'diverged'
    except DisconnectedGraphError:
        record.status = 'disconnected'
    except SolverError as e:
        logging.warning('trial {} delta_k={}: {} failed ({})'.format(trial, delta_k, name, e))
        record.status = 'failed'
    else:
        if result.converged:
            metrics = error_metrics(result.theta, b)
            record.topk_accuracy = metrics.topk_accuracy
            record.linf = metrics.linf
            record.pairwise_linf = metrics.pairwise_linf
        elif mle_exists(graph, data, w, solver.cfg.weight_tol):
            record.status = 'not_converged'
        else:
            record.status = 'diverged'
    if timing:
        record.wall_ms = (time.time() - start) * 1e3
    return record


def run_topk_trial(cfg: EasyDict, trial: int) -> List[TrialRecord]:
    r"""
    Overview:
        All ``(delta_k, method)`` cells of one trial. The graph and its reweighting depend only on
        ``(seed, trial)``, so the reweighting is computed once, before any comparison is drawn, and
        shared by every ``delta_k``.
    """
    g = make_semi_random_graph(cfg, trial)
    weights: Optional[WeightVector] = None
    reweight_error = None
    if 'weighted_sr' in cfg.methods:
        rcfg = dict(cfg.reweight, p=cfg.p, eps=cfg.eps, seed=derive_seed(cfg.seed, trial, REWEIGHT_STREAM))
        try:
            weights = MMWUReweighter(rcfg).reweight(g).w_out
        except SolverError as e:
            logging.warning('trial {}: reweighting failed ({})'.format(trial, e))
            reweight_error = e
    solver = MLESolver(cfg.mle)
    records = []
    for d_idx, delta_k in enumerate(cfg.delta_grid):
        b = gen_btl_scores(cfg.n, cfg.K, delta_k)
        data = sample_comparisons(g, b, cfg.L, derive_seed(cfg.seed, trial, COMPARISON_STREAM, d_idx))
        ctx = TrialContext(g, data, weights, reweight_error)
        for name in cfg.methods:
            records.append(solve_method(name, ctx, b, solver, delta_k, trial, cfg.timing))
    logging.debug('trial {} done: m={} edges, {} records'.format(trial, g.m, len(records)))
    return records


class TopKExperiment:
    r"""
    Overview:
        Top-K recovery sweep over the score gap ``delta_k``: per trial, draw the semi-random graph,
        reweight it, sample BTL comparisons for every ``delta_k`` and run each ranking method.
    Interface:
        default_config, run, cfg
    """

    config = dict(
        n=200,
        K=10,
        L=10,
        p=0.25,
        # explicit score gaps; when None, delta_steps evenly spaced values over [delta_min, delta_max]
        delta_grid=None,
        delta_min=0.02,
        delta_max=0.62,
        delta_steps=31,
        trials=50,
        eps=0.25,
        seed=0,
        # none, clique or cluster
        adversary='clique',
        cluster=dict(
            sizes=None,
            p_within=None,
            q=None,
        ),
        methods=['vanilla_er', 'weighted_sr'],
        # trial workers, SEMIRANK_THREADS when None
        workers=None,
        # wall_ms is written as 0 unless timing is on, which keeps outputs byte-stable
        timing=False,
        reweight=dict(),
        mle=dict(),
    )

    @classmethod
    def default_config(cls: type) -> EasyDict:
        cfg = EasyDict(copy.deepcopy(cls.config))
        cfg.cfg_type = cls.__name__ + 'Dict'
        return cfg

    def __init__(self, cfg: Optional[Dict] = None) -> None:
        cfg = EasyDict(cfg or {})
        cfg.pop('cfg_type', None)
        check_unknown_keys(cfg, self.config, 'experiment')
        self._cfg = EasyDict(deep_merge_dicts(self.default_config(), cfg))
        self._validate()

    def _validate(self) -> None:
        c = self._cfg
        if int(c.trials) < 1:
            raise ConfigError("trials must be >= 1")
        if int(c.L) < 1:
            raise ConfigError("L must be >= 1")
        if not (0 < c.p <= 1):
            raise ConfigError("p must lie in (0, 1], got {}".format(c.p))
        if c.adversary not in ADVERSARIES:
            raise ConfigError("unknown adversary '{}', expected one of {}".format(c.adversary, ADVERSARIES))
        if c.adversary == 'cluster':
            if c.cluster.sizes is None or sum(c.cluster.sizes) != c.n:
                raise ConfigError("cluster sizes must sum to n={}".format(c.n))
            if c.cluster.p_within is None or c.cluster.q is None:
                raise ConfigError("cluster adversary needs p_within and q")
        if not (1 <= c.K < c.n):
            raise ConfigError("K must satisfy 1 <= K < n")
        if not c.methods:
            raise ConfigError("methods must not be empty")
        for name in c.methods:
            get_method(name)
        if c.delta_grid is None:
            c.delta_grid = np.round(np.linspace(c.delta_min, c.delta_max, int(c.delta_steps)), 12).tolist()
        c.delta_grid = check_delta_grid(c.delta_grid)
        if 'weighted_sr' in c.methods:
            degree_budget(c.n, c.p)
            MMWUReweighter(dict(c.reweight, p=c.p, eps=c.eps))
        MLESolver(c.mle)

    @property
    def cfg(self) -> EasyDict:
        return self._cfg

    def run(self) -> List[TrialRecord]:
        c = self._cfg
        workers = worker_count(c.workers)
        logging.info(
            'top-K experiment: n={} K={} L={} p={} adversary={} methods={} trials={} x {} gaps, {} workers'.format(
                c.n, c.K, c.L, c.p, c.adversary, ','.join(c.methods), c.trials, len(c.delta_grid), workers
            )
        )
        per_trial = map_jobs(run_topk_trial, [(c, t) for t in range(int(c.trials))], workers)
        records = sorted((r for rs in per_trial for r in rs), key=TrialRecord.sort_key)
        failures = Counter(r.status for r in records if r.status != 'ok')
        if failures:
            logging.warning('failed trials: {}'.format(dict(sorted(failures.items()))))
        logging.info('top-K experiment done: {} records'.format(len(records)))
        return records


def run_topk_experiment(cfg: Optional[Dict] = None) -> List[TrialRecord]:
    return TopKExperiment(cfg).run()

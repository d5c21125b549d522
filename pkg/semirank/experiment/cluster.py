import copy
import time
from collections import Counter
from typing import Dict, List, Optional
from easydict import EasyDict

from ditk import logging
from ding.utils import deep_merge_dicts

from semirank.experiment.records import ClusterRecord
from semirank.experiment.topk import check_delta_grid, GRAPH_STREAM, COMPARISON_STREAM
from semirank.graph import build_laplacian, weighted_degrees
from semirank.mle import MLESolver, error_metrics, mle_exists
from semirank.sampling import gen_btl_scores, gen_cluster_graph, sample_comparisons
from semirank.spectral import lambda_n_minus_1
from semirank.utils.config_utils import check_unknown_keys
from semirank.utils.errors import ConfigError, DisconnectedGraphError, DivergenceError, SolverError
from semirank.utils.pool_utils import map_jobs, worker_count
from semirank.utils.seed_utils import derive_seed


def run_cluster_trial(cfg: EasyDict, trial: int) -> List[ClusterRecord]:
    r"""
    Overview:
        One trial of the cluster study. Every ``q`` of the grid reuses the same pair-level uniforms
        (one graph seed per trial), so the sampled graphs are nested in ``q``; only the comparison
        stream changes per ``q``.
    """
    b = gen_btl_scores(cfg.n, cfg.K, cfg.delta_k)
    solver = MLESolver(cfg.mle)
    graph_seed = derive_seed(cfg.seed, trial, GRAPH_STREAM)
    nan = float('nan')
    records = []
    for q_idx, q in enumerate(cfg.q_grid):
        start = time.time()
        g = gen_cluster_graph(cfg.sizes, cfg.p_within, q, graph_seed)
        data = sample_comparisons(g, b, cfg.L, derive_seed(cfg.seed, trial, COMPARISON_STREAM, q_idx))
        record = ClusterRecord(
            q=q,
            trial=trial,
            linf=nan,
            pairwise_linf=nan,
            lambda_gap=lambda_n_minus_1(build_laplacian(g)),
            d_max=float(weighted_degrees(g).max()),
            wall_ms=0.0,
        )
        try:
            result = solver.solve(g, data)
        except DivergenceError:
            record.status = 'diverged'
        except DisconnectedGraphError:
            record.status = 'disconnected'
        except SolverError as e:
            logging.warning('cluster trial {} q={}: solve failed ({})'.format(trial, q, e))
            record.status = 'failed'
        else:
            if result.converged:
                metrics = error_metrics(result.theta, b)
                record.linf = metrics.linf
                record.pairwise_linf = metrics.pairwise_linf
            else:
                record.status = 'not_converged' if mle_exists(g, data, None, solver.cfg.weight_tol) else 'diverged'
        if cfg.timing:
            record.wall_ms = (time.time() - start) * 1e3
        records.append(record)
    return records


class ClusterExperiment:
    r"""
    Overview:
        Unweighted MLE on cluster-sampled graphs across a grid of cross-cluster probabilities ``q``,
        measuring how the ``linf`` error scales with the embedded ``G(n, q)`` graph.
    Interface:
        default_config, run, cfg
    """

    config = dict(
        n=120,
        # many small clusters keep the within-cluster share of each degree small
        sizes=[5] * 24,
        p_within=[0.4] * 24,
        q_grid=[0.05, 0.1, 0.2, 0.4],
        K=10,
        delta_k=0.3,
        L=16,
        trials=50,
        seed=0,
        workers=None,
        timing=False,
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
        check_unknown_keys(cfg, self.config, 'cluster experiment')
        self._cfg = EasyDict(deep_merge_dicts(self.default_config(), cfg))
        self._validate()

    def _validate(self) -> None:
        c = self._cfg
        if int(c.trials) < 1:
            raise ConfigError("trials must be >= 1")
        if int(c.L) < 1:
            raise ConfigError("L must be >= 1")
        if sum(c.sizes) != c.n:
            raise ConfigError("cluster sizes sum to {} but n={}".format(sum(c.sizes), c.n))
        if len(c.p_within) != len(c.sizes):
            raise ConfigError("p_within needs one probability per cluster")
        if any(not (0 < p <= 1) for p in c.p_within):
            raise ConfigError("within-cluster probabilities must lie in (0, 1]")
        if not (1 <= c.K < c.n):
            raise ConfigError("K must satisfy 1 <= K < n")
        if c.delta_k <= 0:
            raise ConfigError("delta_k must be positive")
        try:
            c.q_grid = check_delta_grid(c.q_grid)
        except ConfigError:
            raise ConfigError("q_grid must be non-empty, positive and strictly increasing")
        if c.q_grid[-1] > min(c.p_within):
            raise ConfigError("q={} exceeds a within-cluster probability {}".format(c.q_grid[-1], min(c.p_within)))
        MLESolver(c.mle)

    @property
    def cfg(self) -> EasyDict:
        return self._cfg

    def run(self) -> List[ClusterRecord]:
        c = self._cfg
        workers = worker_count(c.workers)
        logging.info(
            'cluster experiment: sizes={} p_within={} q_grid={} L={} trials={}, {} workers'.format(
                list(c.sizes), list(c.p_within), c.q_grid, c.L, c.trials, workers
            )
        )
        per_trial = map_jobs(run_cluster_trial, [(c, t) for t in range(int(c.trials))], workers)
        records = sorted((r for rs in per_trial for r in rs), key=ClusterRecord.sort_key)
        failures = Counter(r.status for r in records if r.status != 'ok')
        if failures:
            logging.warning('failed trials: {}'.format(dict(sorted(failures.items()))))
        return records


def run_cluster_experiment(cfg: Optional[Dict] = None) -> List[ClusterRecord]:
    return ClusterExperiment(cfg).run()

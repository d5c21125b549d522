import argparse
import sys
from contextlib import contextmanager
from typing import IO, Dict, Iterator, List, Optional, Sequence

from easydict import EasyDict
from ditk import logging

from semirank import ORACLES, __TITLE__, __VERSION__
from semirank.experiment import ADVERSARIES, ClusterExperiment, TopKExperiment, diagnose, make_semi_random_graph, \
    summarize, write_cluster_csv, write_summary_csv, write_trial_csv
from semirank.experiment.topk import COMPARISON_STREAM
from semirank.graph import read_edge_list, read_weights, write_edge_list
from semirank.mle import SOLVE_METHODS, MLESolver
from semirank.reweight import EXP_MODES, MMWUReweighter, regret_audit
from semirank.sampling import gen_btl_scores, read_comparisons, sample_comparisons, write_comparisons
from semirank.utils.config_utils import load_default_config, merge_config, read_config
from semirank.utils.errors import ConfigError, SolverError
from semirank.utils.io_utils import write_csv, set_verbosity
from semirank.utils.seed_utils import derive_seed

REPORT_HEADER = ['field', 'value']
EXPERIMENT_KINDS = ['topk', 'cluster']


def _list_of(cast):

    def parse(text: str) -> List:
        try:
            return [cast(t) for t in text.split(',') if t.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError("expected a comma separated list, got '{}'".format(text))

    return parse


def _file_config(args: argparse.Namespace) -> EasyDict:
    return read_config(args.config) if args.config else EasyDict()


def _pick(cfg: Dict, *keys: str) -> Dict:
    return {k: cfg[k] for k in keys if k in cfg}


def _require(value, flag: str, command: str):
    if value is None:
        raise ConfigError("{} needs {}".format(command, flag))
    return value


@contextmanager
def _output(path: Optional[str]) -> Iterator[IO]:
    if path is None:
        yield sys.stdout
    else:
        with open(path, 'w', newline='') as f:
            yield f


def _read_graph_and_weights(graph_file: str, weights_file: Optional[str]):
    g, w = read_edge_list(graph_file)
    if weights_file is not None:
        w = read_weights(weights_file, g)
    return g, w


def cmd_generate(args: argparse.Namespace) -> None:
    file_cfg = _file_config(args)
    base = load_default_config('experiment')
    cfg = merge_config(
        dict(n=base.n, p=base.p, adversary='none', seed=0, cluster=dict()),
        _pick(file_cfg, 'n', 'p', 'adversary', 'seed', 'cluster'),
        dict(n=args.n, p=args.p, adversary=args.adversary, seed=args.seed),
        dict(cluster=dict(sizes=args.sizes, p_within=args.p_within, q=args.q)),
    )
    if cfg.adversary not in ADVERSARIES:
        raise ConfigError("unknown adversary '{}', expected one of {}".format(cfg.adversary, ADVERSARIES))
    if cfg.adversary == 'cluster':
        for key in ('sizes', 'p_within', 'q'):
            _require(cfg.cluster.get(key), '--' + key.replace('_', '-'), 'generate --adversary cluster')
    out = _require(args.out, '--out <path>', 'generate')
    g = make_semi_random_graph(cfg, 0)
    write_edge_list(out, g)
    logging.info('wrote graph n={} m={} ({} adversary edges) to {}'.format(g.n, g.m, int((~g.er_mask).sum()), out))


def cmd_sample(args: argparse.Namespace) -> None:
    file_cfg = _file_config(args)
    base = load_default_config('experiment')
    cfg = merge_config(
        dict(K=base.K, L=base.L, seed=0),
        _pick(file_cfg, 'K', 'L', 'delta_k', 'seed'),
        dict(K=args.K, L=args.L, delta_k=args.delta_k, seed=args.seed),
    )
    delta_k = _require(cfg.get('delta_k'), '--delta-k', 'sample')
    out = _require(args.out, '--out <path>', 'sample')
    g, _ = read_edge_list(args.graph)
    b = gen_btl_scores(g.n, cfg.K, delta_k)
    data = sample_comparisons(g, b, cfg.L, derive_seed(cfg.seed, 0, COMPARISON_STREAM, 0))
    write_comparisons(out, g, data)
    logging.info('wrote {} comparison outcomes (L={}) to {}'.format(len(data), data.reps, out))


def _reweight_config(args: argparse.Namespace) -> EasyDict:
    file_cfg = _file_config(args)
    return merge_config(
        load_default_config('reweight'),
        _pick(file_cfg, 'p', 'eps', 'seed'),
        file_cfg.get('reweight', {}),
        dict(
            p=args.p,
            eps=args.eps,
            oracle=args.oracle,
            k=args.k,
            iterations=args.iterations,
            exp_method=args.exp_method,
            seed=args.seed,
        ),
    )


def cmd_reweight(args: argparse.Namespace) -> None:
    cfg = _reweight_config(args)
    out = _require(args.out, '--out <path>', 'reweight')
    g, _ = read_edge_list(args.graph)
    report = MMWUReweighter(cfg).reweight(g)
    write_edge_list(out, g, report.w_out)
    rows = report.to_rows(timing=args.timing)
    if args.audit:
        ledger = regret_audit(g, cfg)
        rows += [('audit_' + k, v) for k, v in ledger.to_rows()]
    write_csv(sys.stdout, REPORT_HEADER, rows)


def cmd_solve(args: argparse.Namespace) -> None:
    file_cfg = _file_config(args)
    cfg = merge_config(
        load_default_config('mle'),
        file_cfg.get('mle', {}),
        dict(method=args.method, grad_tol=args.grad_tol, max_iters=args.max_iters),
    )
    g, w = _read_graph_and_weights(args.graph, args.weights)
    data = read_comparisons(args.comparisons, g, strict=args.strict)
    result = MLESolver(cfg).solve(g, data, w)
    if not result.converged:
        raise SolverError('solver stopped after {} iterations without converging'.format(result.iters))
    with _output(args.out) as f:
        write_csv(f, ['vertex', 'theta'], ((v, float(t)) for v, t in enumerate(result.theta)))


def cmd_experiment(args: argparse.Namespace) -> None:
    file_cfg = _file_config(args)
    defaults = load_default_config()
    if args.kind == 'topk':
        cfg = merge_config(
            dict(reweight=defaults.reweight, mle=defaults.mle),
            defaults.experiment,
            file_cfg,
            dict(
                n=args.n,
                K=args.K,
                L=args.L,
                p=args.p,
                trials=args.trials,
                eps=args.eps,
                adversary=args.adversary,
                methods=args.methods,
                delta_grid=args.delta_grid,
                workers=args.workers,
                seed=args.seed,
                timing=args.timing or None,
            ),
        )
        records = TopKExperiment(cfg).run()
        with _output(args.out) as f:
            write_trial_csv(f, records)
        if args.summary is not None:
            with _output(args.summary) as f:
                write_summary_csv(f, summarize(records))
    else:
        cfg = merge_config(
            dict(mle=defaults.mle),
            defaults.cluster,
            file_cfg,
            dict(
                n=args.n,
                K=args.K,
                L=args.L,
                trials=args.trials,
                sizes=args.sizes,
                p_within=args.p_within,
                q_grid=args.q_grid,
                delta_k=args.delta_k,
                workers=args.workers,
                seed=args.seed,
                timing=args.timing or None,
            ),
        )
        with _output(args.out) as f:
            write_cluster_csv(f, ClusterExperiment(cfg).run())


def cmd_diagnose(args: argparse.Namespace) -> None:
    file_cfg = _file_config(args)
    p = args.p if args.p is not None else file_cfg.get('p')
    gap_const = args.gap_const if args.gap_const is not None else file_cfg.get('gap_const', 0.25)
    report = diagnose(args.graph, args.weights, p=p, gap_const=gap_const)
    with _output(args.out) as f:
        write_csv(f, REPORT_HEADER, report.to_rows())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None, help='master seed, every random stream derives from it')
    common.add_argument('--config', default=None, help='json, yaml or py config file')
    common.add_argument('--out', default=None, help='output path, stdout when omitted for reports')
    common.add_argument('--quiet', action='store_true', help='only log warnings and errors')

    parser = argparse.ArgumentParser(
        prog='semirank', description='Top-K ranking from semi-random comparison graphs via spectral reweighting.'
    )
    parser.add_argument('--version', action='version', version='{} {}'.format(__TITLE__, __VERSION__))
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('generate', parents=[common], help='draw a semi-random comparison graph')
    p.add_argument('--n', type=int, default=None)
    p.add_argument('--p', type=float, default=None)
    p.add_argument('--adversary', choices=ADVERSARIES, default=None)
    p.add_argument('--sizes', type=_list_of(int), default=None, help='cluster sizes, e.g. 40,40,40')
    p.add_argument('--p-within', dest='p_within', type=_list_of(float), default=None)
    p.add_argument('--q', type=float, default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser('sample', parents=[common], help='sample BTL comparisons on a graph')
    p.add_argument('--graph', required=True)
    p.add_argument('--K', type=int, default=None)
    p.add_argument('--L', type=int, default=None)
    p.add_argument('--delta-k', dest='delta_k', type=float, default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser('reweight', parents=[common], help='spectrally reweight a graph')
    p.add_argument('--graph', required=True)
    p.add_argument('--p', type=float, default=None)
    p.add_argument('--eps', type=float, default=None)
    p.add_argument('--oracle', choices=ORACLES, default=None)
    p.add_argument('--k', type=int, default=None, help='sketch width')
    p.add_argument('--iterations', type=int, default=None)
    p.add_argument('--exp-method', dest='exp_method', choices=EXP_MODES, default=None)
    p.add_argument('--audit', action='store_true', help='also report the regret bound slack')
    p.add_argument('--timing', action='store_true', help='report wall time')
    p.set_defaults(func=cmd_reweight)

    p = sub.add_parser('solve', parents=[common], help='weighted BTL maximum likelihood')
    p.add_argument('--graph', required=True)
    p.add_argument('--comparisons', required=True)
    p.add_argument('--weights', default=None)
    p.add_argument('--method', choices=SOLVE_METHODS, default=None)
    p.add_argument('--grad-tol', dest='grad_tol', type=float, default=None)
    p.add_argument('--max-iters', dest='max_iters', type=int, default=None)
    p.add_argument('--no-strict', dest='strict', action='store_false', help='accept win rates off the 1/L grid')
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser('experiment', parents=[common], help='run the top-K or the cluster experiment')
    p.add_argument('--kind', choices=EXPERIMENT_KINDS, default='topk')
    p.add_argument('--n', type=int, default=None)
    p.add_argument('--K', type=int, default=None)
    p.add_argument('--L', type=int, default=None)
    p.add_argument('--p', type=float, default=None)
    p.add_argument('--trials', type=int, default=None)
    p.add_argument('--eps', type=float, default=None)
    p.add_argument('--adversary', choices=ADVERSARIES, default=None)
    p.add_argument('--methods', type=_list_of(str), default=None)
    p.add_argument('--delta-grid', dest='delta_grid', type=_list_of(float), default=None)
    p.add_argument('--delta-k', dest='delta_k', type=float, default=None)
    p.add_argument('--sizes', type=_list_of(int), default=None)
    p.add_argument('--p-within', dest='p_within', type=_list_of(float), default=None)
    p.add_argument('--q-grid', dest='q_grid', type=_list_of(float), default=None)
    p.add_argument('--workers', type=int, default=None)
    p.add_argument('--timing', action='store_true', help='write measured wall_ms instead of 0')
    p.add_argument('--summary', default=None, help='also write mean accuracy per (delta_k, method)')
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser('diagnose', parents=[common], help='spectral report of a weighted graph')
    p.add_argument('--graph', required=True)
    p.add_argument('--weights', default=None)
    p.add_argument('--p', type=float, default=None)
    p.add_argument('--gap-const', dest='gap_const', type=float, default=None)
    p.set_defaults(func=cmd_diagnose)
    return parser


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    r"""
    Overview:
        Run one ``semirank`` command. Returns 0 on success, 1 on usage or configuration errors and
        2 when a solver fails.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    set_verbosity(args.quiet)
    try:
        args.func(args)
    except (ConfigError, OSError) as e:
        sys.stderr.write('semirank {}: error: {}\n'.format(args.command, e))
        return 1
    except SolverError as e:
        sys.stderr.write('semirank {}: solver failed: {}\n'.format(args.command, e))
        return 2
    return 0

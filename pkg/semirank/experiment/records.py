from dataclasses import dataclass, astuple, fields
from typing import IO, Dict, Iterable, List, Tuple
import numpy as np

from semirank.utils.io_utils import write_csv

TRIAL_STATUSES = ['ok', 'diverged', 'not_converged', 'disconnected', 'failed']


@dataclass
class TrialRecord:
    r"""
    Overview:
        One (delta_k, trial, method) outcome of the top-K experiment. Failed solves keep ``nan``
        metrics and name the failure in ``status``, the last CSV column.
    """
    delta_k: float
    trial: int
    method: str
    topk_accuracy: float
    linf: float
    pairwise_linf: float
    lambda_gap: float
    d_max: float
    wall_ms: float
    status: str = 'ok'

    def sort_key(self) -> Tuple[float, int, str]:
        return self.delta_k, self.trial, self.method


@dataclass
class ClusterRecord:
    q: float
    trial: int
    linf: float
    pairwise_linf: float
    lambda_gap: float
    d_max: float
    wall_ms: float
    status: str = 'ok'

    def sort_key(self) -> Tuple[float, int]:
        return self.q, self.trial


@dataclass
class SummaryRow:
    delta_k: float
    method: str
    mean_accuracy: float
    ok_trials: int
    failed_trials: int


TRIAL_HEADER = [f.name for f in fields(TrialRecord)]
CLUSTER_HEADER = [f.name for f in fields(ClusterRecord)]
SUMMARY_HEADER = [f.name for f in fields(SummaryRow)]


def write_trial_csv(f: IO, records: Iterable[TrialRecord]) -> None:
    write_csv(f, TRIAL_HEADER, (astuple(r) for r in sorted(records, key=TrialRecord.sort_key)))


def write_cluster_csv(f: IO, records: Iterable[ClusterRecord]) -> None:
    write_csv(f, CLUSTER_HEADER, (astuple(r) for r in sorted(records, key=ClusterRecord.sort_key)))


def write_summary_csv(f: IO, rows: Iterable[SummaryRow]) -> None:
    write_csv(f, SUMMARY_HEADER, (astuple(r) for r in rows))


def summarize(records: Iterable[TrialRecord]) -> List[SummaryRow]:
    r"""
    Overview:
        Mean top-K accuracy per ``(delta_k, method)`` over the trials that solved successfully.
    """
    groups: Dict[Tuple[float, str], List[TrialRecord]] = {}
    for r in records:
        groups.setdefault((r.delta_k, r.method), []).append(r)
    rows = []
    for (delta_k, method), group in sorted(groups.items()):
        acc = [r.topk_accuracy for r in group if r.status == 'ok']
        rows.append(
            SummaryRow(
                delta_k=delta_k,
                method=method,
                mean_accuracy=float(np.mean(acc)) if acc else float('nan'),
                ok_trials=len(acc),
                failed_trials=len(group) - len(acc),
            )
        )
    return rows

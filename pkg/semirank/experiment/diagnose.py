from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from semirank.graph import WeightVector, is_connected, read_edge_list, read_weights
from semirank.reweight import er_witness_gap
from semirank.spectral import SpectralReport, spectral_report
from semirank.utils.errors import ConfigError
from semirank.utils.io_utils import fmt_float

# weight cap, degree cap 2np and gap floor C * n * p of a good reweighting
WEIGHT_CAP = 1.0
DEGREE_FACTOR = 2.0


@dataclass
class DiagnoseReport:
    r"""
    Overview:
        Spectral summary of a (weighted) comparison graph, with pass/fail flags against the
        ``w_max <= 1``, ``d_max <= 2np`` and ``lambda_{n-1} >= C n p`` thresholds when ``p`` is given.
    """
    n: int
    m: int
    spectral: SpectralReport
    connected: bool
    weights_source: str
    er_witness_gap: Optional[float] = None
    p: Optional[float] = None
    gap_const: float = 0.25
    flags: List[Tuple[str, bool]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.flags)

    def to_rows(self) -> List[Tuple[str, str]]:
        rows = [('n', str(self.n)), ('m', str(self.m))]
        rows += [(k, fmt_float(v)) for k, v in self.spectral.to_rows()]
        rows.append(('connected', 'yes' if self.connected else 'no'))
        rows.append(('weights', self.weights_source))
        if self.er_witness_gap is not None:
            rows.append(('er_witness_gap', fmt_float(self.er_witness_gap)))
        for name, ok in self.flags:
            rows.append((name, 'pass' if ok else 'fail'))
        if self.flags:
            rows.append(('overall', 'pass' if self.passed else 'fail'))
        rows += [('note', note) for note in self.notes]
        return rows


def diagnose(graph_file: str,
             weights_file: Optional[str] = None,
             p: Optional[float] = None,
             gap_const: float = 0.25) -> DiagnoseReport:
    r"""
    Overview:
        Read a graph (and optionally a weights file) and report its spectral quantities.
    Arguments:
        - graph_file (:obj:`str`): edge-list file; a weight column in it is used when no weights file is given
        - weights_file (:obj:`str`): weights edge-list aligned to the graph
        - p (:obj:`float`): sampling rate the thresholds refer to; no flags are computed without it
        - gap_const (:obj:`float`): the constant ``C`` of the gap threshold ``C * n * p``
    """
    if p is not None and not (0 < p <= 1):
        raise ConfigError("p must lie in (0, 1], got {}".format(p))
    if gap_const <= 0:
        raise ConfigError("gap_const must be positive")
    g, embedded = read_edge_list(graph_file)
    notes = []
    if weights_file is not None:
        w = read_weights(weights_file, g)
        source = 'file'
    elif embedded is not None:
        w = embedded
        source = 'graph file'
    else:
        w = WeightVector.ones(g)
        source = 'unit'
        notes.append('no weights file given, unit weights assumed')
    spectral = spectral_report(g, w)
    report = DiagnoseReport(
        n=g.n,
        m=g.m,
        spectral=spectral,
        connected=is_connected(g, w),
        weights_source=source,
        er_witness_gap=er_witness_gap(g) if g.er_mask is not None else None,
        p=p,
        gap_const=gap_const,
        notes=notes,
    )
    if p is not None:
        report.flags = [
            ('w_max_ok', spectral.w_max <= WEIGHT_CAP),
            ('d_max_ok', spectral.d_max <= DEGREE_FACTOR * g.n * p),
            ('lambda_gap_ok', spectral.lambda_gap >= gap_const * g.n * p),
        ]
    return report

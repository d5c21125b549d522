from typing import List, Optional, Tuple
import numpy as np

from semirank.graph.graph import Graph, WeightVector
from semirank.utils.errors import ConfigError, GraphFormatError
from semirank.utils.io_utils import fmt_float


def _data_lines(path: str) -> List[Tuple[int, List[str]]]:
    try:
        with open(path, 'r') as f:
            raw = f.readlines()
    except OSError as e:
        raise ConfigError("cannot read {}: {}".format(path, e))
    lines = []
    for lineno, line in enumerate(raw, start=1):
        text = line.split('#', 1)[0].strip()
        if text:
            lines.append((lineno, text.split()))
    return lines


def _parse_int(path: str, lineno: int, token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(path, lineno, "{} must be an integer, got '{}'".format(what, token))


def _parse_float(path: str, lineno: int, token: str, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise GraphFormatError(path, lineno, "{} must be a real number, got '{}'".format(what, token))


def read_edge_list(path: str) -> Tuple[Graph, Optional[WeightVector]]:
    r"""
    Overview:
        Read the edge-list text format: a header line ``n m`` followed by ``m`` lines
        ``i j [w] [er_flag]`` (0-based, whitespace separated). Weights default to 1.0; the
        er flag column, when used, must be present on every edge line.
    Returns:
        - graph (:obj:`Graph`): canonicalized graph, with ``er_mask`` when flags are given
        - weights (:obj:`WeightVector`): weights in canonical edge order, ``None`` when no line \
            carries a weight column
    """
    lines = _data_lines(path)
    if not lines:
        raise GraphFormatError(path, 1, "empty file, expected header 'n m'")
    head_no, head = lines[0]
    if len(head) != 2:
        raise GraphFormatError(path, head_no, "header must be 'n m'")
    n = _parse_int(path, head_no, head[0], 'n')
    m = _parse_int(path, head_no, head[1], 'm')
    if n < 2 or m < 0:
        raise GraphFormatError(path, head_no, "invalid header n={} m={}".format(n, m))
    body = lines[1:]
    if len(body) != m:
        lineno = body[-1][0] if body else head_no
        raise GraphFormatError(path, lineno, "header declares {} edges, found {}".format(m, len(body)))

    pairs = np.zeros((m, 2), dtype=np.int64)
    weights = np.ones(m)
    flags = np.zeros(m, dtype=bool)
    has_w, has_flag = False, None
    seen = {}
    for k, (lineno, tokens) in enumerate(body):
        if len(tokens) < 2 or len(tokens) > 4:
            raise GraphFormatError(path, lineno, "expected 'i j [w] [er_flag]', got {} fields".format(len(tokens)))
        i = _parse_int(path, lineno, tokens[0], 'i')
        j = _parse_int(path, lineno, tokens[1], 'j')
        if not (0 <= i < n and 0 <= j < n):
            raise GraphFormatError(path, lineno, "endpoint out of range [0, {})".format(n))
        if i == j:
            raise GraphFormatError(path, lineno, "self-loop at vertex {}".format(i))
        key = (min(i, j), max(i, j))
        if key in seen:
            raise GraphFormatError(path, lineno, "duplicate edge {} (first on line {})".format(key, seen[key]))
        seen[key] = lineno
        pairs[k] = (i, j)
        if len(tokens) >= 3:
            has_w = True
            weights[k] = _parse_float(path, lineno, tokens[2], 'w')
            if not np.isfinite(weights[k]) or weights[k] < 0:
                raise GraphFormatError(path, lineno, "weight must be finite and nonnegative")
        line_has_flag = len(tokens) == 4
        if has_flag is None:
            has_flag = line_has_flag
        elif has_flag != line_has_flag:
            raise GraphFormatError(path, lineno, "er_flag column must be present on all lines or none")
        if line_has_flag:
            if tokens[3] not in ('0', '1'):
                raise GraphFormatError(path, lineno, "er_flag must be 0 or 1, got '{}'".format(tokens[3]))
            flags[k] = tokens[3] == '1'

    g = Graph(n, pairs, flags if has_flag else None)
    if not has_w:
        return g, None
    aligned = np.zeros(g.m)
    aligned[g.edge_index(pairs)] = weights
    return g, WeightVector(aligned)


def write_edge_list(path: str, g: Graph, w: Optional[WeightVector] = None) -> None:
    r"""
    Overview:
        Write ``g`` (and optional weights) in the edge-list format; weights use 17 significant
        digits. When the graph carries an ``er_mask`` a weight column (1.0 by default) and the
        flag column are written.
    """
    values = None if w is None else np.asarray(w, dtype=np.float64)
    if values is not None and values.shape[0] != g.m:
        raise ConfigError("weight vector has {} entries but graph has {} edges".format(values.shape[0], g.m))
    with open(path, 'w', newline='\n') as f:
        f.write('{} {}\n'.format(g.n, g.m))
        for k, (i, j) in enumerate(g.edges):
            fields = [str(int(i)), str(int(j))]
            if values is not None or g.er_mask is not None:
                fields.append(fmt_float(values[k] if values is not None else 1.0))
            if g.er_mask is not None:
                fields.append('1' if g.er_mask[k] else '0')
            f.write(' '.join(fields) + '\n')


def read_weights(path: str, g: Graph) -> WeightVector:
    r"""
    Overview:
        Read a weights edge-list and align it to ``g``. Every listed edge must be an edge of ``g``;
        edges of ``g`` that are not listed get weight 0.
    """
    wg, w = read_edge_list(path)
    if wg.n != g.n:
        raise ConfigError("weights file {} has n={} but graph has n={}".format(path, wg.n, g.n))
    values = np.zeros(g.m)
    listed = np.ones(wg.m) if w is None else w.values
    values[g.edge_index(wg.edges)] = listed
    return WeightVector(values)

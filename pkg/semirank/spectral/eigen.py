from dataclasses import dataclass, asdict
from itertools import product
from typing import List, Optional, Tuple, Union
import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _cc

from semirank.graph import Graph, WeightVector, build_laplacian, weighted_degrees, smallest_component
from semirank.graph.graph import _as_values
from semirank.utils.errors import ConfigError, DisconnectedGraphError, InstanceTooLargeError

PINV_CUTOFF = 1e-9
SYMMETRY_TOL = 1e-10
EXACT_CONDUCTANCE_MAX_N = 16


def _check_symmetric(L: np.ndarray) -> np.ndarray:
    L = np.asarray(L, dtype=np.float64)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ConfigError("expected a square matrix, got shape {}".format(L.shape))
    scale = max(1.0, float(np.abs(L).max())) if L.size else 1.0
    if np.abs(L - L.T).max() > SYMMETRY_TOL * scale:
        raise ConfigError("matrix is not symmetric within {}".format(SYMMETRY_TOL))
    return L


def lambda_n_minus_1(L: np.ndarray) -> float:
    r"""
    Overview:
        Second-smallest eigenvalue of a graph Laplacian, i.e. the smallest eigenvalue on the
        complement of ``span{1}``. Zero exactly when the weighted graph is disconnected.
    """
    L = _check_symmetric(L)
    evals = scipy.linalg.eigvalsh(L)
    return max(float(evals[1]), 0.0)


def _pinv_spectrum(L: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    evals, evecs = scipy.linalg.eigh(_check_symmetric(L))
    cutoff = PINV_CUTOFF * max(float(evals[-1]), 0.0)
    keep = evals > cutoff
    inv = np.zeros_like(evals)
    inv[keep] = 1.0 / evals[keep]
    return evecs, inv, keep


def laplacian_pinv(L: np.ndarray) -> np.ndarray:
    evecs, inv, _ = _pinv_spectrum(L)
    return (evecs * inv) @ evecs.T


def laplacian_pinv_apply(L: np.ndarray, v: np.ndarray) -> np.ndarray:
    r"""
    Overview:
        ``L^+ v`` through an eigendecomposition; eigenvalues below ``1e-9 * lambda_max`` are treated
        as zero. ``v`` may be a vector or a matrix of column vectors.
    """
    v = np.asarray(v, dtype=np.float64)
    if not np.all(np.isfinite(v)):
        raise ConfigError("vector must be finite")
    evecs, inv, _ = _pinv_spectrum(L)
    coeff = evecs.T @ v
    coeff = coeff * (inv if coeff.ndim == 1 else inv[:, None])
    return evecs @ coeff


def _laplacian_component(L: np.ndarray) -> np.ndarray:
    adj = sp.csr_matrix(np.abs(L) * (1 - np.eye(L.shape[0])) > 0)
    _, labels = _cc(adj, directed=False)
    counts = np.bincount(labels)
    return np.flatnonzero(labels == int(np.argmin(counts)))


def effective_resistance(L: np.ndarray, k: int, l: int) -> float:
    r"""
    Overview:
        ``(e_k - e_l)^T L^+ (e_k - e_l)``.
    Arguments:
        - L (:obj:`np.ndarray`): Laplacian of a connected weighted graph
        - k (:obj:`int`): first vertex
        - l (:obj:`int`): second vertex
    """
    L = _check_symmetric(L)
    n = L.shape[0]
    if not (0 <= k < n and 0 <= l < n):
        raise ConfigError("vertex out of range [0, {})".format(n))
    evecs, inv, keep = _pinv_spectrum(L)
    if np.count_nonzero(~keep) > 1:
        raise DisconnectedGraphError(_laplacian_component(L))
    if k == l:
        return 0.0
    diff = evecs[k] - evecs[l]
    return float(np.sum(inv * diff ** 2))


def deflate_ones(L: np.ndarray, alpha: Optional[float] = None) -> np.ndarray:
    r"""
    Overview:
        ``L + (alpha / n) 1 1^T``: lifts the all-ones eigenvalue to ``alpha`` and leaves the action on
        ``1^perp`` unchanged. ``alpha`` defaults to ``max(trace(L), 1)``, an upper bound on
        ``lambda_max``.
    """
    n = L.shape[0]
    if alpha is None:
        alpha = max(float(np.trace(L)), 1.0)
    return L + alpha / n


def heat_kernel_factor(L: np.ndarray,
                       eta: float,
                       cols: np.ndarray,
                       normalize: bool = False) -> Union[np.ndarray, Tuple[np.ndarray, float]]:
    r"""
    Overview:
        Dense ``exp(-eta L / 2) cols`` from one symmetric eigendecomposition. With ``normalize`` the
        spectrum is shifted by its minimum, and ``(M, log_scale)`` is returned with
        ``exp(-eta L / 2) cols = exp(log_scale) * M``, which stays representable when ``eta L`` is large.
    """
    L = _check_symmetric(L)
    if eta < 0:
        raise ConfigError("eta must be nonnegative")
    evals, evecs = scipy.linalg.eigh(L)
    shift = float(evals[0]) if normalize else 0.0
    factor = np.exp(-0.5 * eta * (evals - shift))
    cols = np.asarray(cols, dtype=np.float64)
    coeff = evecs.T @ cols
    coeff = coeff * (factor if coeff.ndim == 1 else factor[:, None])
    out = evecs @ coeff
    if normalize:
        return out, -0.5 * eta * shift
    return out


def _check_degrees(g: Graph, w: Optional[WeightVector]) -> np.ndarray:
    deg = weighted_degrees(g, w)
    if np.any(deg <= 0):
        v = int(np.flatnonzero(deg <= 0)[0])
        raise DisconnectedGraphError([v], 'vertex {} has zero weighted degree'.format(v))
    return deg


def normalized_gap(g: Graph, w: Optional[WeightVector] = None) -> float:
    r"""
    Overview:
        ``lambda_{n-1}(D^{-1/2} L_w D^{-1/2})``; requires every weighted degree to be positive.
    """
    deg = _check_degrees(g, w)
    inv_sqrt = 1.0 / np.sqrt(deg)
    norm_lap = build_laplacian(g, w) * inv_sqrt[:, None] * inv_sqrt[None, :]
    evals = scipy.linalg.eigvalsh(norm_lap)
    return max(float(evals[1]), 0.0)


def conductance_lower_bound(g: Graph, w: Optional[WeightVector] = None) -> float:
    r"""
    Overview:
        Cheeger-type lower bound ``Phi(G) >= lambda_{n-1}(D^{-1/2} L D^{-1/2}) / 2``.
    """
    return 0.5 * normalized_gap(g, w)


def exact_conductance(g: Graph, w: Optional[WeightVector] = None) -> float:
    r"""
    Overview:
        Exhaustive ``min_S w(S, V \ S) / min(vol(S), vol(V \ S))`` over nonempty proper cuts, for
        ``n <= 16``. Cuts with a zero-volume side are skipped.
    """
    if g.n > EXACT_CONDUCTANCE_MAX_N:
        raise InstanceTooLargeError(
            "exact conductance enumerates cuts and supports n <= {}, got n={}".format(EXACT_CONDUCTANCE_MAX_N, g.n)
        )
    values = _as_values(g, w)
    deg = weighted_degrees(g, w)
    total = deg.sum()
    # vertex n-1 stays outside S; every cut is counted once
    sides = np.array(list(product([0, 1], repeat=g.n - 1)), dtype=bool)[1:]
    sides = np.concatenate([sides, np.zeros((sides.shape[0], 1), dtype=bool)], axis=1)
    cut = (sides[:, g.tails] != sides[:, g.heads]).astype(np.float64) @ values
    vol_s = sides.astype(np.float64) @ deg
    denom = np.minimum(vol_s, total - vol_s)
    valid = denom > 0
    if not np.any(valid):
        return 0.0
    return float(np.min(cut[valid] / denom[valid]))


def congestion_sum(g: Graph, w: Optional[WeightVector], z: np.ndarray, k: int, l: int) -> float:
    r"""
    Overview:
        ``sum_ij w_ij |(e_k - e_l)^T L_wz^+ (e_i - e_j)|`` where ``L_wz`` is the Laplacian with edge
        weights ``w_ij * z_ij``.
    """
    values = _as_values(g, w)
    z = np.asarray(z, dtype=np.float64).reshape(-1)
    if z.shape[0] != g.m:
        raise ConfigError("z has {} entries but graph has {} edges".format(z.shape[0], g.m))
    if not (0 <= k < g.n and 0 <= l < g.n):
        raise ConfigError("vertex out of range [0, {})".format(g.n))
    wz = WeightVector(values * z)
    lap = build_laplacian(g, wz)
    evecs, inv, keep = _pinv_spectrum(lap)
    if np.count_nonzero(~keep) > 1:
        raise DisconnectedGraphError(smallest_component(g, wz))
    if k == l:
        return 0.0
    x = evecs @ (inv * (evecs[k] - evecs[l]))
    return float(np.sum(values * np.abs(x[g.tails] - x[g.heads])))


@dataclass
class SpectralReport:
    lambda_gap: float
    d_max: float
    d_min: float
    w_max: float
    conductance_lb: float

    def to_rows(self) -> List[Tuple[str, float]]:
        return list(asdict(self).items())


def spectral_report(g: Graph, w: Optional[WeightVector] = None) -> SpectralReport:
    values = _as_values(g, w)
    deg = weighted_degrees(g, w)
    try:
        cond = conductance_lower_bound(g, w)
    except DisconnectedGraphError:
        cond = 0.0
    return SpectralReport(
        lambda_gap=lambda_n_minus_1(build_laplacian(g, w)),
        d_max=float(deg.max()),
        d_min=float(deg.min()),
        w_max=float(values.max()) if values.size else 0.0,
        conductance_lb=cond,
    )

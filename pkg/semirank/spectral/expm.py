from typing import Callable, Optional, Tuple
import numpy as np
import scipy.linalg

from ditk import logging

from semirank.graph import Graph, WeightVector, build_laplacian, laplacian_operator
from semirank.spectral.eigen import deflate_ones, heat_kernel_factor
from semirank.utils.errors import ConfigError, ExpActionError

EXP_METHODS = ['lanczos', 'dense']
BREAKDOWN_TOL = 1e-12


def _lanczos_column(matvec: Callable[[np.ndarray], np.ndarray], v: np.ndarray, eta: float, delta: float,
                    max_dim: int) -> Tuple[np.ndarray, float, float]:
    r"""
    Overview:
        Lanczos approximation of ``exp(-eta A) v`` with full reorthogonalization. The projected
        exponential is shifted by the smallest Ritz value ``s``, so the result ``y`` satisfies
        ``exp(-eta A) v ~= exp(-eta s) y``. A column is accepted when successive Krylov dimensions change
        ``y`` by at most ``delta / 10`` and the a-posteriori estimate
        ``beta_m |e_m^T exp(-eta (T_m - s)) e_1|`` is at most ``delta``, both relative to ``|v|``, or on an
        invariant subspace (estimate 0). Returns ``(y, s, estimate)``.
    """
    n = v.shape[0]
    beta0 = float(np.linalg.norm(v))
    if beta0 == 0.0:
        return np.zeros(n), 0.0, 0.0
    basis = np.zeros((n, max_dim))
    basis[:, 0] = v / beta0
    alpha, beta = [], []
    a_norm = 0.0
    prev, prev_shift = None, None
    estimate = np.inf
    for j in range(max_dim):
        q = basis[:, j]
        r = matvec(q)
        a = float(q @ r)
        r = r - a * q
        if j > 0:
            r = r - beta[-1] * basis[:, j - 1]
        r = r - basis[:, :j + 1] @ (basis[:, :j + 1].T @ r)
        b = float(np.linalg.norm(r))
        alpha.append(a)
        a_norm = max(a_norm, abs(a) + b + (beta[-1] if beta else 0.0))

        if j == 0:
            evals, evecs = np.array([a]), np.ones((1, 1))
        else:
            evals, evecs = scipy.linalg.eigh_tridiagonal(np.array(alpha), np.array(beta))
        shift = float(evals[0])
        y = evecs @ (np.exp(-eta * (evals - shift)) * evecs[0])

        if b <= BREAKDOWN_TOL * a_norm:
            return beta0 * (basis[:, :j + 1] @ y), shift, 0.0
        estimate = b * abs(float(y[j]))
        if prev is not None and estimate <= delta:
            rescaled = np.exp(-eta * (prev_shift - shift)) * prev
            change = np.sqrt(np.sum((y[:j] - rescaled) ** 2) + y[j] ** 2)
            if change <= delta / 10:
                return beta0 * (basis[:, :j + 1] @ y), shift, estimate
        prev, prev_shift = y, shift
        beta.append(b)
        if j + 1 < max_dim:
            basis[:, j + 1] = r / b
    raise ExpActionError(
        "Lanczos exponential action did not reach delta={} within Krylov dimension {}, "
        "error estimate {:.3g}".format(delta, max_dim, estimate)
    )


def exp_action_scaled(
        g: Graph,
        w: Optional[WeightVector],
        eta: float,
        V0: np.ndarray,
        delta: float = 1e-6,
        method: str = 'lanczos',
        deflate: bool = False,
        max_dim: Optional[int] = None,
) -> Tuple[np.ndarray, float]:
    r"""
    Overview:
        ``exp(-eta L_w) V0`` returned as ``(M, log_scale)`` with ``exp(-eta L_w) V0 ~= exp(log_scale) M``.
        The common scale keeps the columns representable when ``eta L_w`` has a large spectral gap.
    Arguments:
        - g (:obj:`Graph`): graph
        - w (:obj:`WeightVector`): edge weights, ``eta * w`` must be finite
        - eta (:obj:`float`): nonnegative step
        - V0 (:obj:`np.ndarray`): ``n x k`` start block
        - delta (:obj:`float`): per-column tolerance relative to ``|V0[:, c]|``
        - method (:obj:`str`): ``lanczos`` (matrix-free) or ``dense`` (one eigendecomposition)
        - deflate (:obj:`bool`): apply ``L_w + alpha 11^T / n`` instead, which agrees with ``L_w`` on \
            centered columns and lets the shift use the gap on ``1^perp``
        - max_dim (:obj:`int`): Krylov dimension cap, defaults to ``n``
    """
    if method not in EXP_METHODS:
        raise ConfigError("unknown exponential method '{}', expected one of {}".format(method, EXP_METHODS))
    if not (np.isfinite(eta) and eta >= 0):
        raise ConfigError("eta must be finite and nonnegative, got {}".format(eta))
    if not delta > 0:
        raise ConfigError("delta must be positive")
    V0 = np.asarray(V0, dtype=np.float64)
    squeeze = V0.ndim == 1
    if squeeze:
        V0 = V0[:, None]
    if V0.shape[0] != g.n:
        raise ConfigError("start block has {} rows but graph has {} vertices".format(V0.shape[0], g.n))
    if eta == 0.0:
        out = V0.copy()
        return (out[:, 0] if squeeze else out), 0.0

    if method == 'dense':
        lap = build_laplacian(g, w)
        if deflate:
            lap = deflate_ones(lap)
        out, log_scale = heat_kernel_factor(lap, 2.0 * eta, V0, normalize=True)
        return (out[:, 0] if squeeze else out), log_scale

    op = laplacian_operator(g, w)
    if deflate:
        alpha = max(float(op.diagonal().sum()), 1.0)
        n = g.n

        def matvec(x):
            return op @ x + (alpha / n) * x.sum()
    else:

        def matvec(x):
            return op @ x

    max_dim = g.n if max_dim is None else min(int(max_dim), g.n)
    cols, shifts, estimates = [], [], []
    for c in range(V0.shape[1]):
        y, s, est = _lanczos_column(matvec, V0[:, c], eta, delta, max_dim)
        cols.append(y)
        shifts.append(s)
        estimates.append(est)
    shifts = np.array(shifts)
    base = float(shifts.min())
    out = np.stack(cols, axis=1) * np.exp(-eta * (shifts - base))[None, :]
    logging.debug(
        'lanczos exp action: k={} shift range [{:.4g}, {:.4g}], max error estimate {:.3g}'.format(
            V0.shape[1], base, shifts.max(), max(estimates)
        )
    )
    return (out[:, 0] if squeeze else out), -eta * base


def exp_action(
        g: Graph,
        w: Optional[WeightVector],
        eta: float,
        V0: np.ndarray,
        delta: float = 1e-6,
        method: str = 'lanczos',
        max_dim: Optional[int] = None,
) -> np.ndarray:
    r"""
    Overview:
        Heat-kernel action ``exp(-eta L_w) V0``, column ``c`` accurate to ``delta * |V0[:, c]|``.
        The Lanczos path never forms a dense ``n x n`` matrix.
    """
    out, log_scale = exp_action_scaled(g, w, eta, V0, delta, method, deflate=False, max_dim=max_dim)
    return np.exp(log_scale) * out

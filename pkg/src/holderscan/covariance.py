"""Error covariance estimates on the grid and their symmetric square roots.

Operators are plain ``D x D`` arrays holding the covariance kernel at grid
points, ``C[d, e] = Cov(eps(s_d), eps(s_e))``.  The weighted norm is applied
later, when the scan statistic is evaluated.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, FormatError, ParameterError
from .fts import FtsSample

SYMMETRY_TOLERANCE = 1e-6


def _data(x) -> np.ndarray:
    return x.data if isinstance(x, FtsSample) else np.asarray(x, dtype=float)


def _difference_outer(rows: np.ndarray) -> np.ndarray:
    diffs = np.diff(rows, axis=0)
    c = diffs.T @ diffs / (2 * diffs.shape[0])
    return (c + c.T) / 2


def first_difference_cov(sample) -> np.ndarray:
    """Lag-one difference estimate ``sum (X_n - X_{n-1})^{(x)2} / (2 (N - 1))``.

    Unaffected by a piecewise-constant mean except at the change points.
    """
    data = _data(sample)
    if data.ndim != 2 or data.shape[0] < 2:
        raise ParameterError("first-difference covariance needs at least 2 curves")
    return _difference_outer(data)


def block_long_run_cov(sample, k: int = 3) -> np.ndarray:
    """Long-run covariance from differences of normalized block sums.

    With ``A_i = k**-0.5 * (X_{(i-1)k+1} + ... + X_{ik})`` over the
    ``M = N // k`` complete blocks, returns
    ``sum_{i=2..M} (A_i - A_{i-1})^{(x)2} / (2 (M - 1))``.  A trailing
    incomplete block is dropped.
    """
    data = _data(sample)
    k = int(k)
    if k < 1:
        raise ParameterError(f"block size must be at least 1, got {k}")
    N = data.shape[0]
    if N < 2 * k:
        raise ParameterError(f"block estimator needs N >= 2k (N={N}, k={k})")
    M = N // k
    blocks = data[: M * k].reshape(M, k, -1).sum(axis=1) / np.sqrt(k)
    return _difference_outer(blocks)


def ecdf_pointwise_cov(cdf) -> np.ndarray:
    """Bernoulli-type kernel ``F(min(s, t)) - F(s) F(t)`` of an empirical cdf.

    ``cdf`` holds the cdf evaluated on an increasing grid.
    """
    F = np.asarray(cdf, dtype=float)
    if F.ndim != 1:
        raise DimensionError("expected one cdf curve")
    if np.any(F < 0) or np.any(F > 1) or not np.all(np.isfinite(F)):
        raise FormatError("cdf values must lie in [0, 1]")
    if np.any(np.diff(F) < 0):
        raise FormatError("cdf values must be nondecreasing along the grid")
    # F is monotone, so F(min(s_d, s_e)) = min(F_d, F_e)
    return np.minimum.outer(F, F) - np.outer(F, F)


def ecdf_pointwise_covs(cdfs) -> np.ndarray:
    """Stack of :func:`ecdf_pointwise_cov` for each row of an ``N x D`` array."""
    F = np.asarray(cdfs, dtype=float)
    if F.ndim != 2:
        raise DimensionError("expected an N x D matrix of cdf curves")
    if np.any(F < 0) or np.any(F > 1) or np.any(np.diff(F, axis=1) < 0):
        raise FormatError("every row must be a nondecreasing cdf in [0, 1]")
    return np.minimum(F[:, :, None], F[:, None, :]) - F[:, :, None] * F[:, None, :]


def cov_root(c) -> np.ndarray:
    """Symmetric PSD square root ``Q diag(sqrt(max(lambda, 0))) Q^T``."""
    c = np.asarray(c, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise DimensionError(f"covariance must be square, got shape {c.shape}")
    scale = max(np.abs(c).max(), 1.0)
    if np.abs(c - c.T).max() > SYMMETRY_TOLERANCE * scale:
        raise FormatError("covariance operator is not symmetric")
    lam, Q = np.linalg.eigh((c + c.T) / 2)
    root = (Q * np.sqrt(np.clip(lam, 0.0, None))) @ Q.T
    return (root + root.T) / 2


def cov_roots(cs) -> np.ndarray:
    """Batched :func:`cov_root` over a stack of ``D x D`` operators."""
    cs = np.asarray(cs, dtype=float)
    if cs.ndim != 3 or cs.shape[1] != cs.shape[2]:
        raise DimensionError(f"expected a stack of square matrices, got shape {cs.shape}")
    sym = (cs + np.swapaxes(cs, 1, 2)) / 2
    lam, Q = np.linalg.eigh(sym)
    roots = (Q * np.sqrt(np.clip(lam, 0.0, None))[:, None, :]) @ np.swapaxes(Q, 1, 2)
    return (roots + np.swapaxes(roots, 1, 2)) / 2

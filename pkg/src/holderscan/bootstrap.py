"""Gaussian bootstrap for the MultiScan critical threshold.

Each replicate draws ``Z_1, ..., Z_N ~ N(0, I_D)``, forms synthetic errors
``R_n Z_n`` from covariance roots, and records the supremum of the scan
statistic over the index set.  The threshold is the empirical
``(1 - alpha)``-quantile of the replicate suprema.

Replicate ``b`` draws from its own Philox stream keyed by ``(seed, b)``, and
replicates are processed in fixed-size chunks, so results do not depend on
how many worker threads are used.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .fts import Grid
from .index_set import ScanIndexSet
from .scan import gamma_sup
from .weights import WeightFunction

THREADS_ENV = "HOLDERSCAN_THREADS"
CHUNK = 16


@dataclass(frozen=True)
class BootstrapConfig:
    idx: ScanIndexSet
    weight: WeightFunction
    B: int = 1000
    alpha: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if int(self.B) < 1:
            raise ParameterError(f"B must be at least 1, got {self.B}")
        if not 0 < self.alpha < 1:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if int(self.seed) < 0:
            raise ParameterError("seed must be a nonnegative integer")


@dataclass(frozen=True)
class ThresholdResult:
    q: float
    replicate_stats: np.ndarray
    alpha: float

    @property
    def B(self) -> int:
        return self.replicate_stats.size

    def quantile(self, alpha: float) -> float:
        return empirical_quantile(self.replicate_stats, alpha)


def empirical_quantile(values, alpha: float) -> float:
    """The ``ceil((1 - alpha) B)``-th smallest value (1-indexed)."""
    v = np.sort(np.asarray(values, dtype=float).ravel())
    if v.size == 0:
        raise ParameterError("empirical quantile of an empty sample")
    if not 0 < alpha < 1:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    # guard against (1 - alpha) * B landing a hair above an integer
    k = math.ceil((1 - alpha) * v.size - 1e-9)
    return float(v[min(max(k, 1), v.size) - 1])


def replicate_stream(seed: int, b: int) -> np.random.Generator:
    """Counter-based generator for bootstrap replicate ``b``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=(int(b),))))


def thread_count(n_threads: int | None = None) -> int:
    if n_threads is None:
        n_threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    return max(1, int(n_threads))


def _run(roots: np.ndarray, N: int, D: int, cfg: BootstrapConfig, grid: Grid | None, n_threads):
    """``roots`` has shape (D, D) or (N, D, D)."""
    roots_t = np.swapaxes(roots, -1, -2)

    def chunk_stats(start: int) -> np.ndarray:
        stop = min(start + CHUNK, cfg.B)
        # time-major so every time step multiplies a (chunk, D) block by its root
        Z = np.empty((N, stop - start, D))
        for i, b in enumerate(range(start, stop)):
            Z[:, i, :] = replicate_stream(cfg.seed, b).standard_normal((N, D))
        eps = np.swapaxes(np.matmul(Z, roots_t), 0, 1)
        return np.atleast_1d(gamma_sup(eps, cfg.idx, cfg.weight, grid))

    starts = range(0, cfg.B, CHUNK)
    workers = thread_count(n_threads)
    if workers == 1:
        parts = [chunk_stats(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(chunk_stats, starts))
    stats = np.concatenate(parts)
    stats.setflags(write=False)
    return ThresholdResult(empirical_quantile(stats, cfg.alpha), stats, cfg.alpha)


def _check_grid(grid: Grid | None, D: int):
    if grid is not None and grid.D != D:
        raise ParameterError(f"root has dimension {D}, grid has {grid.D} points")


def boot_stationary(root, N: int, cfg: BootstrapConfig, grid: Grid | None = None,
                    n_threads: int | None = None) -> ThresholdResult:
    """Threshold from a single covariance root shared by all time points."""
    root = np.asarray(root, dtype=float)
    if root.ndim != 2 or root.shape[0] != root.shape[1]:
        raise ParameterError(f"root must be square, got shape {root.shape}")
    if N != cfg.idx.N:
        raise ParameterError(f"index set built for N={cfg.idx.N}, bootstrap asked for N={N}")
    D = root.shape[0]
    _check_grid(grid, D)
    return _run(root, N, D, cfg, grid, n_threads)


def boot_panel(roots, cfg: BootstrapConfig, grid: Grid | None = None,
               n_threads: int | None = None) -> ThresholdResult:
    """Threshold with a separate covariance root for each time point."""
    try:
        roots = np.asarray(roots, dtype=float)
    except ValueError:
        raise ParameterError("covariance roots differ in size across time points") from None
    if roots.ndim != 3 or roots.shape[1] != roots.shape[2]:
        raise ParameterError(f"expected N square roots of equal size, got shape {roots.shape}")
    N, D = roots.shape[0], roots.shape[1]
    if N != cfg.idx.N:
        raise ParameterError(f"index set built for N={cfg.idx.N}, got {N} roots")
    _check_grid(grid, D)
    return _run(roots, N, D, cfg, grid, n_threads)

"""End-to-end detection: covariance estimate -> bootstrap threshold -> MultiScan."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bootstrap import BootstrapConfig, ThresholdResult, boot_panel, boot_stationary
from .covariance import block_long_run_cov, cov_root, cov_roots, ecdf_pointwise_covs, first_difference_cov
from .errors import ParameterError
from .fts import FtsSample
from .index_set import ScanIndexSet
from .scan import DetectionSet, multiscan
from .weights import WeightFunction

FIRST_DIFF = "first-diff"
BLOCK = "block"
ECDF = "ecdf"
DEFAULT_BLOCK = 3


@dataclass(frozen=True)
class CovSpec:
    """Which covariance estimator feeds the bootstrap."""

    method: str = FIRST_DIFF
    k: int = DEFAULT_BLOCK

    def __post_init__(self):
        if self.method not in (FIRST_DIFF, BLOCK, ECDF):
            raise ParameterError(f"unknown covariance method {self.method!r}")
        if self.k < 1:
            raise ParameterError(f"block size must be at least 1, got {self.k}")

    @classmethod
    def parse(cls, text: str) -> "CovSpec":
        """``"first-diff"``, ``"block:<k>"`` (or ``"block"``) or ``"ecdf"``."""
        method, sep, arg = text.strip().lower().partition(":")
        if method == BLOCK:
            if not sep:
                return cls(BLOCK)
            try:
                return cls(BLOCK, int(arg))
            except ValueError:
                raise ParameterError(f"block size {arg!r} is not an integer") from None
        if sep:
            raise ParameterError(f"covariance method {method!r} takes no argument")
        return cls(method)

    def __str__(self):
        return f"{BLOCK}:{self.k}" if self.method == BLOCK else self.method


def estimate_roots(sample: FtsSample, cov: CovSpec, cdfs: np.ndarray | None = None) -> np.ndarray:
    """Covariance root(s) for the bootstrap: ``(D, D)``, or ``(N, D, D)`` for ECDF panels."""
    if cov.method == ECDF:
        if cdfs is None:
            raise ParameterError("the ecdf covariance needs panel input (empirical cdf curves)")
        return cov_roots(ecdf_pointwise_covs(cdfs))
    if cov.method == BLOCK:
        return cov_root(block_long_run_cov(sample, cov.k))
    return cov_root(first_difference_cov(sample))


def threshold(sample: FtsSample, idx: ScanIndexSet, weight: WeightFunction, cov: CovSpec,
              B: int, alpha: float, seed: int, cdfs=None, n_threads=None) -> ThresholdResult:
    roots = estimate_roots(sample, cov, cdfs)
    cfg = BootstrapConfig(idx, weight, B=B, alpha=alpha, seed=seed)
    if roots.ndim == 3:
        return boot_panel(roots, cfg, sample.grid, n_threads=n_threads)
    return boot_stationary(roots, sample.N, cfg, sample.grid, n_threads=n_threads)


def detect(sample: FtsSample, idx: ScanIndexSet, weight: WeightFunction, cov: CovSpec,
           B: int, alpha: float, seed: int, cdfs=None,
           n_threads=None) -> tuple[DetectionSet, ThresholdResult]:
    """Bootstrap a threshold for ``sample`` and run MultiScan with it."""
    boot = threshold(sample, idx, weight, cov, B, alpha, seed, cdfs, n_threads)
    if not boot.q > 0:
        # degenerate (zero) noise estimate: nothing can be declared significant
        return DetectionSet(q=boot.q), boot
    return multiscan(sample, idx, boot.q, weight), boot

"""Multiscale change point detection for functional time series.

Hölder-type scan statistics over a family of window widths, a Gaussian
multiplier bootstrap for the critical threshold, and the MultiScan
procedure that turns exceedances into disjoint change intervals.
"""

from .bootstrap import BootstrapConfig, ThresholdResult, boot_panel, boot_stationary, empirical_quantile
from .covariance import (
    block_long_run_cov,
    cov_root,
    cov_roots,
    ecdf_pointwise_cov,
    ecdf_pointwise_covs,
    first_difference_cov,
)
from .errors import DimensionError, FormatError, NumericalError, ParameterError
from .fts import FtsSample, Grid, PrefixSums, build_prefix_sums, segment_sum, weighted_l2_norm
from .index_set import ScanIndexSet, ScanPair, build_all, build_pyramid, eliminate, neighborhood_argmax
from .pipeline import CovSpec, detect, estimate_roots, threshold
from .scan import Detection, DetectionSet, gamma, gamma_sup, gamma_table, multiscan
from .simulate import DetectorConfig, DgpConfig, McResult, run_monte_carlo, score
from .weights import WeightFunction

__version__ = "0.1.0"

__all__ = [
    "BootstrapConfig", "ThresholdResult", "boot_panel", "boot_stationary", "empirical_quantile",
    "block_long_run_cov", "cov_root", "cov_roots", "ecdf_pointwise_cov", "ecdf_pointwise_covs",
    "first_difference_cov",
    "DimensionError", "FormatError", "NumericalError", "ParameterError",
    "FtsSample", "Grid", "PrefixSums", "build_prefix_sums", "segment_sum", "weighted_l2_norm",
    "ScanIndexSet", "ScanPair", "build_all", "build_pyramid", "eliminate", "neighborhood_argmax",
    "CovSpec", "detect", "estimate_roots", "threshold",
    "Detection", "DetectionSet", "gamma", "gamma_sup", "gamma_table", "multiscan",
    "DetectorConfig", "DgpConfig", "McResult", "run_monte_carlo", "score",
    "WeightFunction",
]

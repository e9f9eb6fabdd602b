"""Monte Carlo harness: size, power and weak/strong localization rates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dgp
from .errors import ParameterError
from .index_set import ScanIndexSet
from .pipeline import BLOCK, ECDF, FIRST_DIFF, CovSpec, detect
from .scan import DetectionSet
from .weights import WeightFunction

DGP_KINDS = ("iid", "far", "panel")


@dataclass(frozen=True)
class DgpConfig:
    """Data-generating design for one Monte Carlo cell.

    ``jump_scale`` multiplies every segment mean of a curve scenario
    (ignored for panels).
    """

    kind: str = "iid"
    scenario: str = "H0"
    N: int = 100
    D: int = dgp.DEFAULT_D
    sigma: float = dgp.DEFAULT_SIGMA
    M: int = dgp.DEFAULT_M
    jump_scale: float = 1.0
    far_recursion: str = "ar"

    def __post_init__(self):
        if self.kind not in DGP_KINDS:
            raise ParameterError(f"unknown dgp {self.kind!r}; choose from {DGP_KINDS}")

    def truth(self):
        if self.kind == "panel":
            return dgp.panel_scenario(self.scenario, self.N, self.M)
        spec = dgp.mean_scenario(self.scenario, self.N, self.D)
        return spec if self.jump_scale == 1.0 else spec.scaled(self.jump_scale)

    def generate(self, seed):
        """Return ``(sample, cdfs, change_locations)``; ``cdfs`` is None for curves."""
        truth = self.truth()
        if self.kind == "panel":
            sample, cdfs = dgp.panel_to_curves(truth, dgp.panel_grid(), seed)
            return sample, cdfs, truth.locations
        if self.kind == "far":
            errors = dgp.far_errors(self.N, self.D, self.sigma, seed, recursion=self.far_recursion)
        else:
            errors = dgp.iid_errors(self.N, self.D, self.sigma, seed)
        return dgp.curve_sample(truth, errors), None, truth.locations


@dataclass(frozen=True)
class DetectorConfig:
    weight: WeightFunction = field(default_factory=lambda: WeightFunction("poly", 0.25))
    index_set: str = "all"
    alpha: float = 0.05
    B: int = 200
    cov: CovSpec | None = None

    def cov_for(self, kind: str) -> CovSpec:
        """Explicit covariance choice, or the regime default for ``kind``."""
        if self.cov is not None:
            return self.cov
        return {"iid": CovSpec(FIRST_DIFF), "far": CovSpec(BLOCK), "panel": CovSpec(ECDF)}[kind]


def score(detections, locations) -> tuple[bool, bool, bool]:
    """Rejection, weak and strong localization indicators for one run.

    Weak: every reported interval covers some true change.  Strong: weak,
    every change is covered, and there are exactly as many intervals as
    changes.  Both are evaluated literally, so with no changes an empty
    output is a weak and strong success.
    """
    intervals = [(d.lo, d.hi) if hasattr(d, "lo") else (d[0] - d[1] + 1, d[0] + d[1]) for d in detections]
    rejected = len(intervals) > 0
    weak = all(any(lo <= c <= hi for c in locations) for lo, hi in intervals)
    strong = (
        weak
        and all(any(lo <= c <= hi for lo, hi in intervals) for c in locations)
        and len(intervals) == len(locations)
    )
    return rejected, weak, strong


@dataclass
class McResult:
    R: int
    K: int
    rejections: int = 0
    weak_successes: int = 0
    strong_successes: int = 0
    thresholds: list[float] = field(default_factory=list)
    detections: list[DetectionSet] = field(default_factory=list)

    @property
    def rejection_rate(self) -> float:
        """Empirical size when ``K == 0``, power otherwise."""
        return self.rejections / self.R

    @property
    def weak_rate(self) -> float:
        return self.weak_successes / self.R

    @property
    def strong_rate(self) -> float:
        return self.strong_successes / self.R

    def locations(self) -> list[int]:
        """Every accepted ``n_max`` across replications."""
        return [d.n for run in self.detections for d in run]

    def half_widths(self) -> list[int]:
        return [d.h for run in self.detections for d in run]

    def summary(self) -> dict:
        return {
            "R": self.R,
            "K": self.K,
            "rejection_rate": self.rejection_rate,
            "weak_rate": self.weak_rate,
            "strong_rate": self.strong_rate,
            "rejections": self.rejections,
            "weak_successes": self.weak_successes,
            "strong_successes": self.strong_successes,
        }


class ReplicationError(RuntimeError):
    def __init__(self, index: int, cause: Exception):
        super().__init__(f"replication {index} failed: {cause}")
        self.index = index


def replication_seeds(seed: int, r: int) -> tuple[int, int]:
    """Independent (data, bootstrap) seeds for replication ``r``."""
    state = np.random.SeedSequence(int(seed), spawn_key=(int(r),)).generate_state(2, np.uint64)
    return int(state[0]), int(state[1])


def run_monte_carlo(design: DgpConfig, detector: DetectorConfig, R: int, seed: int = 0,
                    n_threads: int | None = None) -> McResult:
    """Repeat generate -> estimate -> bootstrap -> MultiScan -> score ``R`` times."""
    if R < 1:
        raise ParameterError(f"R must be at least 1, got {R}")
    idx = ScanIndexSet.parse(detector.index_set, design.N)
    cov = detector.cov_for(design.kind)
    K = design.truth().K
    out = McResult(R=R, K=K)
    for r in range(R):
        data_seed, boot_seed = replication_seeds(seed, r)
        try:
            sample, cdfs, locations = design.generate(data_seed)
            found, boot = detect(sample, idx, detector.weight, cov, detector.B,
                                 detector.alpha, boot_seed, cdfs, n_threads)
        except Exception as exc:
            raise ReplicationError(r, exc) from exc
        rejected, weak, strong = score(found, locations)
        out.rejections += rejected
        out.weak_successes += weak
        out.strong_successes += strong
        out.thresholds.append(boot.q)
        out.detections.append(found)
    return out

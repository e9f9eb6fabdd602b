"""Discretized functional observations and weighted L2 geometry.

Every curve lives on a shared grid of ``D`` points.  Integrals become
quadrature sums against ``Grid.quad_weights``, so the weighted L2 norm of a
curve ``c`` is ``sqrt(sum(c**2 * quad_weights))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError


@dataclass(frozen=True, eq=False)
class Grid:
    """Ordered abscissae with nonnegative quadrature weights.

    Parameters
    ----------
    points : array_like, shape (D,)
        Strictly increasing grid coordinates.
    quad_weights : array_like, shape (D,)
        Nonnegative integration weights (abscissa measure, possibly
        multiplied by a density).
    """

    points: np.ndarray
    quad_weights: np.ndarray

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        weights = np.asarray(self.quad_weights, dtype=float)
        if points.ndim != 1 or points.size < 2:
            raise DimensionError("a grid needs at least 2 points")
        if weights.shape != points.shape:
            raise DimensionError(
                f"quad_weights has shape {weights.shape}, expected {points.shape}"
            )
        if not np.all(np.isfinite(points)) or np.any(np.diff(points) <= 0):
            raise ValueError("grid points must be finite and strictly increasing")
        if not np.all(np.isfinite(weights)) or np.any(weights < 0):
            raise ValueError("quad_weights must be finite and nonnegative")
        points.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "quad_weights", weights)

    @property
    def D(self) -> int:
        return self.points.size

    @classmethod
    def uniform(cls, D: int, lo: float = 0.0, hi: float = 1.0) -> "Grid":
        """``D`` equispaced points on ``[lo, hi]``, each weighted ``(hi - lo) / D``."""
        if D < 2:
            raise DimensionError("a grid needs at least 2 points")
        points = np.linspace(lo, hi, D)
        return cls(points, np.full(D, (hi - lo) / D))

    def __repr__(self):
        return (
            f"Grid(D={self.D}, range=[{self.points[0]:g}, {self.points[-1]:g}], "
            f"mass={self.quad_weights.sum():g})"
        )


@dataclass(frozen=True, eq=False)
class FtsSample:
    """A functional time series ``X_1, ..., X_N`` observed on ``grid``.

    ``data[n - 1]`` holds the curve at time ``n``.
    """

    grid: Grid
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=float)
        if data.ndim != 2:
            raise DimensionError("data must be an N x D matrix")
        if data.shape[1] != self.grid.D:
            raise DimensionError(
                f"data has {data.shape[1]} columns but the grid has {self.grid.D} points"
            )
        if data.shape[0] < 1:
            raise DimensionError("a sample needs at least one curve")
        if not np.all(np.isfinite(data)):
            bad = np.argwhere(~np.isfinite(data))[0]
            raise ValueError(f"non-finite value at time {bad[0] + 1}, grid index {bad[1]}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def N(self) -> int:
        return self.data.shape[0]

    @property
    def D(self) -> int:
        return self.data.shape[1]

    def __len__(self):
        return self.N


def weighted_l2_norm(c, grid: Grid) -> float:
    """Weighted L2 norm ``sqrt(sum_d c[d]**2 * w[d])`` of one curve."""
    c = np.asarray(c, dtype=float)
    if c.shape != (grid.D,):
        raise DimensionError(f"curve has shape {c.shape}, grid expects ({grid.D},)")
    return float(np.sqrt(np.dot(c * c, grid.quad_weights)))


class PrefixSums:
    """Cumulative sums of a sample, with ``cumulative[0] = 0``.

    ``cumulative[j] = X_1 + ... + X_j``, so any window sum costs O(D).
    """

    def __init__(self, cumulative: np.ndarray):
        self.cumulative = cumulative
        self.cumulative.setflags(write=False)

    @property
    def N(self) -> int:
        return self.cumulative.shape[0] - 1

    def segment_sum(self, i: int, j: int) -> np.ndarray:
        """Sum of rows ``i..j`` (1-indexed, inclusive)."""
        if not 1 <= i <= j <= self.N:
            raise IndexError(f"segment [{i}, {j}] outside 1..{self.N}")
        return self.cumulative[j] - self.cumulative[i - 1]


def build_prefix_sums(sample) -> PrefixSums:
    """Prefix sums of an :class:`FtsSample` or any ``N x D`` array."""
    data = sample.data if isinstance(sample, FtsSample) else np.asarray(sample, dtype=float)
    if data.ndim != 2:
        raise DimensionError("data must be an N x D matrix")
    cumulative = np.zeros((data.shape[0] + 1, data.shape[1]))
    np.cumsum(data, axis=0, out=cumulative[1:])
    return PrefixSums(cumulative)


def segment_sum(prefix: PrefixSums, i: int, j: int) -> np.ndarray:
    return prefix.segment_sum(i, j)

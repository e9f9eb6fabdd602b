"""Hölder-type scan statistic and the MultiScan detection algorithm."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ParameterError
from .fts import FtsSample, Grid, PrefixSums
from .index_set import ScanIndexSet, ScanPair
from .weights import WeightFunction


@dataclass(frozen=True)
class Detection:
    """One accepted pair ``(n_max, h)`` and its statistic value."""

    n: int
    h: int
    gamma: float

    @property
    def pair(self) -> ScanPair:
        return ScanPair(self.n, self.h)

    @property
    def lo(self) -> int:
        return self.n - self.h + 1

    @property
    def hi(self) -> int:
        return self.n + self.h

    @property
    def interval(self) -> tuple[int, int]:
        return self.lo, self.hi

    def covers(self, c: int) -> bool:
        return self.lo <= c <= self.hi

    def to_dict(self) -> dict:
        return {"n": self.n, "h": self.h, "gamma": self.gamma, "lo": self.lo, "hi": self.hi}


@dataclass
class DetectionSet:
    """Detections in acceptance order, plus the threshold that produced them."""

    detections: list[Detection] = field(default_factory=list)
    q: float = math.inf

    def __len__(self):
        return len(self.detections)

    def __iter__(self):
        return iter(self.detections)

    def __getitem__(self, i):
        return self.detections[i]

    def pairs(self) -> list[ScanPair]:
        return [d.pair for d in self.detections]

    def to_dict(self) -> dict:
        return {"q": self.q, "detections": [d.to_dict() for d in self.detections]}


def _scaled_cumulative(data: np.ndarray, grid: Grid | None) -> np.ndarray:
    """Prefix sums of ``data * sqrt(w)`` along the time axis (second to last).

    Scaling by ``sqrt(w)`` turns the weighted norm into a plain Euclidean one.
    """
    D = data.shape[-1]
    root_w = np.sqrt(grid.quad_weights) if grid is not None else np.full(D, 1 / math.sqrt(D))
    shape = data.shape[:-2] + (data.shape[-2] + 1, D)
    cum = np.zeros(shape)
    np.cumsum(data * root_w, axis=-2, out=cum[..., 1:, :])
    return cum


def _level_norms(cum: np.ndarray, h: int, centers: np.ndarray | None) -> np.ndarray:
    """Euclidean norms of left-minus-right window sums at one half-width.

    ``centers=None`` means every admissible center ``h..N-h``.
    """
    N = cum.shape[-2] - 1
    if centers is None:
        mid = cum[..., h : N - h + 1, :]
        left = mid - cum[..., : N - 2 * h + 1, :]
        right = cum[..., 2 * h :, :] - mid
    else:
        mid = cum[..., centers, :]
        left = mid - cum[..., centers - h, :]
        right = cum[..., centers + h, :] - mid
    diff = left - right
    return np.sqrt(np.einsum("...d,...d->...", diff, diff))


def _denominator(N: int, h: int, weight: WeightFunction) -> float:
    return math.sqrt(N) * weight(h / N)


def gamma(prefix: PrefixSums, pair, weight: WeightFunction, grid: Grid, N: int | None = None) -> float:
    """Scan statistic at one pair, from prefix sums of the raw data.

    ``||S(n-h+1..n) - S(n+1..n+h)|| / (sqrt(N) * rho(h / N))`` with the
    grid's weighted L2 norm.
    """
    N = prefix.N if N is None else N
    if N != prefix.N:
        raise DimensionError(f"prefix sums cover N={prefix.N}, statistic asked for N={N}")
    n, h = pair
    if not ScanPair(n, h).admissible(N):
        raise IndexError(f"pair {(n, h)} is not admissible for N={N}")
    diff = prefix.segment_sum(n - h + 1, n) - prefix.segment_sum(n + 1, n + h)
    num = math.sqrt(float(np.dot(diff * diff, grid.quad_weights)))
    return num / _denominator(N, h, weight)


def _as_matrix(x, grid: Grid | None):
    if isinstance(x, FtsSample):
        return x.data, x.grid if grid is None else grid
    return np.asarray(x, dtype=float), grid


def gamma_table(x, idx: ScanIndexSet, weight: WeightFunction, grid: Grid | None = None) -> dict[int, np.ndarray]:
    """Scan statistic at every pair of ``idx``, grouped by half-width.

    Returns a dict ``h -> gamma`` aligned with ``idx.levels()[h]``.  ``x``
    may be an :class:`FtsSample` or an ``N x D`` array (a missing grid
    means uniform weights ``1/D``).
    """
    data, grid = _as_matrix(x, grid)
    N = data.shape[0]
    if N != idx.N:
        raise ParameterError(f"index set built for N={idx.N}, data has N={N}")
    cum = _scaled_cumulative(data, grid)
    out = {}
    for h, centers in idx.levels().items():
        full = centers.size == N - 2 * h + 1
        out[h] = _level_norms(cum, h, None if full else centers) / _denominator(N, h, weight)
    return out


def _gram_level_sq(G: np.ndarray, diag0: np.ndarray, h: int, centers: np.ndarray | None) -> np.ndarray:
    """Squared norms ``||2 C_n - C_{n-h} - C_{n+h}||^2`` read off a Gram matrix."""
    N = G.shape[-1] - 1
    dh = np.diagonal(G, offset=h, axis1=-2, axis2=-1)       # G[i, i + h]
    d2h = np.diagonal(G, offset=2 * h, axis1=-2, axis2=-1)  # G[i, i + 2h]
    if centers is None:
        c = slice(h, N - h + 1)
        lo, hi = slice(0, N - 2 * h + 1), slice(2 * h, N + 1)
        left, right, outer = slice(0, N - 2 * h + 1), slice(h, N - h + 1), slice(0, N - 2 * h + 1)
    else:
        c, lo, hi = centers, centers - h, centers + h
        left, right, outer = centers - h, centers, centers - h
    sq = (4 * diag0[..., c] + diag0[..., lo] + diag0[..., hi]
          - 4 * dh[..., left] - 4 * dh[..., right] + 2 * d2h[..., outer])
    return np.clip(sq, 0.0, None)


def gamma_sup(x, idx: ScanIndexSet, weight: WeightFunction, grid: Grid | None = None):
    """Supremum of the scan statistic over ``idx``.

    ``x`` may carry leading batch dimensions, ``(..., N, D)``; the result
    then has shape ``(...)``.  Window norms come from the Gram matrix of the
    centered prefix sums (the window weights 2, -1, -1 sum to zero, so
    centering changes nothing), which costs one matrix product instead of
    a D-length reduction per pair.
    """
    if not len(idx):
        raise ParameterError("cannot take a supremum over an empty index set")
    data, grid = _as_matrix(x, grid)
    N = data.shape[-2]
    if N != idx.N:
        raise ParameterError(f"index set built for N={idx.N}, data has N={N}")
    cum = _scaled_cumulative(data, grid)
    cum -= cum.mean(axis=-2, keepdims=True)
    G = np.matmul(cum, np.swapaxes(cum, -1, -2))
    diag0 = np.diagonal(G, axis1=-2, axis2=-1)
    best = np.zeros(data.shape[:-2])
    for h, centers in idx.levels().items():
        full = centers.size == N - 2 * h + 1
        level = np.sqrt(_gram_level_sq(G, diag0, h, None if full else centers).max(axis=-1))
        np.maximum(best, level / _denominator(N, h, weight), out=best)
    return float(best) if best.ndim == 0 else best


def multiscan(sample: FtsSample, idx: ScanIndexSet, q: float, weight: WeightFunction) -> DetectionSet:
    """Run MultiScan on ``sample`` over ``idx`` with threshold ``q``.

    Pairs are visited in scan order.  The first pair whose statistic
    exceeds ``q`` triggers a local search over same-width survivors
    strictly inside its window (the trigger itself always competes); the maximizer (leftmost on ties) is
    accepted, every pair preceding it or overlapping its interval is
    dropped, and the scan resumes on what is left.  The recursion of the
    textbook formulation is unrolled into a loop.
    """
    if sample.N != idx.N:
        raise ParameterError(f"index set built for N={idx.N}, sample has N={sample.N}")
    if not q > 0:
        raise ParameterError(f"threshold must be positive, got {q}")

    levels = idx.levels()
    table = gamma_table(sample, idx, weight)
    hs = sorted(levels)
    alive = {h: np.ones(levels[h].size, dtype=bool) for h in hs}
    result = DetectionSet(q=float(q))

    start = 0
    while start < len(hs):
        trigger = None
        for li in range(start, len(hs)):
            h = hs[li]
            hits = np.flatnonzero(alive[h] & (table[h] > q))
            if hits.size:
                trigger = li, hits[0]
                break
        if trigger is None:
            break
        li, j = trigger
        h = hs[li]
        centers, g = levels[h], table[h]
        n = centers[j]
        window = alive[h] & (((centers > n - h + 1) & (centers < n + h)) | (centers == n))
        best = np.argmax(np.where(window, g, -np.inf))
        n_max = int(centers[best])
        result.detections.append(Detection(n_max, h, float(g[best])))

        lo, hi = n_max - h + 1, n_max + h
        for hh in hs[li:]:
            c = levels[hh]
            keep = (c + hh < lo) | (c - hh + 1 > hi)
            if hh == h:
                keep &= c > n_max
            alive[hh] &= keep
        start = li
    return result

"""Multiscale index sets of (center, half-width) pairs.

A pair ``(n, h)`` is admissible for sample size ``N`` when
``1 <= n - h + 1 < n + h <= N``; it covers the integer interval
``[n - h + 1, n + h]``.  Pairs are ordered by half-width first and center
second, so short windows and left centers come first.
"""

from __future__ import annotations

import math
from typing import Callable, Iterator, NamedTuple

import numpy as np

from .errors import ParameterError

ALL = "all"
PYRAMID = "pyramid"


class ScanPair(NamedTuple):
    n: int
    h: int

    @property
    def lo(self) -> int:
        return self.n - self.h + 1

    @property
    def hi(self) -> int:
        return self.n + self.h

    def admissible(self, N: int) -> bool:
        return 1 <= self.lo < self.hi <= N


def order_cmp(a, b) -> int:
    """Three-way comparison under the scan order: -1, 0 or 1."""
    ka, kb = (a[1], a[0]), (b[1], b[0])
    return (ka > kb) - (ka < kb)


def precedes(a, b) -> bool:
    """Strict scan order: ``a`` comes before ``b``."""
    return order_cmp(a, b) < 0


class ScanIndexSet:
    """An immutable, ordered collection of admissible scan pairs.

    Parameters
    ----------
    pairs : array_like of int, shape (K, 2)
        Rows ``(n, h)``.  Sorted into scan order on construction and
        deduplicated.
    N : int
        Sample size the pairs were built for.
    kind : str
        ``"all"``, ``"pyramid"`` or ``"subset"`` (after elimination).
    theta : float, optional
        Pyramid base, kept for reporting.
    """

    def __init__(self, pairs, N: int, kind: str = "subset", theta: float | None = None):
        arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        if arr.size:
            n, h = arr[:, 0], arr[:, 1]
            bad = ~((n - h + 1 >= 1) & (n - h + 1 < n + h) & (n + h <= N))
            if bad.any():
                raise ParameterError(f"pair {tuple(arr[bad][0])} is not admissible for N={N}")
            arr = np.unique(arr[:, ::-1], axis=0)[:, ::-1]  # lexicographic on (h, n)
        self.pairs = np.ascontiguousarray(arr)
        self.pairs.setflags(write=False)
        self.N = int(N)
        self.kind = kind
        self.theta = theta

    def __len__(self):
        return self.pairs.shape[0]

    def __iter__(self) -> Iterator[ScanPair]:
        for n, h in self.pairs:
            yield ScanPair(int(n), int(h))

    def __contains__(self, pair) -> bool:
        n, h = pair
        return bool(np.any((self.pairs[:, 0] == n) & (self.pairs[:, 1] == h)))

    def __eq__(self, other):
        if not isinstance(other, ScanIndexSet):
            return NotImplemented
        return self.N == other.N and np.array_equal(self.pairs, other.pairs)

    def __repr__(self):
        return f"ScanIndexSet(kind={self.describe()!r}, N={self.N}, size={len(self)})"

    def describe(self) -> str:
        if self.kind == PYRAMID:
            return f"pyramid:{self.theta:g}"
        return self.kind

    def levels(self) -> dict[int, np.ndarray]:
        """Map each half-width to the sorted array of its centers."""
        out = {}
        if not len(self):
            return out
        h = self.pairs[:, 1]
        cuts = np.flatnonzero(np.diff(h)) + 1
        for block in np.split(self.pairs, cuts):
            out[int(block[0, 1])] = block[:, 0].copy()
        return out

    def as_list(self) -> list[ScanPair]:
        return list(self)

    @classmethod
    def parse(cls, spec: str, N: int) -> "ScanIndexSet":
        """Build from ``"all"`` or ``"pyramid:<theta>"``."""
        text = spec.strip().lower()
        if text == ALL:
            return build_all(N)
        family, sep, theta = text.partition(":")
        if family == PYRAMID and sep:
            try:
                value = float(theta)
            except ValueError:
                raise ParameterError(f"pyramid base {theta!r} is not a number") from None
            return build_pyramid(N, value)
        raise ParameterError(f"index set spec {spec!r}; use 'all' or 'pyramid:<theta>'")


def _pairs_for_levels(N: int, hs) -> np.ndarray:
    blocks = [np.column_stack([np.arange(h, N - h + 1), np.full(N - 2 * h + 1, h)]) for h in hs]
    return np.concatenate(blocks) if blocks else np.empty((0, 2), dtype=np.int64)


def build_all(N: int) -> ScanIndexSet:
    if N < 2:
        raise ParameterError(f"the full index set needs N >= 2, got {N}")
    return ScanIndexSet(_pairs_for_levels(N, range(1, N // 2 + 1)), N, kind=ALL)


def pyramid_levels(N: int, theta: float) -> list[int]:
    """Distinct half-widths ``floor(theta**m)``, ``m = 0, 1, ...``, up to ``N/2``."""
    if not theta > 1 or not math.isfinite(theta):
        raise ParameterError(f"pyramid base must exceed 1, got {theta}")
    levels = []
    m = 0
    while True:
        h = math.floor(theta**m)
        if h > N / 2:
            break
        if not levels or h != levels[-1]:
            levels.append(h)
        m += 1
    return levels


def build_pyramid(N: int, theta: float) -> ScanIndexSet:
    if N < 2:
        raise ParameterError(f"the pyramid index set needs N >= 2, got {N}")
    hs = pyramid_levels(N, theta)
    return ScanIndexSet(_pairs_for_levels(N, hs), N, kind=PYRAMID, theta=float(theta))


def eliminate(s: ScanIndexSet, p) -> ScanIndexSet:
    """Keep the pairs of ``s`` that follow ``p`` and whose interval avoids ``p``'s."""
    n, h = p
    lo, hi = n - h + 1, n + h
    if not len(s):
        return ScanIndexSet(s.pairs, s.N)
    ns, hs = s.pairs[:, 0], s.pairs[:, 1]
    after = (hs > h) | ((hs == h) & (ns > n))
    disjoint = (ns + hs < lo) | (ns - hs + 1 > hi)
    return ScanIndexSet(s.pairs[after & disjoint], s.N)


def neighborhood_argmax(s: ScanIndexSet, p, score: Callable[[ScanPair], float]) -> ScanPair:
    """Best same-width pair of ``s`` strictly inside ``p``'s window.

    Candidates are ``(n', h)`` in ``s`` with ``n - h + 1 < n' < n + h``,
    plus ``p`` itself (the open window is empty when ``h = 1``).  Ties go
    to the smallest ``n'``.
    """
    n, h = p
    if (n, h) not in s:
        raise LookupError(f"pair {(n, h)} is not a member of the index set")
    ns, hs = s.pairs[:, 0], s.pairs[:, 1]
    mask = (hs == h) & (((ns > n - h + 1) & (ns < n + h)) | (ns == n))
    best, best_score = None, -math.inf
    for cand in ns[mask]:
        value = score(ScanPair(int(cand), h))
        if value > best_score:
            best, best_score = int(cand), value
    return ScanPair(best, h)

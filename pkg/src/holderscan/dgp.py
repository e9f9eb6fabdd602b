"""Simulation designs: B-spline error curves, FAR errors, mean-change
scenarios and distributional panels embedded as scaled empirical cdfs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .fts import FtsSample, Grid

N_BASIS = 13
SPLINE_ORDER = 4
DEFAULT_D = 51
DEFAULT_SIGMA = 0.1
FAR_BURN_IN = 50


# -- B-spline errors ---------------------------------------------------------

def spline_knots(n_interior: int = 9, order: int = SPLINE_ORDER) -> np.ndarray:
    """Clamped knot vector on [0, 1] with equispaced interior knots."""
    interior = np.linspace(0, 1, n_interior + 2)[1:-1]
    return np.concatenate([np.zeros(order), interior, np.ones(order)])


def cox_de_boor(x, knots: np.ndarray, order: int = SPLINE_ORDER) -> np.ndarray:
    """All B-spline basis functions of ``order`` at points ``x``.

    Returns an array of shape ``(len(knots) - order, len(x))``.  The right
    end of the knot range is assigned to the last nonempty knot span so the
    basis still sums to one there.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    t = np.asarray(knots, dtype=float)
    n_spans = t.size - 1
    B = np.zeros((n_spans, x.size))
    for i in range(n_spans):
        if t[i] < t[i + 1]:
            B[i] = (x >= t[i]) & (x < t[i + 1])
    last = np.flatnonzero(t[:-1] < t[1:])[-1]
    B[last, x == t[-1]] = 1.0
    for k in range(2, order + 1):
        nxt = np.zeros((n_spans - k + 1, x.size))
        for i in range(n_spans - k + 1):
            left = t[i + k - 1] - t[i]
            right = t[i + k] - t[i + 1]
            if left > 0:
                nxt[i] += (x - t[i]) / left * B[i]
            if right > 0:
                nxt[i] += (t[i + k] - x) / right * B[i + 1]
        B = nxt
    return B


def bspline_basis(D: int = DEFAULT_D) -> np.ndarray:
    """The 13 cubic B-splines with 9 interior knots, on ``Grid.uniform(D)``.

    Shape ``(13, D)``.
    """
    if D < N_BASIS:
        raise ParameterError(f"grid needs at least {N_BASIS} points, got {D}")
    return cox_de_boor(Grid.uniform(D).points, spline_knots())


def iid_errors(N: int, D: int = DEFAULT_D, sigma: float = DEFAULT_SIGMA, seed=None) -> FtsSample:
    """Curves ``sum_m c_{n,m} phi_m`` with i.i.d. ``N(0, sigma^2)`` coefficients."""
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    rng = np.random.default_rng(seed)
    coef = rng.normal(0.0, sigma, size=(N, N_BASIS))
    return FtsSample(Grid.uniform(D), coef @ bspline_basis(D))


def far_kernel(grid: Grid, scale: float = 0.25) -> np.ndarray:
    """Quadrature matrix of ``f -> int scale * s * tau * f(s) ds``."""
    tau = grid.points
    return scale * np.outer(tau, tau * grid.quad_weights)


def far_errors(N: int, D: int = DEFAULT_D, sigma: float = DEFAULT_SIGMA, seed=None,
               kernel_scale: float = 0.25, recursion: str = "ar",
               burn_in: int = FAR_BURN_IN) -> FtsSample:
    """Functional autoregressive errors driven by B-spline innovations.

    ``recursion="ar"`` gives ``eps_n = Psi eps_{n-1} + e_n``;
    ``recursion="ma"`` gives ``eps_n = Psi e_{n-1} + e_n``.  The kept
    innovations ``e_1..e_N`` are the exact draws :func:`iid_errors` makes
    for the same seed, so ``kernel_scale=0`` reproduces it.  Burn-in
    innovations are drawn afterwards from the same generator.
    """
    if not sigma > 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    if recursion not in ("ar", "ma"):
        raise ParameterError(f"recursion must be 'ar' or 'ma', got {recursion!r}")
    grid = Grid.uniform(D)
    basis = bspline_basis(D)
    rng = np.random.default_rng(seed)
    innov = rng.normal(0.0, sigma, size=(N, N_BASIS)) @ basis
    warm = rng.normal(0.0, sigma, size=(burn_in, N_BASIS)) @ basis
    psi_t = far_kernel(grid, kernel_scale).T

    eps = np.empty_like(innov)
    prev_eps = np.zeros(D)
    prev_e = np.zeros(D)
    for e in warm:
        prev_eps = (prev_eps if recursion == "ar" else prev_e) @ psi_t + e
        prev_e = e
    for n, e in enumerate(innov):
        prev_eps = (prev_eps if recursion == "ar" else prev_e) @ psi_t + e
        prev_e = e
        eps[n] = prev_eps
    return FtsSample(grid, eps)


# -- mean-change scenarios ----------------------------------------------------

@dataclass
class ChangeSpec:
    """Piecewise-constant mean: ``baseline`` up to ``c_1``, then each
    ``mean_after`` from ``c_k + 1`` on."""

    N: int
    baseline: np.ndarray
    changes: list[tuple[int, np.ndarray]] = field(default_factory=list)

    def __post_init__(self):
        locs = [c for c, _ in self.changes]
        if any(b <= a for a, b in zip(locs, locs[1:])):
            raise ParameterError(f"change locations {locs} are not strictly increasing")
        if locs and not (0 < locs[0] and locs[-1] < self.N):
            raise ParameterError(f"change locations {locs} must lie strictly inside 1..{self.N}")

    @property
    def locations(self) -> list[int]:
        return [c for c, _ in self.changes]

    @property
    def K(self) -> int:
        return len(self.changes)

    def means(self) -> np.ndarray:
        """``N x D`` matrix whose row ``n - 1`` is the mean at time ``n``."""
        out = np.tile(self.baseline, (self.N, 1))
        for c, mu in self.changes:
            out[c:] = mu
        return out

    def scaled(self, factor: float) -> "ChangeSpec":
        """Same locations with every mean multiplied by ``factor``."""
        return ChangeSpec(self.N, self.baseline * factor, [(c, mu * factor) for c, mu in self.changes])


_MEAN_SEGMENTS = {
    "H0": ([], []),
    "HA1": ([0.5], [lambda t: 0.05 + 0 * t]),
    "HA2": ([0.3, 0.7], [lambda t: 0.05 + 0 * t, lambda t: 0.1 * np.sin(2 * np.pi * t)]),
    "HA3": (
        [0.3, 0.6, 0.8],
        [lambda t: 0.05 + 0 * t, lambda t: 0 * t, lambda t: 0.1 * np.sin(2 * np.pi * t)],
    ),
    "HA4": (
        [0.2, 0.4, 0.6, 0.7, 0.9],
        [
            lambda t: 0.05 + 0 * t,
            lambda t: 0.1 * np.sin(2 * np.pi * t),
            lambda t: 0.1 * np.cos(2 * np.pi * t),
            lambda t: -0.1 + 0.2 * t,
            lambda t: 0.8 * (t - 0.5) ** 2 - 0.1,
        ],
    ),
}
MEAN_SCENARIOS = tuple(_MEAN_SEGMENTS)


def change_locations(N: int, fractions) -> list[int]:
    """``floor(f * N)`` for each fraction, immune to ``0.7 * 300 = 209.999...``."""
    return [math.floor(round(f * N, 9)) for f in fractions]


def mean_scenario(name: str, N: int, D: int = DEFAULT_D) -> ChangeSpec:
    """Mean structure of one of the curve scenarios H0, HA1 ... HA4."""
    key = name.upper()
    if key not in _MEAN_SEGMENTS:
        raise ParameterError(f"unknown scenario {name!r}; choose from {MEAN_SCENARIOS}")
    fractions, means = _MEAN_SEGMENTS[key]
    locs = change_locations(N, fractions)
    if len(set(locs)) != len(locs) or (locs and (locs[0] < 1 or locs[-1] >= N)):
        raise ParameterError(f"N={N} is too small: change locations collapse to {locs}")
    tau = Grid.uniform(D).points
    return ChangeSpec(N, np.zeros(D), [(c, mu(tau)) for c, mu in zip(locs, means)])


def curve_sample(spec: ChangeSpec, errors: FtsSample) -> FtsSample:
    """Add the scenario means to an error sample."""
    return FtsSample(errors.grid, errors.data + spec.means())


# -- distributional panels ------------------------------------------------------

@dataclass(frozen=True)
class Gaussian:
    mu: float = 0.0
    sigma: float = 1.0

    def sample(self, rng, size):
        return rng.normal(self.mu, self.sigma, size=size)


@dataclass(frozen=True)
class StudentT:
    df: float

    def sample(self, rng, size):
        return rng.standard_t(self.df, size=size)


@dataclass(frozen=True)
class SkewT:
    """Azzalini skew-t: a skew-normal draw divided by ``sqrt(chi2_df / df)``."""

    slant: float
    df: float

    def sample(self, rng, size):
        delta = self.slant / math.sqrt(1 + self.slant**2)
        u0 = np.abs(rng.standard_normal(size))
        u1 = rng.standard_normal(size)
        skew_normal = delta * u0 + math.sqrt(1 - delta**2) * u1
        return skew_normal / np.sqrt(rng.chisquare(self.df, size) / self.df)


@dataclass
class PanelSpec:
    """``M`` draws per time point from ``first`` until ``c_1``, then from
    each listed distribution after its change location."""

    N: int
    M: int
    first: object
    changes: list[tuple[int, object]] = field(default_factory=list)

    @property
    def locations(self) -> list[int]:
        return [c for c, _ in self.changes]

    @property
    def K(self) -> int:
        return len(self.changes)

    def distribution_at(self, n: int):
        """Distribution at time ``n`` (1-indexed)."""
        current = self.first
        for c, dist in self.changes:
            if n > c:
                current = dist
        return current

    def segments(self) -> list[object]:
        return [self.first] + [d for _, d in self.changes]


PANEL_SCENARIOS = ("H0star", "HA1star", "HA2star")
DEFAULT_M = 100


def panel_scenario(name: str, N: int, M: int = DEFAULT_M) -> PanelSpec:
    """One of the distributional panel designs H0*, HA1*, HA2*."""
    if M < 2:
        raise ParameterError(f"panel needs M >= 2 draws per time point, got {M}")
    key = name.lower().replace("*", "star")
    if key == "h0star":
        return PanelSpec(N, M, Gaussian(0.0, 1.0))
    c1, c2 = change_locations(N, [0.3, 0.7])
    if key == "ha1star":
        return PanelSpec(N, M, Gaussian(0.0, 1.0), [(c1, Gaussian(0.05, 1.0)), (c2, Gaussian(0.05, 1.05))])
    if key == "ha2star":
        return PanelSpec(N, M, Gaussian(0.0, 1.0), [(c1, StudentT(10)), (c2, SkewT(0.05, 10))])
    raise ParameterError(f"unknown panel scenario {name!r}; choose from {PANEL_SCENARIOS}")


def flattop_weight(x, A: float = 2.0):
    """Density-like weight: 1 on ``[-A, A]``, ``exp(-(|x| - A))`` outside."""
    x = np.asarray(x, dtype=float)
    return np.exp(-np.clip(np.abs(x) - A, 0.0, None))


def panel_grid(D: int = 101, lo: float = -6.0, hi: float = 6.0, A: float = 2.0) -> Grid:
    """Equispaced real-line grid with flattop-weighted quadrature."""
    points = np.linspace(lo, hi, D)
    step = (hi - lo) / (D - 1)
    return Grid(points, flattop_weight(points, A) * step)


def ecdf_on_grid(values: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Row-wise empirical cdfs of an ``N x M`` array at ``points``."""
    values = np.sort(np.asarray(values, dtype=float), axis=1)
    M = values.shape[1]
    return np.stack([np.searchsorted(row, points, side="right") for row in values]) / M


def simulate_panel(spec: PanelSpec, seed=None) -> np.ndarray:
    """Raw ``N x M`` panel of draws."""
    rng = np.random.default_rng(seed)
    Y = np.empty((spec.N, spec.M))
    for n in range(1, spec.N + 1):
        Y[n - 1] = spec.distribution_at(n).sample(rng, spec.M)
    return Y


def panel_to_curves(spec: PanelSpec, grid: Grid | None = None, seed=None):
    """Simulate a panel and embed it as scaled empirical cdfs.

    Returns ``(sample, cdfs)`` where ``sample.data = sqrt(M) * cdfs`` and
    ``cdfs[n - 1]`` is the empirical cdf at time ``n`` on ``grid``.
    """
    grid = panel_grid() if grid is None else grid
    cdfs = ecdf_on_grid(simulate_panel(spec, seed), grid.points)
    return FtsSample(grid, math.sqrt(spec.M) * cdfs), cdfs


def panel_curves_from_values(values: np.ndarray, grid: Grid | None = None):
    """Embed an observed ``N x M`` panel, as :func:`panel_to_curves` does."""
    grid = panel_grid() if grid is None else grid
    values = np.asarray(values, dtype=float)
    cdfs = ecdf_on_grid(values, grid.points)
    return FtsSample(grid, math.sqrt(values.shape[1]) * cdfs), cdfs

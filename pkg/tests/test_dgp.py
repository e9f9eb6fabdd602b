import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import interpolate, stats

from holderscan import dgp
from holderscan.errors import ParameterError
from holderscan.fts import Grid


def test_basis_partition_and_support():
    B = dgp.bspline_basis(51)
    assert B.shape == (13, 51)
    np.testing.assert_allclose(B.sum(axis=0), 1.0, atol=1e-10)
    assert np.all(B >= 0)
    knots = np.unique(dgp.spline_knots())
    width = knots[1] - knots[0]
    x = Grid.uniform(51).points
    for row in B:
        on = x[row > 0]
        assert on.max() - on.min() <= 4 * width + 1e-12
    with pytest.raises(ParameterError):
        dgp.bspline_basis(12)


def test_basis_matches_scipy():
    t = dgp.spline_knots()
    x = np.linspace(0, 1, 201)
    ours = dgp.cox_de_boor(x, t)
    for m in range(13):
        ref = interpolate.BSpline(t, np.eye(13)[m], 3, extrapolate=False)(x[:-1])
        np.testing.assert_allclose(ours[m, :-1], ref, atol=1e-12)
    np.testing.assert_allclose(ours[:, -1], np.eye(13)[-1], atol=1e-12)


def test_iid_errors_deterministic_and_centered():
    a, b = dgp.iid_errors(30, seed=4), dgp.iid_errors(30, seed=4)
    np.testing.assert_array_equal(a.data, b.data)
    big = dgp.iid_errors(10000, seed=5)
    assert np.abs(big.data.mean(axis=0)).max() < 4 * 0.1 * math.sqrt(13) / math.sqrt(10000)
    expected = 0.01 * (dgp.bspline_basis(51) ** 2).sum(axis=0)
    np.testing.assert_allclose(big.data.var(axis=0), expected, rtol=0.10)
    with pytest.raises(ParameterError):
        dgp.iid_errors(5, sigma=0)


def test_far_reduces_to_iid_without_kernel():
    a = dgp.far_errors(40, seed=8, kernel_scale=0.0)
    b = dgp.iid_errors(40, seed=8)
    np.testing.assert_array_equal(a.data, b.data)
    np.testing.assert_array_equal(dgp.far_errors(40, seed=8, kernel_scale=0.0, recursion="ma").data, b.data)


def test_far_kernel_contraction():
    grid = Grid.uniform(51)
    K = dgp.far_kernel(grid)
    # operator norm in the weighted L2 geometry: sqrt(W) K sqrt(W)^{-1}
    r = np.sqrt(grid.quad_weights)
    norm = np.linalg.norm(r[:, None] * K / r[None, :], 2)
    assert norm < 1
    assert norm == pytest.approx(1 / 12, rel=0.05)


@pytest.mark.parametrize("recursion", ["ar", "ma"])
def test_far_lag_one_autocovariance(recursion):
    eps = dgp.far_errors(5000, seed=9, recursion=recursion)
    proj = eps.data @ (eps.grid.points * eps.grid.quad_weights)
    x = proj - proj.mean()
    rho = np.dot(x[1:], x[:-1]) / np.dot(x, x)
    assert rho > 4 / math.sqrt(5000)
    grand = dgp.far_errors(20000, seed=10, recursion=recursion).data.mean(axis=0)
    assert np.abs(grand).max() < 4 * 0.1 * math.sqrt(13) * 1.2 / math.sqrt(20000)
    with pytest.raises(ParameterError):
        dgp.far_errors(10, recursion="arma")


def test_mean_scenarios():
    h0 = dgp.mean_scenario("H0", 100)
    assert h0.K == 0 and not h0.means().any()
    ha1 = dgp.mean_scenario("HA1", 300)
    assert ha1.locations == [150]
    np.testing.assert_allclose(ha1.changes[0][1], 0.05)
    m = ha1.means()
    assert not m[149].any() and np.allclose(m[150], 0.05)
    assert dgp.mean_scenario("HA4", 300).locations == [60, 120, 180, 210, 270]
    assert dgp.mean_scenario("HA2", 300).locations == [90, 210]
    assert dgp.mean_scenario("HA3", 100).locations == [30, 60, 80]
    tau = Grid.uniform(51).points
    np.testing.assert_allclose(dgp.mean_scenario("HA4", 300).changes[4][1], 0.8 * (tau - 0.5) ** 2 - 0.1)
    with pytest.raises(ParameterError):
        dgp.mean_scenario("HA4", 4)
    with pytest.raises(ParameterError):
        dgp.mean_scenario("HA9", 100)


def test_change_locations_exact_floor():
    for N in (100, 200, 300, 400, 1000):
        for f in (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9):
            assert dgp.change_locations(N, [f]) == [math.floor(Fraction(str(f)) * N)]


def test_panel_scenarios():
    assert dgp.panel_scenario("H0*", 50).segments() == [dgp.Gaussian(0, 1)]
    ha1 = dgp.panel_scenario("HA1*", 200)
    assert ha1.locations == [60, 140]
    assert ha1.distribution_at(60) == dgp.Gaussian(0, 1)
    assert ha1.distribution_at(61) == dgp.Gaussian(0.05, 1)
    assert ha1.distribution_at(141) == dgp.Gaussian(0.05, 1.05)
    ha2 = dgp.panel_scenario("HA2star", 100)
    assert ha2.segments() == [dgp.Gaussian(0, 1), dgp.StudentT(10), dgp.SkewT(0.05, 10)]
    with pytest.raises(ParameterError):
        dgp.panel_scenario("H0*", 10, M=1)


def test_skew_t_with_zero_slant_is_student_t():
    rng = np.random.default_rng(12)
    a = dgp.SkewT(0.0, 10).sample(rng, 100_000)
    b = dgp.StudentT(10).sample(rng, 100_000)
    assert stats.ks_2samp(a, b).statistic < 0.01


def test_skew_t_matches_azzalini_density():
    rng = np.random.default_rng(13)
    draws = dgp.SkewT(3.0, 5).sample(rng, 50_000)
    # Azzalini skew-t density 2 t(x; df) T(alpha x sqrt((df+1)/(x^2+df)); df+1), integrated numerically
    grid = np.linspace(-15, 15, 30001)
    dens = 2 * stats.t.pdf(grid, 5) * stats.t.cdf(3.0 * grid * np.sqrt(6 / (grid**2 + 5)), 6)
    F = np.cumsum(dens) * (grid[1] - grid[0])
    ecdf = np.searchsorted(np.sort(draws), grid, side="right") / draws.size
    assert np.abs(ecdf - F).max() < 0.01


def test_flattop_and_grid():
    np.testing.assert_allclose(dgp.flattop_weight([-2.0, 0.0, 2.0, 3.0]), [1, 1, 1, math.exp(-1)])
    g = dgp.panel_grid()
    assert g.D == 101 and g.points[0] == -6 and g.points[-1] == 6
    np.testing.assert_allclose(g.quad_weights, dgp.flattop_weight(g.points) * 0.12)


def test_panel_curves():
    spec = dgp.panel_scenario("HA1*", 40, M=30)
    sample, cdfs = dgp.panel_to_curves(spec, seed=3)
    assert cdfs.shape == (40, 101)
    assert np.all(np.diff(cdfs, axis=1) >= 0) and cdfs.min() >= 0 and cdfs.max() <= 1
    np.testing.assert_allclose(sample.data, math.sqrt(30) * cdfs)
    again, _ = dgp.panel_to_curves(spec, seed=3)
    np.testing.assert_array_equal(sample.data, again.data)


def test_glivenko_cantelli():
    spec = dgp.PanelSpec(1, 100_000, dgp.Gaussian(0, 1))
    _, cdfs = dgp.panel_to_curves(spec, seed=4)
    g = dgp.panel_grid()
    assert np.abs(cdfs[0] - stats.norm.cdf(g.points)).max() < 0.01

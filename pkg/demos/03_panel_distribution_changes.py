"""Detect changes in a distribution, not just a mean.

At each time point we observe M draws.  Their empirical cdf, scaled by
sqrt(M), is a curve on the real line; a change of distribution is a mean
change of these curves.  The covariance at time n is the Brownian bridge
type kernel F_n(min(s, t)) - F_n(s) F_n(t), so every time point gets its
own covariance root in the bootstrap.
"""

import holderscan as hs
from holderscan import dgp

N = 200
grid = dgp.panel_grid()  # 101 points on [-6, 6], flattop weights
idx = hs.build_pyramid(N, 1.1)
weight = hs.WeightFunction("poly", 0.25)

# A mean shift of 0.05 standard deviations is subtle: it takes many draws
# per time point before the cdf curves separate from their noise.
for M in (100, 1000):
    spec = dgp.panel_scenario("HA1*", N, M)
    sample, cdfs = dgp.panel_to_curves(spec, grid, seed=5)
    found, boot = hs.detect(sample, idx, weight, hs.CovSpec("ecdf"), B=300, alpha=0.05, seed=2, cdfs=cdfs)
    print(f"M={M:5d}: changes at {spec.locations}, q = {boot.q:.3f}, intervals {[d.interval for d in found]}")

# Changes in shape are harder: Gaussian -> t(10) -> slightly skewed t(10).
spec2 = dgp.panel_scenario("HA2*", N, 1000)
sample2, cdfs2 = dgp.panel_to_curves(spec2, grid, seed=6)
found2, boot2 = hs.detect(sample2, idx, weight, hs.CovSpec("ecdf"), B=300, alpha=0.05, seed=2, cdfs=cdfs2)
print(f"family changes (M=1000): q = {boot2.q:.3f}, {len(found2)} detection(s): {[d.interval for d in found2]}")

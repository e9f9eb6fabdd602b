"""A small size / power / localization table.

Each cell repeats simulate -> estimate -> bootstrap -> MultiScan R times.
Size is the rejection rate under no change; for the change scenarios we
report power and the weak and strong localization rates.  R and B are kept
small so the whole table runs in a few minutes; raise them for tighter
estimates.
"""

import holderscan as hs

R, B = 50, 200
detector = hs.DetectorConfig(weight=hs.WeightFunction("poly", 0.25), B=B)

print(f"{'dgp':<5} {'scenario':<8} {'N':>4}  {'size/power':>10} {'weak':>6} {'strong':>6}")
for kind in ("iid", "far"):
    for scenario in ("H0", "HA1", "HA3"):
        for N in (100, 200):
            res = hs.run_monte_carlo(hs.DgpConfig(kind=kind, scenario=scenario, N=N), detector, R, seed=1)
            loc = "" if res.K == 0 else f"{res.weak_rate:6.2f} {res.strong_rate:6.2f}"
            print(f"{kind:<5} {scenario:<8} {N:>4}  {res.rejection_rate:10.2f} {loc}")

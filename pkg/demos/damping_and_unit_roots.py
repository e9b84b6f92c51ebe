"""
Damping persistent predictors
=============================

Valuation ratios behave almost like random walks. Passing them through
exp(-x^2/2) bounds their contribution; this script shows what that does.
"""

import numpy as np

from dampreg import adf_test, appendix_moment_check, damping_transform, rolling_first_diff_std
from dampreg.stationarity import simulate_random_walk

# a random walk and white noise, both seeded
walk = simulate_random_walk(500, sigma=1.0, seed=1)
noise = np.random.default_rng(0).standard_normal(500)

# the unit-root test tells them apart
for name, series in (("random walk", walk), ("white noise", noise)):
    res = adf_test(series, "constant")
    print(f"{name:12s} tau={res.t_stat:8.3f}  p={res.p_value:.4f}  reject@1%={res.reject_at[0.01]}")

# mu lives in (0, 1], nu is bounded by exp(-1/2)
d = damping_transform(walk)
print(f"\nmu range  [{d.mu.min():.3g}, {d.mu.max():.3g}]")
print(f"|nu| max  {np.abs(d.nu).max():.4f}  (bound {np.exp(-0.5):.4f})")

# the damped walk changes less and less from step to step
spread = rolling_first_diff_std(d.nu)
for t in (10, 100, 250, 498):
    print(f"std of first differences up to t={t:3d}: {spread[t]:.4f}")

# for a unit-step walk, E[exp(-X_t^2)] = 1/sqrt(2t+1) and the damped term fades
rep = appendix_moment_check([1, 5, 10, 50], paths=20_000, seed=0)
print()
for row in rep.rows:
    print(f"t={row.t:3d}  simulated={row.mc_estimate:.5f}  theory={row.theory:.5f}  "
          f"z={row.z_score:+.2f}")

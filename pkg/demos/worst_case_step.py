"""
How much can one Newton step go wrong?
======================================

A damped Newton step from a point with decrement ``a`` lands somewhere with
a new decrement. This script compares the worst case over all
self-concordant functions in one dimension with the worst case in two or
more dimensions.
"""

import numpy as np

from scnewton import Regime, StepQuery, bellman_1d, full_step_bound_1d, solve_bvp, sweep_bounds

# %%
# In one dimension the answer has a closed form. The full step from
# decrement a can end anywhere up to 4 - a^2 - 4 sqrt(1 - a^2).

for a in (0.1, 0.3, 0.5):
    print(f"a = {a:.1f}   1D worst case after a full step: {full_step_bound_1d(a):.8f}")

# %%
# With more room the adversary does better. The full-dimensional bound
# comes from a boundary value problem, solved here by shooting.

res = solve_bvp(StepQuery(0.5, 1.0), tol=1e-11)
print(res.regime, res.lambda_out)
print("endpoint y(0) =", res.endpoint)

# %%
# Short steps stay one-dimensional: the worst trajectory never leaves the
# line, and the bound is a - a*gamma + a^2*gamma.

small = solve_bvp(StepQuery(0.5, 0.3))
print(small.regime, small.lambda_out, 0.5 - 0.15 + 0.075)

# %%
# Sweeping a with continuation is cheap, since every solve seeds the next.

grid = np.round(np.arange(0.05, 0.951, 0.05), 2)
for a, r in zip(grid, sweep_bounds(grid, gamma=1.0, tol=1e-11)):
    one = bellman_1d(-a, -a)
    tag = "" if r.regime is Regime.FullDim else "  (1D)"
    print(f"{a:4.2f}  full-dim {r.lambda_out:12.8f}   1D {one:12.8f}{tag}")

# %%
# Past a = 0.76 the bound exceeds 1, so a single full step no longer
# guarantees that the next point is even inside the Newton region.

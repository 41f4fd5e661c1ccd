"""
Picking the damping coefficient
===============================

For each starting decrement there is one damping that minimises the worst
case. It is found without any boundary value problem, by integrating two
planar ODEs. Short polynomial formulas approximate both the damping and the
resulting bound.
"""

import numpy as np

from scnewton import StepQuery, optimal_step, solve_bvp
from scnewton.approximations import FormulaId, approx_opt_bound, approx_opt_gamma, audit

# %%
res = optimal_step(0.4)
print("gamma* =", res.gamma_star)
print("bound  =", res.lambda_out)
print("crossing with the circle:", res.y_star)

# %%
# The bound is flat around the optimum, so a slightly wrong damping costs
# only a second-order amount. Scan gamma around gamma* at a = 0.4:

for g in (0.93, 0.95, res.gamma_star, 0.97, 0.99, 1.0):
    print(f"gamma {g:.4f} -> {solve_bvp(StepQuery(0.4, g), tol=1e-10).lambda_out:.8f}")

# %%
# The polynomial approximations next to the exact values:

print("   a   gamma*    approx    bound     approx")
for a in np.round(np.arange(0.1, 0.95, 0.1), 2):
    r = optimal_step(float(a))
    print(f"{a:4.1f}  {r.gamma_star:.5f}  {approx_opt_gamma(a):.5f}  "
          f"{r.lambda_out:.5f}  {approx_opt_bound(a):.5f}")

# %%
# An audit measures the worst error on a fine grid (this takes a few seconds).

rep = audit(FormulaId.OptGamma)
print(rep.to_dict())

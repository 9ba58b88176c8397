"""Solve the designer/adversary game over triangle distributions and look around."""
import numpy as np

from piopt.certify import apx_markup_opt, find_crossing, solve_equilibrium, triangle_markup
from piopt.markup import StochasticMarkupMechanism, stochastic_markup_revenue
from piopt.revenue_curves import TriangleDist

sol = solve_equilibrium()
print(f"qbar* = {sol.qbar:.10f}")
print(f"r*    = {sol.r:.10f}")
print(f"alpha = {sol.alpha:.10f}")
print(f"beta  = {sol.beta:.10f}")

# At the worst triangle the second-price auction and the best markup both earn 1
print("SPA revenue:", 1.0, " markup revenue:", float(triangle_markup(sol.r, sol.qbar)))

# Approximation ratio of the SPA against the best single markup
for q in (0.0, 0.05, sol.qbar, 0.2, 0.5):
    ratio, r, _, _ = apx_markup_opt(q, r_grid_eps=1e-3)
    print(f"q = {q:.4f}  APX_1 = {2 - q:.4f}  APX* = {ratio:.4f} at r = {r:.3f}")

# The mixture's ratio is flat around qbar*
mech = StochasticMarkupMechanism.mixture(sol.alpha, sol.r)
for q in np.linspace(0.08, 0.11, 7):
    print(f"q = {q:.4f}  OPT / M = {(2 - q) / stochastic_markup_revenue(mech, TriangleDist(q)):.8f}")

# A finer certified bracket around the crossing
cross = find_crossing(1e-8)
print(f"crossing in [{cross.lo:.8f}, {cross.hi:.8f}]")
print("left certified minimum:", cross.left.value, " right certified maximum:", cross.right.value)

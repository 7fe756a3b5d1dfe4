"""
Linear programs with certified verdicts
=======================================

Every envelope computation in this package bottoms out in a linear
program, and every verdict the solver returns is checkable after the
fact: optimal points come with dual prices, infeasible programs with a
Farkas witness, unbounded ones with an improving ray.
"""

import numpy as np

from balayage.simplex import LinearProgram, solve, verify_certificates

# A small production-style program: maximize 3x + 2y subject to
# resource rows and nonnegativity.
p = LinearProgram(
    c=[3.0, 2.0],
    sense="max",
    A=[[1.0, 1.0], [2.0, 1.0]],
    relations=("<=", "<="),
    b=[4.0, 6.0],
)
out = solve(p)
print("status:", out.status)
print("value :", out.value)
print("point :", out.x)
print("prices:", out.dual)

# The optimality claim is an accounting identity between the point,
# the prices, and the reduced costs; verify_certificates recomputes it
# from the original data.
ok, residuals = verify_certificates(p, out)
print("verified:", ok, "residuals:", {k: f"{v:.2e}"
                                      for k, v in residuals.items()})

# Contradictory constraints produce a Farkas certificate: a weighting
# of the rows that proves no point can satisfy all of them.
bad = LinearProgram(
    c=[1.0],
    sense="min",
    A=[[1.0], [-1.0]],
    relations=("<=", "<="),
    b=[1.0, -3.0],
)
out_bad = solve(bad)
print("status:", out_bad.status, "certificate kind:",
      out_bad.certificate["kind"])
ok, _ = verify_certificates(bad, out_bad)
print("infeasibility verified:", ok)

# Unbounded improvement is certified by a feasible ray with positive
# rate.
free = LinearProgram(c=[1.0, 0.0], sense="max",
                     A=[[0.0, 1.0]], relations=("<=",), b=[1.0])
out_free = solve(free)
ray = out_free.certificate
print("status:", out_free.status, "ray:", np.round(ray["direction"], 6),
      "rate:", ray["rate"])

"""
Grid potential theory: sweeping measures out of a subdomain
===========================================================

On a lattice rectangle the mean-value stencil plays the role of the
Laplacian.  Sweeping (balayage) replaces the mass a measure carries
inside a subdomain by boundary mass, preserving totals, leaving
integrals of harmonic functions unchanged, and never decreasing
integrals of subharmonic ones.
"""

import numpy as np

from balayage.gridpotential import (DiscreteMeasure, GridDomain,
                                    GridFunction, SubDomain, balayage,
                                    defect_field, harmonic_extension,
                                    is_subharmonic, solve_dirichlet)

d = GridDomain.rectangle(11, 11, spacing=0.5, origin=(-2.5, -2.5))

# A paraboloid is subharmonic: its stencil defect (neighbor mean minus
# center) is positive everywhere.
para = GridFunction.from_callable(d, lambda x, y: x * x + y * y)
print("paraboloid subharmonic:", is_subharmonic(para))
print("max stencil defect    :", f"{defect_field(para).max():.4f}")

# Harmonic interpolation of boundary data: xy is harmonic, and the
# solver reproduces it from the boundary alone.
bilinear = GridFunction.from_callable(d, lambda x, y: x * y)
solved = solve_dirichlet(d, bilinear)
err = np.abs(solved.values - bilinear.values).max()
print("xy recovered from its boundary values within", f"{err:.2e}")

# Sweep a unit point mass at the center out of an inner square.
sub = SubDomain.from_rect(d, 3, 3, 7, 7)
mu = DiscreteMeasure.delta(d, d.node_id(5, 5))
swept = balayage(mu, d, sub)
print("mass before/after sweeping:", mu.mass(), "/", round(swept.mass(), 12))
print("atoms after sweeping      :", swept.support.size,
      "all on the inner boundary")

# The ordering: harmonic integrals match, subharmonic ones only grow.
for name, g in (("harmonic xy", bilinear), ("subharmonic |z|^2", para)):
    before = mu.integrate(g)
    after = swept.integrate(g)
    print(f"{name:18s} integral {before:+.6f} -> {after:+.6f}")

# Sweeping and harmonic extension are two sides of one pairing:
# integrating the extension against the original measure equals
# integrating the original function against the swept measure.
F = GridFunction.from_callable(d, lambda x, y: np.cos(x) + 0.3 * y)
lhs = mu.integrate(harmonic_extension(F, d, sub))
rhs = swept.integrate(F)
print("pairing identity residual :", f"{abs(lhs - rhs):.2e}")

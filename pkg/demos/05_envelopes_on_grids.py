"""
Grid envelopes and their dual measures
======================================

The largest subharmonic function below a ceiling F, paired against a
measure nu, has a dual description: the cheapest sweeping of nu
relative to F.  The two optimal values coincide, and the optimal
sweeping is itself a certificate anyone can audit.
"""

import numpy as np

from balayage.duality import (ConeSpec, jensen_verify, minorant_exists,
                              supremal_value, sweep_dual_value)
from balayage.gridpotential import (DiscreteMeasure, GridDomain,
                                    GridFunction)

d = GridDomain.rectangle(9, 9, spacing=0.5, origin=(-2.0, -2.0))
H = ConeSpec.subharmonic_cone(d)

# Ceiling: a tent that subharmonic functions cannot follow into the
# peak; functional: a point evaluation at the center.
F = GridFunction.from_callable(d, lambda x, y: 1.0 - abs(x) - abs(y))
a = d.node_id(4, 4)
nu = DiscreteMeasure.delta(d, a)

primal = supremal_value(d, H, nu, F)
sweep = sweep_dual_value(d, H, nu, F)
print("best subharmonic minorant at the center:", f"{primal['value']:.8f}")
print("cheapest sweeping of the point mass    :", f"{sweep['value']:.8f}")
print("gap:", f"{abs(primal['value'] - sweep['value']):.2e}")

# The dual measure dominates the point evaluation on every subharmonic
# function at once; jensen_verify checks that in one shot.
cert = sweep["certificate"]
print("dual measure mass:", f"{cert.mu.mass():.6f}",
      "on", cert.mu.support.size, "nodes")
print("dominates all subharmonic functions:",
      jensen_verify(d, H, nu, cert.mu, cert.c))

# The certificate's defining equations can be re-substituted directly.
res = cert.residuals(H, nu)
print("certificate residuals:", {k: f"{v:.2e}" for k, v in res.items()})

# Existence questions have certified answers too: a ceiling with a
# bottomless node admits no minorant, and the refusal names a witness.
Fbad = GridFunction(d, F.values.copy())
Fbad.values[d.node_id(2, 2)] = -np.inf
verdict = minorant_exists(d, H, Fbad)
print("minorant under a -inf ceiling:", verdict["exists"],
      "| witness:", verdict["farkas"]["kind"])

"""Order-theoretic envelopes of discrete subharmonic functions.

Library layout:

* `order` -- extended-real conventions, envelopes of finite samples
* `projlattice` -- projective chains of finite levels, supremal
  functions commuting with projections
* `simplex` -- dense two-phase LP solver with certificates
* `gridpotential` -- grid domains, Dirichlet solves, harmonic measure,
  balayage, harmonic conjugates
* `smoothing` -- radius fields, mean-value kernels, variable-radius
  mollification of functions and measures
* `duality` -- supremal envelope values over cones of grid functions
  and their sweeping-measure duals
* `holo` -- divisor potentials, minorant criteria for weighted
  holomorphic classes, weight transforms, zero-set construction
* `cli` -- file-driven command line front end
"""

from .errors import Error

__all__ = ["Error"]
__version__ = "0.1.0"

"""
Extended reals and the two faces of a sample envelope
=====================================================

A function known only through finitely many samples has a greatest
sublinear minorant and a greatest convex minorant.  Each can be
computed two ways: as the cheapest mixture of the samples, or as the
upper envelope of the linear (resp. affine) functions that fit below
them.  The two answers always coincide.
"""

import numpy as np

from balayage.order import (SampledFunction, ext_add, ext_dot, ext_sup,
                            lower_envelope, minorant_formula)

# Arithmetic first: the library works over the extended reals, where
# +inf and -inf are legal values with fixed conventions.
print("(-inf) + 3      =", ext_add(float("-inf"), 3.0))
print("sup of no terms =", ext_sup([]))
print("0-weighted inf  =", ext_dot([0.0, 1.0], [float("inf"), 2.0]))

# Sample the parabola x^2 at four points.  The convex minorant built
# from the samples is the piecewise-linear lower hull, so strictly
# between sample points it dips below the parabola itself.
f = SampledFunction.from_pairs([
    (-1.0, 1.0), (0.0, 0.0), (1.0, 1.0), (2.0, 4.0),
])

for x in (0.5, 1.5):
    mix = minorant_formula(f, [x], mode="convex")
    env = lower_envelope(f, [x], family="affine")
    print(f"convex minorant at {x}: mixture {mix:.6f}, envelope {env:.6f}")

# The conic variants force the minorant through the origin.  At a
# point where no nonnegative mixture of samples exists the mixture
# value is +inf; where no linear function fits below the data the
# envelope is -inf.  On this data both routes agree everywhere.
g = SampledFunction.from_pairs([(1.0, 2.0), (-1.0, 3.0)])
for x in (2.0, -2.0, 0.0):
    mix = minorant_formula(g, [x], mode="conic")
    env = lower_envelope(g, [x], family="linear")
    assert abs(mix - env) < 1e-9
    print(f"sublinear minorant at {x:+.0f}: {env:.6f}")

# In higher dimension nothing changes except the sample shape.
h = SampledFunction(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0],
                              [1.0, 1.0]]),
                    np.array([0.0, 1.0, 1.0, 1.0]))
center = [0.5, 0.5]
print("planar convex minorant at the face center:",
      lower_envelope(h, center, family="affine"))

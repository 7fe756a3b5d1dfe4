"""
Coordinate chains and supremal functions that respect projection
================================================================

Points known only up to depth N live in a chain of spaces linked by
coordinate-dropping projections.  A finite family H with a positive
functional q on the first coordinate induces a supremal function
spf(x) = sup {q(h) : h in H, h <= x}.  Evaluating spf on a level-n
point by extending it upward gives exactly the supremal function of
the projected family: no information is lost by truncation.
"""

from balayage.projlattice import (ChainElement, FiniteSupremalSpec,
                                  stabilized_limsup, sup_projection,
                                  supremal_value, verify_supremal_projection)

# Three stored elements of depth 3, scored by twice their first
# coordinate.
spec = FiniteSupremalSpec(
    elements=((1.0, 2.0, 0.5), (2.0, 1.0, 1.5), (0.5, 3.0, 1.0)),
    q1_weights=(2.0,),
    depth=3,
)

# Full-depth evaluation: which elements fit under the point decides
# the score.
x = (2.0, 2.5, 1.2)
print("spf at", x, "=", supremal_value(spec, x))

# Level-1 evaluation: only the first coordinate is known.  The
# supremum over all extensions is reached by extending with any bound
# that dominates the stored tails.
print("projected spf at (1.5,):", sup_projection(spec, 1, (1.5,)))

# The identity holds at every point of a scan grid, exactly.
grid = [(v / 4.0,) for v in range(-8, 12)]
res = verify_supremal_projection(spec, 1, grid)
print("scan over", res["points_checked"], "points, discrepancy",
      res["max_discrepancy"])

# Stabilizing sequences: once the first n entries of the tail agree
# with the target's level-n projection for every n, the coordinatewise
# limsup recovers the target.
target = ChainElement((1.0, 2.0, 3.0))
seq = [(1.0, 9.0, 9.0), (1.0, 2.0, 9.0), (1.0, 2.0, 3.0),
       (1.0, 2.0, 3.0)]
flag, lim = stabilized_limsup(seq, target)
print("stabilizes:", flag, "limsup:", lim.coords)

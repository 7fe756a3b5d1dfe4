"""Finite truncations of coordinate-dropping chains of vector lattices.

The model chain is R^1 <- R^2 <- ... <- R^N, each arrow dropping the
last coordinate.  A ChainElement stores the depth-N truncation of a
point of the limit; projecting to level n keeps the first n
coordinates, so project(x, n) = drop_last(project(x, n + 1)) holds by
construction.

A FiniteSupremalSpec carries a finite set H of elements together with a
positive linear functional q on level 1 (one-dimensional, hence a
single positive weight).  The induced supremal function is

    spf(x) = sup { q(pr_1 h) : h in H, h <= x componentwise },

with sup over the empty set equal to -inf.  Because spf is increasing,
its supremum over all extensions of a level-n point is attained by
extending with any bound that dominates every stored coordinate; that
is how `sup_projection` evaluates it, and `verify_supremal_projection`
checks, exactly in floating point, that the result coincides with the
supremal function of the projected data (same candidate set, same
maxima, discrepancy identically zero).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, LevelOutOfRange
from .order import NEG_INF, ExtReal


@dataclass(frozen=True)
class ChainElement:
    """Depth-N truncation of a point in the coordinate-dropping chain."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords",
                           tuple(float(v) for v in self.coords))
        if not self.coords:
            raise DimensionMismatch("chain element needs depth >= 1")

    @property
    def depth(self) -> int:
        return len(self.coords)

    def project(self, n: int) -> tuple:
        """First n coordinates (level-n projection)."""
        if not 1 <= n <= self.depth:
            raise LevelOutOfRange(f"level {n} outside 1..{self.depth}")
        return self.coords[:n]

    def dominated_by(self, other) -> bool:
        if len(other) != self.depth:
            raise DimensionMismatch("depth mismatch in comparison")
        return all(a <= b for a, b in zip(self.coords, other))


@dataclass(frozen=True)
class FiniteSupremalSpec:
    """Finite H plus a positive level-1 functional."""

    elements: tuple
    q1_weights: tuple
    depth: int

    def __post_init__(self):
        elems = tuple(e if isinstance(e, ChainElement) else ChainElement(e)
                      for e in self.elements)
        object.__setattr__(self, "elements", elems)
        w = self.q1_weights
        if isinstance(w, (int, float)):
            w = (float(w),)
        w = tuple(float(v) for v in w)
        if len(w) != 1:
            raise DimensionMismatch("level 1 is one-dimensional")
        if w[0] <= 0:
            raise ValueError("q1 must be a positive functional")
        object.__setattr__(self, "q1_weights", w)
        if self.depth < 1:
            raise LevelOutOfRange("depth must be >= 1")
        for e in elems:
            if e.depth != self.depth:
                raise DimensionMismatch("all stored elements share the depth")

    def q(self, h: ChainElement) -> float:
        return self.q1_weights[0] * h.coords[0]

    def default_tail_bound(self) -> float:
        top = max((abs(c) for e in self.elements for c in e.coords),
                  default=0.0)
        return 1.0 + 10.0 * top


def supremal_value(spec: FiniteSupremalSpec, x) -> ExtReal:
    """spf(x): best q over stored elements dominated by x."""
    xs = tuple(float(v) for v in x)
    if len(xs) != spec.depth:
        raise DimensionMismatch("point depth mismatch")
    best = NEG_INF
    for h in spec.elements:
        if h.dominated_by(xs):
            v = spec.q(h)
            if v > best:
                best = v
    return best


def sup_projection(spec: FiniteSupremalSpec, n: int, x_n,
                   tail_bound=None) -> ExtReal:
    """Supremum of spf over all extensions of the level-n point x_n.

    Parameters
    ----------
    spec : FiniteSupremalSpec
    n : int
        Level, 1 <= n <= spec.depth.
    x_n : sequence of float, length n
    tail_bound : float, optional
        Extension value for coordinates beyond level n; must dominate
        every stored coordinate.  Default: 1 + 10 * max|coord|.

    Returns
    -------
    ExtReal
        spf evaluated at x_n extended with tail_bound; -inf when no
        stored element fits under the extension.
    """
    if not 1 <= n <= spec.depth:
        raise LevelOutOfRange(f"level {n} outside 1..{spec.depth}")
    xs = tuple(float(v) for v in x_n)
    if len(xs) != n:
        raise DimensionMismatch(f"point must have length {n}")
    if tail_bound is None:
        tail_bound = spec.default_tail_bound()
    ext = xs + (float(tail_bound),) * (spec.depth - n)
    return supremal_value(spec, ext)


def stabilized_limsup(seq, x: ChainElement):
    """Detect a stabilizing sequence and compute its coordinatewise limsup.

    The sequence stabilizes toward x when the level-n projection of
    every element from position n on (1-based) agrees with the level-n
    projection of x, for each level within the stored depth.

    Returns
    -------
    (bool, ChainElement or None)
        The flag, and for stabilizing sequences the coordinatewise
        limsup (inf over tails of tail sups), which then equals x.
    """
    if not isinstance(x, ChainElement):
        x = ChainElement(x)
    elems = [e if isinstance(e, ChainElement) else ChainElement(e)
             for e in seq]
    if not elems:
        raise ValueError("sequence must be nonempty")
    for e in elems:
        if e.depth != x.depth:
            raise DimensionMismatch("sequence elements must share the depth")
    kmax = len(elems)
    for n in range(1, x.depth + 1):
        want = x.project(n)
        for k in range(n, kmax + 1):
            if elems[k - 1].project(n) != want:
                return False, None
    coords = []
    for i in range(x.depth):
        tail_sups = [max(e.coords[i] for e in elems[n:])
                     for n in range(kmax)]
        coords.append(min(tail_sups))
    return True, ChainElement(tuple(coords))


def verify_supremal_projection(spec: FiniteSupremalSpec, n: int,
                               grid) -> dict:
    """Compare sup_projection with the level-n supremal function.

    For each level-n point, the right-hand side maximizes q over stored
    elements whose level-n projection is dominated; the left extends
    the point and evaluates spf.  Both scan the same candidates, so the
    reported discrepancy is exactly zero.
    """
    pts = [tuple(float(v) for v in p) for p in grid]
    if not pts:
        raise ValueError("grid must be nonempty")
    worst = 0.0
    worst_pt = None
    for p in pts:
        if len(p) != n:
            raise DimensionMismatch(f"grid points must have length {n}")
        lhs = sup_projection(spec, n, p)
        rhs = NEG_INF
        for h in spec.elements:
            if all(a <= b for a, b in zip(h.project(n), p)):
                v = spec.q(h)
                if v > rhs:
                    rhs = v
        if lhs == rhs:
            d = 0.0
        elif lhs == NEG_INF or rhs == NEG_INF:
            d = float("inf")
        else:
            d = abs(lhs - rhs)
        if d > worst:
            worst = d
            worst_pt = p
    return {"max_discrepancy": worst, "points_checked": len(pts),
            "level": n, "worst_point": worst_pt}

"""Variable-radius mollification and averaging on lattice domains.

The mollifier is built from the lazy five-point stencil

    S = 1/2 * (point mass) + 1/8 * (each of the four axis shifts),

iterated k = floor(r / spacing) times.  The resulting weight table is
nonnegative, invariant under the eight lattice symmetries, supported in
the closed ball of radius r (the l1 ball of radius k sits inside it),
and its weights are dyadic rationals summing to one.  Because each pass
is a convex combination of the identity and the neighbor mean, values
of a discretely subharmonic function never decrease under smoothing:
the kernel is a Jensen measure for the five-point defect.

A radius field assigns a smoothing radius to every interior node.
``refine_radius`` caps a requested field so that every averaging ball
stays strictly inside the interior (at least half a step away from the
grid boundary) and, at centers outside the inner subdomain, clear of
the protected support; a neighbor-minimum pass and the largest
1-Lipschitz minorant then make the field vary no faster than distance.

``variable_smooth`` evaluates the mollified function by global stencil
passes, reading the k(x)-th iterate at each node x; this is valid
because the value at x depends only on nodes within l1 distance k(x),
all interior when the radius field is admissible.  ``mollified_measure``
spreads each atom by its own kernel, so the adjoint identity

    integral of F d(mollified mu) = integral of (smoothed F) d(mu)

holds by construction.  Ball and sphere averages are empirical node
means, normalized so that averaging a constant returns it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (BallLeavesDomain, DimensionMismatch, DomainMismatch,
                     EmptyMargin, InfiniteValue, RadiusTooSmall,
                     RingTooSparse, SupportViolation, UndefinedSum)
from .gridpotential import (BOUNDARY, INTERIOR, DiscreteMeasure, GridDomain,
                            GridFunction, SubDomain, _check_same_domain)

_STEP_EPS = 1e-9


def _lazy_pass(w: np.ndarray) -> np.ndarray:
    """One lazy-stencil application on a 2-D array, zero beyond its edge."""
    out = 0.5 * w
    out[1:, :] += 0.125 * w[:-1, :]
    out[:-1, :] += 0.125 * w[1:, :]
    out[:, 1:] += 0.125 * w[:, :-1]
    out[:, :-1] += 0.125 * w[:, 1:]
    return out


_CASCADE_CACHE: dict = {}


def _cascade(k: int) -> np.ndarray:
    """Weight table of the k-fold lazy stencil on a (2k+1)^2 window.

    Entry [k + dy, k + dx] is the weight of offset (dx, dy).  Cached and
    returned read-only.
    """
    if k not in _CASCADE_CACHE:
        w = np.zeros((2 * k + 1, 2 * k + 1))
        w[k, k] = 1.0
        for _ in range(k):
            w = _lazy_pass(w)
        # Deep cascades round their dyadic weights; halving averages over
        # the reflections restores bitwise symmetry (addition commutes).
        w = (w + w[::-1, :]) * 0.5
        w = (w + w[:, ::-1]) * 0.5
        w = (w + w.T) * 0.5
        s = w.sum()
        if s != 1.0:
            w /= s
        w.setflags(write=False)
        _CASCADE_CACHE[k] = w
    return _CASCADE_CACHE[k]


@dataclass(frozen=True)
class RadialKernel:
    """Averaging weights on lattice offsets within a fixed radius.

    offsets : (m, 2) int array of (dx, dy) lattice offsets
    weights : (m,) nonnegative weights summing to 1
    radius  : ball radius in length units
    spacing : lattice step in length units
    """

    offsets: np.ndarray
    weights: np.ndarray
    radius: float
    spacing: float

    def __post_init__(self):
        off = np.asarray(self.offsets, dtype=int).reshape(-1, 2)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if off.shape[0] != w.shape[0]:
            raise DimensionMismatch("offset and weight counts differ")
        if not (self.radius > 0 and self.spacing > 0):
            raise RadiusTooSmall("kernel radius and spacing must be positive")
        if np.any(w < 0):
            raise ValueError("kernel weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-14:
            raise ValueError("kernel weights must sum to 1")
        reach = np.hypot(off[:, 0], off[:, 1]) * self.spacing
        if np.any(reach > self.radius * (1 + 1e-12) + 1e-12):
            raise SupportViolation("kernel weight outside its ball")
        table = {(int(a), int(b)): ww for (a, b), ww in zip(off, w)}
        for (dx, dy), ww in table.items():
            for ix, iy in ((dx, -dy), (-dx, dy), (-dx, -dy),
                           (dy, dx), (dy, -dx), (-dy, dx), (-dy, -dx)):
                if table.get((ix, iy)) != ww:
                    raise ValueError("kernel breaks lattice symmetry")
        object.__setattr__(self, "offsets", off)
        object.__setattr__(self, "weights", w)

    @property
    def steps(self) -> int:
        """Number of stencil passes the ball radius admits."""
        return int(np.abs(self.offsets).sum(axis=1).max(initial=0))

    def table(self):
        """Rows (dx, dy, weight) sorted lexicographically."""
        order = np.lexsort((self.offsets[:, 1], self.offsets[:, 0]))
        return [(int(self.offsets[i, 0]), int(self.offsets[i, 1]),
                 float(self.weights[i])) for i in order]

    def to_csv(self, target) -> None:
        """Write rows ``dx,dy,weight`` to a path or text stream."""
        rows = ["dx,dy,weight"]
        rows += ["%d,%d,%.17g" % row for row in self.table()]
        text = "\n".join(rows) + "\n"
        if isinstance(target, (str, bytes)):
            with open(target, "w", encoding="ascii") as fh:
                fh.write(text)
        else:
            target.write(text)


def jensen_kernel(radius: float, spacing: float) -> RadialKernel:
    """Averaging kernel of radius ``radius`` on a lattice of given step.

    floor(radius / spacing) lazy-stencil passes; radius below one step
    yields the point mass at the origin.
    """
    if not (radius > 0 and spacing > 0):
        raise RadiusTooSmall("radius and spacing must be positive")
    k = int(np.floor(radius / spacing + _STEP_EPS))
    w = _cascade(k)
    iy, ix = np.nonzero(w)
    offsets = np.stack([ix - k, iy - k], axis=1)
    return RadialKernel(offsets, w[iy, ix], float(radius), float(spacing))


@dataclass
class RadiusField:
    """Strictly positive smoothing radii on the interior nodes.

    Values at boundary and outside nodes are ignored and stored as 0.
    Admissibility (every ball inside the domain) is established by
    ``refine_radius`` and rechecked wherever balls are used.
    """

    domain: GridDomain
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape == (self.domain.ny, self.domain.nx):
            v = v.reshape(-1)
        if v.shape != (self.domain.nx * self.domain.ny,):
            raise DimensionMismatch("radius values do not match the lattice")
        inner = self.domain.interior_ids
        if not np.all(np.isfinite(v[inner])):
            raise InfiniteValue("radii must be finite")
        if np.any(v[inner] <= 0):
            raise RadiusTooSmall("radii must be strictly positive")
        out = np.zeros(v.shape)
        out[inner] = v[inner]
        self.values = out

    @classmethod
    def constant(cls, d: GridDomain, r: float) -> "RadiusField":
        return cls(d, np.full(d.nx * d.ny, float(r)))

    def steps(self) -> np.ndarray:
        """Stencil pass count floor(r / spacing) per node (0 off-interior)."""
        k = np.zeros(self.domain.nx * self.domain.ny, dtype=int)
        inner = self.domain.interior_ids
        k[inner] = np.floor(self.values[inner] / self.domain.spacing
                            + _STEP_EPS).astype(int)
        return k


def distance_to_nodes(d: GridDomain, ids) -> np.ndarray:
    """Euclidean distance from every node to the nearest listed node."""
    ids = np.asarray(ids, dtype=int)
    if ids.size == 0:
        return np.full(d.nx * d.ny, np.inf)
    xs, ys = d.coordinate_arrays()
    out = np.empty(d.nx * d.ny)
    tx, ty = xs[ids], ys[ids]
    for lo in range(0, out.size, 1024):
        hi = min(lo + 1024, out.size)
        dx = xs[lo:hi, None] - tx[None, :]
        dy = ys[lo:hi, None] - ty[None, :]
        out[lo:hi] = np.sqrt(dx * dx + dy * dy).min(axis=1)
    return out


def _ball_guard(d: GridDomain, steps: np.ndarray, centers, error_cls) -> None:
    """Require the k(x)-step ball at each center to stay interior.

    A ball avoiding every grid-boundary node also avoids outside nodes
    and the lattice edge, because any straight path to those crosses a
    strictly closer boundary node.
    """
    dist_bd = distance_to_nodes(d, d.boundary_ids)
    hs = d.spacing
    for nid in centers:
        if steps[nid] * hs >= dist_bd[nid] - _STEP_EPS * hs:
            ix, iy = d.node_ixy(nid)
            raise error_cls("ball at node (%d, %d) leaves the interior"
                            % (ix, iy))


def refine_radius(r: RadiusField, d: GridDomain, U0: SubDomain,
                  U1: SubDomain) -> RadiusField:
    """Admissible radius field below ``r`` for sweeping between subdomains.

    Caps the field so that (a) the closed ball at every interior node
    stays at least half a step inside the grid boundary and (b) balls
    centered outside the inner subdomain U1 keep the same clearance
    from U0.  A neighbor-minimum pass and the largest 1-Lipschitz
    minorant (computed over interior nodes) then bound the variation by
    the node distance.  The result is strictly positive because every
    interior node is at least one step from the boundary.

    Raises EmptyMargin when U1 reaches the grid boundary or U0 is not
    strictly inside U1.
    """
    _check_same_domain(r.domain, d)
    if U0.domain is not d and not U0.domain.same_as(d):
        raise DomainMismatch("U0 lives on a different domain")
    if U1.domain is not d and not U1.domain.same_as(d):
        raise DomainMismatch("U1 lives on a different domain")
    roles = d.roles
    if np.any(roles[U1.member_ids] != INTERIOR):
        raise EmptyMargin("outer subdomain touches the grid boundary")
    inner1 = np.zeros(d.nx * d.ny, dtype=bool)
    inner1[U1.interior_ids] = True
    if not np.all(inner1[U0.member_ids]):
        raise EmptyMargin("inner subdomain is not strictly inside the outer")

    hs = d.spacing
    inner = d.interior_ids
    dist_bd = distance_to_nodes(d, d.boundary_ids)
    dist_u0 = distance_to_nodes(d, U0.member_ids)
    m = np.zeros(d.nx * d.ny)
    m[inner] = np.minimum(r.values[inner], dist_bd[inner] - hs / 2)
    off1 = inner[~inner1[inner]]
    m[off1] = np.minimum(m[off1], dist_u0[off1] - hs / 2)

    m2 = m.copy()
    for nid in inner:
        for q in d.neighbors(nid):
            if roles[q] == INTERIOR and m[q] < m2[nid]:
                m2[nid] = m[q]

    xs, ys = d.coordinate_arrays()
    ix_, iy_ = xs[inner], ys[inner]
    vals = m2[inner]
    out = np.zeros(d.nx * d.ny)
    for lo in range(0, inner.size, 512):
        hi = min(lo + 512, inner.size)
        dx = ix_[lo:hi, None] - ix_[None, :]
        dy = iy_[lo:hi, None] - iy_[None, :]
        out[inner[lo:hi]] = (vals[None, :]
                             + np.sqrt(dx * dx + dy * dy)).min(axis=1)
    return RadiusField(d, out)


def variable_smooth(F: GridFunction, rhat: RadiusField) -> GridFunction:
    """Kernel average of F over the ball of radius rhat(x) at each x.

    Boundary values and nodes whose radius is below one step pass
    through unchanged.  Evaluated by global lazy-stencil passes: the
    k-th iterate at x equals the kernel average because the value only
    depends on nodes within l1 distance k, all interior for an
    admissible field.
    """
    _check_same_domain(F.domain, rhat.domain)
    d = F.domain
    k = rhat.steps()
    active = k > 0
    centers = np.where(active)[0]
    _ball_guard(d, k, centers, BallLeavesDomain)

    bad = d.interior_ids[~np.isfinite(F.values[d.interior_ids])]
    if bad.size:
        dist_inf = distance_to_nodes(d, bad)
        hs = d.spacing
        for nid in centers:
            if k[nid] * hs >= dist_inf[nid] - _STEP_EPS * hs:
                raise InfiniteValue("infinite value inside an averaging ball")

    out = F.values.copy()
    if centers.size == 0:
        return GridFunction(d, out)
    kmax = int(k[centers].max())
    g = F.values.reshape(d.ny, d.nx).copy()
    g[~np.isfinite(g)] = 0.0
    flat = g.reshape(-1)
    for j in range(1, kmax + 1):
        flat = _lazy_pass(flat.reshape(d.ny, d.nx)).reshape(-1)
        sel = centers[k[centers] == j]
        out[sel] = flat[sel]
    return GridFunction(d, out)


def mollified_measure(mu: DiscreteMeasure, rhat: RadiusField) -> DiscreteMeasure:
    """Mixture of per-atom kernel spreads; adjoint to variable_smooth.

    Atoms at interior nodes spread over their ball; atoms at boundary
    nodes, where no positive radius is admissible, stay point masses.
    Mass is preserved and the pairing identity

        integral F d(result) = integral (variable_smooth F) d(mu)

    holds by construction.  Raises SupportViolation when an atom's ball
    leaves the interior.
    """
    _check_same_domain(mu.domain, rhat.domain)
    d = mu.domain
    k = rhat.steps()
    support = mu.support
    spread = support[(d.roles[support] == INTERIOR) & (k[support] > 0)]
    _ball_guard(d, k, spread, SupportViolation)

    out = mu.weights.copy()
    out[spread] = 0.0
    block = out.reshape(d.ny, d.nx)
    for nid in spread:
        kk = int(k[nid])
        w = _cascade(kk)
        ix, iy = d.node_ixy(nid)
        block[iy - kk:iy + kk + 1, ix - kk:ix + kk + 1] += mu.weights[nid] * w
    return DiscreteMeasure(d, out)


def _ext_mean(vals: np.ndarray) -> float:
    """Mean under extended-real conventions; infinities dominate."""
    has_pos = np.any(vals == np.inf)
    has_neg = np.any(vals == -np.inf)
    if has_pos and has_neg:
        raise UndefinedSum("ball mixes +inf and -inf samples")
    if has_pos:
        return float("inf")
    if has_neg:
        return float("-inf")
    return float(np.mean(vals))


def ball_average(M: GridFunction, z: int, dradius: float) -> float:
    """Node mean of M over the open ball of radius dradius around z.

    Normalized by node count so a constant averages to itself exactly;
    the continuum disc average is recovered as the step shrinks.
    Raises RadiusTooSmall below one lattice step and BallLeavesDomain
    if the ball contains a non-member position.
    """
    d = M.domain
    hs = d.spacing
    if dradius < hs * (1 - 1e-12):
        raise RadiusTooSmall("ball radius below one lattice step")
    if not d.active_mask[z]:
        raise BallLeavesDomain("ball center is not an active node")
    zx, zy = d.node_xy(z)
    span = int(np.ceil(dradius / hs)) + 1
    ix0, iy0 = d.node_ixy(z)
    ids = []
    for iy in range(iy0 - span, iy0 + span + 1):
        for ix in range(ix0 - span, ix0 + span + 1):
            px = d.origin[0] + ix * hs
            py = d.origin[1] + iy * hs
            if np.hypot(px - zx, py - zy) >= dradius:
                continue
            inside = 0 <= ix < d.nx and 0 <= iy < d.ny
            if not inside or not d.active_mask[iy * d.nx + ix]:
                raise BallLeavesDomain("averaging ball leaves the domain")
            ids.append(iy * d.nx + ix)
    return _ext_mean(M.values[np.asarray(ids, dtype=int)])


def sphere_average(M: GridFunction, z: int, radius: float) -> float:
    """Node mean of M over the lattice ring at distance radius from z.

    The ring collects member nodes whose distance to z is within half a
    step of the radius; fewer than 8 such nodes raises RingTooSparse.
    """
    d = M.domain
    if not d.active_mask[z]:
        raise RingTooSparse("ring center is not an active node")
    xs, ys = d.coordinate_arrays()
    zx, zy = d.node_xy(z)
    dist = np.hypot(xs - zx, ys - zy)
    tol = d.spacing / 2 + 1e-12 * max(1.0, radius)
    ring = np.where((np.abs(dist - radius) <= tol) & d.active_mask)[0]
    if ring.size < 8:
        raise RingTooSparse("ring holds %d nodes, need 8" % ring.size)
    return _ext_mean(M.values[ring])

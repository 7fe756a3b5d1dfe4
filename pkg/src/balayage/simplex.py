"""Dense two-phase tableau simplex with verifiable certificates.

Solves  min/max c.x  subject to  A x {<=, ==, >=} b  and per-variable
bounds l <= x <= u (either side may be infinite).  Everything is dense
float64; intended scale is a few thousand variables.

Pipeline: the problem is rewritten in standard form (shift variables
with a finite lower bound, flip ones bounded only above, split free
ones, add slack/surplus columns, append rows for two-sided bounds, make
the right-hand side nonnegative).  Phase 1 minimizes the total
artificial mass; phase 2 optimizes the real objective with artificial
columns barred from entering.

Determinism and anti-cycling: the entering column is the most negative
reduced cost with exact ties broken by lowest column index; the leaving
row minimizes the ratio test, preferring large pivot magnitudes inside
a narrow ratio band and breaking remaining ties by lowest basic column
index.  If the objective stalls for many consecutive degenerate pivots
the rule switches permanently to Bland's rule (lowest eligible index on
both choices), which cannot cycle.  The tableau is rebuilt from the
original data against the current basis at fixed intervals and on the
Bland switch, so rank-one update error cannot compound.  Identical
inputs take identical pivot paths, so re-solves are bit-reproducible.

A pivot candidate below 1e-13 in magnitude is never used: if a column
selected for entering has only such dust as positive entries the solver
raises NumericalBreakdown rather than divide by it or silently treat it
as zero.

Outcomes carry enough data to be checked by direct substitution:
optimal points come with row duals and reduced costs satisfying the
complementary-slackness accounting identity, unbounded outcomes carry a
feasible point plus an improving ray, infeasible ones carry a Farkas
vector for the standard form.  `verify_certificates` performs those
substitutions and reports residuals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, InfiniteValue, NumericalBreakdown

_PIVOT_FLOOR = 1e-13
_REL_FLOOR = 1e-10
_DRIVE_EPS = 1e-9
_STALL_LIMIT = 200
_REFRESH_EVERY = 32
_GROWTH_LIMIT = 1e10
_PERTURB_MAX = 12

_RELATIONS = ("<=", "==", ">=")


@dataclass
class LinearProgram:
    """Data of one finite linear program.

    Attributes
    ----------
    c : (n,) array
        Objective coefficients.
    sense : str
        "min" or "max".
    A : (m, n) array
        Constraint matrix (m may be 0).
    relations : tuple of str
        One of "<=", "==", ">=" per row ("=" is accepted for "==").
    b : (m,) array
        Right-hand sides.
    lower, upper : scalar or (n,) array
        Variable bounds; -inf / +inf allowed.  Defaults: 0 and +inf.
    """

    c: np.ndarray
    sense: str
    A: np.ndarray
    relations: tuple
    b: np.ndarray
    lower: object = 0.0
    upper: object = float("inf")

    def __post_init__(self):
        self.c = np.atleast_1d(np.asarray(self.c, dtype=float))
        self.A = np.asarray(self.A, dtype=float)
        if self.A.size == 0:
            self.A = self.A.reshape(0, self.c.size)
        if self.A.ndim != 2:
            raise DimensionMismatch("A must be two-dimensional")
        m, n = self.A.shape
        if self.c.shape != (n,):
            raise DimensionMismatch("c length does not match A columns")
        self.b = np.atleast_1d(np.asarray(self.b, dtype=float)) if m else np.zeros(0)
        if self.b.shape != (m,):
            raise DimensionMismatch("b length does not match A rows")
        rels = tuple("==" if r in ("=", "==") else r for r in self.relations) if m else ()
        if len(rels) != m or any(r not in _RELATIONS for r in rels):
            raise ValueError("relations must be one of <=, ==, >= per row")
        self.relations = rels
        if self.sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        self.lower = np.broadcast_to(np.asarray(self.lower, dtype=float), (n,)).copy()
        self.upper = np.broadcast_to(np.asarray(self.upper, dtype=float), (n,)).copy()
        if not (np.all(np.isfinite(self.c)) and np.all(np.isfinite(self.A))
                and np.all(np.isfinite(self.b))):
            raise InfiniteValue("c, A, b must be finite")
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")
        if np.any(np.isnan(self.lower)) or np.any(np.isnan(self.upper)):
            raise ValueError("nan bound")
        if np.any(self.lower == np.inf) or np.any(self.upper == -np.inf):
            raise ValueError("empty bound interval")


@dataclass
class LPOutcome:
    """Result of `solve`.

    status is "OPTIMAL", "INFEASIBLE" or "UNBOUNDED".  For OPTIMAL, `x`
    is the optimizer, `value` the objective in the problem's own sense,
    `dual` one multiplier per constraint row and `reduced_costs` one per
    variable; both satisfy the sign conventions of the problem sense
    (for "max": dual >= 0 on "<=" rows, <= 0 on ">=" rows; for "min"
    the signs flip).  For UNBOUNDED, `x` is a feasible point and
    `certificate["direction"]` an improving feasible ray.  For
    INFEASIBLE, `certificate` holds a Farkas vector for the standard
    form, checkable with `verify_certificates`.
    """

    status: str
    value: Optional[float] = None
    x: Optional[np.ndarray] = None
    dual: Optional[np.ndarray] = None
    reduced_costs: Optional[np.ndarray] = None
    certificate: Optional[dict] = None
    iterations: int = 0
    basis: Optional[tuple] = None
    trace: Optional[list] = None


@dataclass
class _Standard:
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray            # min-sense costs per standard column
    c1: np.ndarray           # phase-1 costs (1 on artificials)
    basis0: np.ndarray
    art_mask: np.ndarray     # True on artificial columns
    probe: np.ndarray        # per row: column whose A-column is e_row
    row_sign: np.ndarray     # +1 / -1 per row vs natural orientation
    col_tags: list           # per non-artificial column: (kind, var index)
    x0: np.ndarray           # constant part of the variable transform
    m_orig: int
    n_real: int              # columns before artificials


def _standardize(p: LinearProgram) -> _Standard:
    m, n = p.A.shape
    c_min = p.c.copy() if p.sense == "min" else -p.c
    lo, up = p.lower, p.upper

    x0 = np.zeros(n)
    col_tags = []
    col_data = []            # columns of the first m rows
    col_cost = []
    ub_rows = []             # (var index, span) rows appended after the m rows
    for j in range(n):
        l, u = lo[j], up[j]
        if np.isfinite(l):
            x0[j] = l
            col_tags.append(("shift", j))
            col_data.append(p.A[:, j])
            col_cost.append(c_min[j])
            if np.isfinite(u):
                ub_rows.append((j, u - l))
        elif np.isfinite(u):
            x0[j] = u
            col_tags.append(("flip", j))
            col_data.append(-p.A[:, j])
            col_cost.append(-c_min[j])
        else:
            col_tags.append(("split+", j))
            col_data.append(p.A[:, j])
            col_cost.append(c_min[j])
            col_tags.append(("split-", j))
            col_data.append(-p.A[:, j])
            col_cost.append(-c_min[j])

    mt = m + len(ub_rows)
    k = len(col_tags)
    A1 = np.zeros((mt, k))
    if k:
        body = np.column_stack(col_data) if m else np.zeros((0, k))
        A1[:m, :] = body
    for r, (j, span) in enumerate(ub_rows):
        for cidx, (kind, var) in enumerate(col_tags):
            if var == j and kind == "shift":
                A1[m + r, cidx] = 1.0
    b1 = np.concatenate([p.b - p.A @ x0, np.array([s for _, s in ub_rows])]) \
        if mt else np.zeros(0)
    rels = list(p.relations) + ["<="] * len(ub_rows)

    # Slack / surplus columns.
    slack_cols = {}
    extra = []
    for i, r in enumerate(rels):
        if r == "<=":
            e = np.zeros(mt); e[i] = 1.0
        elif r == ">=":
            e = np.zeros(mt); e[i] = -1.0
        else:
            continue
        slack_cols[i] = k + len(extra)
        extra.append(e)
        col_tags.append(("slack", i))
    if extra:
        A1 = np.hstack([A1, np.column_stack(extra)])
    c_std = np.concatenate([np.asarray(col_cost), np.zeros(len(extra))])

    # Nonnegative right-hand side.
    row_sign = np.ones(mt)
    neg = b1 < 0
    row_sign[neg] = -1.0
    A1[neg, :] *= -1.0
    b1 = np.abs(b1)

    # Initial basis: slack columns that survived with +1, else artificials.
    n_real = A1.shape[1]
    basis0 = np.full(mt, -1, dtype=int)
    probe = np.full(mt, -1, dtype=int)
    art_cols = []
    for i in range(mt):
        sc = slack_cols.get(i)
        if sc is not None and A1[i, sc] == 1.0:
            basis0[i] = sc
            probe[i] = sc
    for i in range(mt):
        if basis0[i] < 0:
            e = np.zeros(mt); e[i] = 1.0
            art_cols.append(e)
            cidx = n_real + len(art_cols) - 1
            basis0[i] = cidx
            probe[i] = cidx
    if art_cols:
        A1 = np.hstack([A1, np.column_stack(art_cols)])
    ntot = A1.shape[1]
    art_mask = np.zeros(ntot, dtype=bool)
    art_mask[n_real:] = True
    c_full = np.concatenate([c_std, np.zeros(ntot - n_real)])
    c1 = np.zeros(ntot)
    c1[n_real:] = 1.0
    return _Standard(A1, b1, c_full, c1, basis0, art_mask, probe, row_sign,
                     col_tags, x0, m, n_real)


def _map_point(std: _Standard, n: int, x_std: np.ndarray) -> np.ndarray:
    x = std.x0.copy()
    for cidx in range(std.n_real):
        kind, j = std.col_tags[cidx]
        v = x_std[cidx]
        if kind == "shift" or kind == "split+":
            x[j] += v
        elif kind == "flip" or kind == "split-":
            x[j] -= v
    return x


def _map_ray(std: _Standard, n: int, d_std: np.ndarray) -> np.ndarray:
    d = np.zeros(n)
    for cidx in range(std.n_real):
        kind, j = std.col_tags[cidx]
        v = d_std[cidx]
        if kind == "shift" or kind == "split+":
            d[j] += v
        elif kind == "flip" or kind == "split-":
            d[j] -= v
    return d


class _Tableau:
    """Mutable simplex tableau: rows of B^-1 [A | b] plus a cost row."""

    def __init__(self, std: _Standard, tol: float):
        self.std = std
        self.tol = tol
        self.T = np.hstack([std.A, std.b[:, None]]).astype(float)
        self.basis = std.basis0.copy()
        self._tscale = max(1.0, float(np.abs(self.T).max()))
        self.iterations = 0
        self._fresh_at = 0
        self._rng = np.random.default_rng(0xB41A7A6E)
        self._bpert = None       # rhs with anti-degeneracy offsets
        self._pert_rounds = 0
        self.bland = False
        self.protect = False     # phase 2: keep basic artificials at zero
        self._stall = 0
        self.zrow = None
        self.objval = 0.0
        self.cost = None

    def set_cost(self, cost: np.ndarray):
        self.cost = cost
        self.refresh()

    def refresh(self):
        cb = self.cost[self.basis]
        self.zrow = self.cost - self.T[:, :-1].T @ cb
        self.zrow[self.basis] = 0.0
        self.objval = float(cb @ self.T[:, -1])

    def reinvert(self):
        """Rebuild the tableau from the original data and current basis.

        Rank-one pivot updates accumulate error; solving against the
        basis matrix afresh resets it, so corruption cannot compound
        across more than one refresh window.
        """
        B = self.std.A[:, self.basis]
        bvec = self.std.b if self._bpert is None else self._bpert
        rhs = np.hstack([self.std.A, bvec[:, None]])
        try:
            self.T = np.linalg.solve(B, rhs)
        except np.linalg.LinAlgError:
            raise NumericalBreakdown("singular basis at reinversion")
        bcol = self.T[:, -1]
        tiny = (bcol < 0.0) & (bcol >= -1e-9 * (1.0 + float(np.abs(bcol).max())))
        bcol[tiny] = 0.0
        self._tscale = max(1.0, float(np.abs(self.T).max()))
        self._fresh_at = self.iterations
        self.refresh()

    def perturb(self):
        """Break a degenerate stall by offsetting the rhs inside the
        cone of the current basis: the basic values move strictly
        positive, ratio ties disappear, and the basis stays feasible
        for the offset problem exactly."""
        scale = 1e-9 * (1.0 + float(np.abs(self.std.b).max()))
        d = self._rng.uniform(1.0, 2.0, size=self.T.shape[0]) * scale
        base = self.std.b if self._bpert is None else self._bpert
        self._bpert = base + self.std.A[:, self.basis] @ d
        self._pert_rounds += 1
        self.bland = False
        self._stall = 0
        self.reinvert()

    def clear_perturbation(self):
        """Drop the anti-degeneracy offsets and restore the true rhs.
        Basic values can dip below zero by at most the offset size;
        anything worse means feasibility was genuinely lost."""
        self._bpert = None
        self.reinvert()
        bcol = self.T[:, -1]
        floor = -1e-7 * (1.0 + float(np.abs(bcol).max()))
        if (bcol < floor).any():
            raise NumericalBreakdown("feasibility lost after de-perturbation")
        np.maximum(bcol, 0.0, out=bcol)
        self.refresh()

    def values(self) -> np.ndarray:
        x = np.zeros(self.T.shape[1] - 1)
        x[self.basis] = self.T[:, -1]
        return x

    def _enter(self, allowed: np.ndarray) -> int:
        cand = (self.zrow < -self.tol) & allowed
        if not cand.any():
            return -1
        idx = np.where(cand)[0]
        if self.bland:
            return int(idx[0])
        return int(idx[np.argmin(self.zrow[idx])])

    def _leave(self, j: int):
        """Ratio-test row for entering column j.

        Returns the leaving row, -1 for no positive entry (unbounded
        direction), or -2 when the only positive entries are dust
        relative to the column scale and the tableau is stale, in which
        case the caller must reinvert and retry.  On a fresh tableau
        dust is absorbed only when zeroing it is backward-consistent
        with the original column; otherwise it is a reported breakdown.
        """
        col = self.T[:, j]
        m = col.shape[0]
        if m == 0:
            return -1
        base = float(np.abs(col).max(initial=0.0))
        floor_j = max(_PIVOT_FLOOR, _REL_FLOOR * base)
        if self.protect:
            # Basic artificials sit at zero; clear them before they can
            # drift positive under a regular pivot.
            art_rows = np.where(self.std.art_mask[self.basis]
                                & (np.abs(col) > max(_DRIVE_EPS, floor_j)))[0]
            if art_rows.size:
                return int(art_rows[0])
        pos = col > floor_j
        if not pos.any():
            mx = float(col.max(initial=0.0))
            if mx > 0.0:
                # Positive entries exist but all sit below the dust
                # floor.  On stale data that is update noise; on fresh
                # data they are either roundoff on exact zeros (safe to
                # drop) or the problem itself is at float resolution.
                if self._fresh_at == self.iterations:
                    if self._dust_is_roundoff(j, floor_j):
                        return -1
                    raise NumericalBreakdown(
                        f"pivot candidates below {floor_j:.3e} "
                        f"in column {j}")
                return -2
            return -1
        # Two-pass ratio test.  Pass 1 bounds the step using a small
        # feasibility slack so rows whose rhs is only dust cannot force
        # a needle pivot; pass 2 keeps every row still within the slack
        # at that step and takes the numerically strongest pivot.
        rows = np.where(pos)[0]
        colp = col[rows]
        rhs = np.maximum(self.T[rows, -1], 0.0)
        slack = 1e-9 * (1.0 + float(np.abs(self.T[:, -1]).max()))
        tmax = ((rhs + slack) / colp).min()
        cand = rows[(rhs / colp) <= tmax]
        if not self.bland:
            # Among tied rows prefer large pivots for stability.  Under
            # the anti-cycling rule the tie set must stay whole so the
            # lowest-basic-index choice keeps its termination proof.
            cp = col[cand]
            strong = cand[cp >= 0.5 * cp.max()]
            if strong.size:
                cand = strong
        return int(cand[np.argmin(self.basis[cand])])

    def _dust_is_roundoff(self, j: int, floor_j: float) -> bool:
        """Whether the sub-floor entries of column j are roundoff zeros.

        Zeroing them is accepted only when the above-floor support
        alone reproduces the original column within the relative pivot
        floor, i.e. when the drop amounts to a backward perturbation
        the floor already tolerates.  A column with no above-floor
        support never qualifies: there the dust is the data itself.
        """
        a = self.std.A[:, j]
        anorm = float(np.linalg.norm(a))
        if anorm == 0.0:
            return True
        col = self.T[:, j]
        keep = np.abs(col) > floor_j
        if not keep.any():
            return False
        B = self.std.A[:, self.basis]
        y = np.linalg.lstsq(B[:, keep], a, rcond=None)[0]
        resid = float(np.linalg.norm(B[:, keep] @ y - a))
        return resid <= _REL_FLOOR * anorm

    def pivot(self, r: int, j: int):
        T = self.T
        piv = T[r, j]
        if abs(piv) < _PIVOT_FLOOR:
            raise NumericalBreakdown(f"pivot magnitude {abs(piv):.3e}")
        risky = abs(piv) < 1e-6 * float(np.abs(T[:, j]).max())
        zj = self.zrow[j]
        T[r, :] /= piv
        colv = T[:, j].copy()
        colv[r] = 0.0
        T -= np.outer(colv, T[r, :])
        T[:, j] = 0.0
        T[r, j] = 1.0
        improve = zj * T[r, -1]
        self.objval += improve
        self.zrow -= zj * T[r, :-1]
        self.zrow[j] = 0.0
        self.basis[r] = j
        self.iterations += 1
        if abs(improve) <= 1e-12 * (1.0 + abs(self.objval)):
            self._stall += 1
            if self._stall >= 2 * _STALL_LIMIT:
                if self._pert_rounds >= _PERTURB_MAX:
                    raise NumericalBreakdown(
                        "degenerate stall unresolved by perturbation")
                self.perturb()
            elif self._stall >= _STALL_LIMIT and not self.bland:
                self.bland = True
                self.reinvert()
        else:
            self._stall = 0
        if risky or self.iterations % _REFRESH_EVERY == 0:
            # A needle pivot amplifies update error by its reciprocal,
            # so rebuild at once rather than let the next choices act
            # on the amplified noise.
            self.reinvert()
        elif float(np.abs(self.T).max()) > _GROWTH_LIMIT * self._tscale:
            # Entries ballooned inside the refresh window: the update
            # error is no longer negligible, so rebuild before the next
            # pivot choice can act on noise.
            self.reinvert()

    def run(self, allowed: np.ndarray, max_iterations: int, trace_cb=None):
        """Pivot until optimal or unbounded; returns ('optimal', -1) or
        ('unbounded', entering column).

        Terminal claims are only made from a freshly rebuilt tableau:
        accumulated update error can fake both a clean reduced-cost row
        and an all-nonpositive column, so either verdict on stale data
        triggers a reinversion and a retry instead.
        """
        while True:
            if self.iterations > max_iterations:
                raise NumericalBreakdown("simplex iteration limit exceeded")
            stale = self._fresh_at != self.iterations
            j = self._enter(allowed)
            if j < 0:
                if self._bpert is not None:
                    self.clear_perturbation()
                    continue
                if stale:
                    self.reinvert()
                    continue
                return "optimal", -1
            r = self._leave(j)
            if r == -2:
                self.reinvert()
                continue
            if r < 0:
                if self._bpert is not None:
                    self.clear_perturbation()
                    continue
                if stale:
                    self.reinvert()
                    continue
                return "unbounded", j
            self.pivot(r, j)
            if trace_cb is not None:
                trace_cb()


def _dual_from_probes(tab: _Tableau) -> np.ndarray:
    std = tab.std
    y = np.empty(std.A.shape[0])
    for i in range(y.size):
        pc = std.probe[i]
        y[i] = tab.cost[pc] - tab.zrow[pc]
    return y


def solve(p: LinearProgram, tol: float = 1e-9, collect_trace: bool = False,
          max_iterations: int = 200000) -> LPOutcome:
    """Solve a linear program.

    Parameters
    ----------
    p : LinearProgram
    tol : float
        Optimality threshold on reduced costs and phase-1 feasibility.
    collect_trace : bool
        Record the phase-2 iterates: a list of dicts with keys
        "iteration", "objective" (problem sense) and "x".
    max_iterations : int
        Safety cap on total pivots.

    Returns
    -------
    LPOutcome
    """
    n = p.c.size
    std = _standardize(p)
    tab = _Tableau(std, tol)
    sense_flip = -1.0 if p.sense == "max" else 1.0

    # Phase 1: only when artificial columns entered the initial basis.
    if std.art_mask.any():
        tab.set_cost(std.c1)
        allowed = np.ones(std.c1.size, dtype=bool)
        status, _ = tab.run(allowed, max_iterations)
        assert status == "optimal", "phase 1 cannot be unbounded"
        tab.refresh()
        feas_tol = tol * (1.0 + float(np.abs(std.b).max(initial=0.0)))
        if tab.objval > feas_tol:
            y = _dual_from_probes(tab)
            cert = {"kind": "farkas", "y_standard": y,
                    "value": float(tab.objval)}
            return LPOutcome(status="INFEASIBLE", certificate=cert,
                             iterations=tab.iterations,
                             basis=tuple(int(v) for v in tab.basis))
        # Drive basic artificials toward real columns where possible.
        tab.protect = True
        for r in np.where(std.art_mask[tab.basis])[0]:
            row = tab.T[r, :std.n_real]
            cols = np.where(np.abs(row) > _DRIVE_EPS)[0]
            if cols.size:
                tab.pivot(int(r), int(cols[0]))

    trace = [] if collect_trace else None
    tab.set_cost(std.c)

    def _record():
        x_now = _map_point(std, n, tab.values())
        trace.append({
            "iteration": tab.iterations,
            "objective": float(p.c @ x_now),
            "x": x_now,
        })

    if collect_trace:
        _record()
    allowed = ~std.art_mask
    status, j_in = tab.run(allowed, max_iterations,
                           trace_cb=_record if collect_trace else None)
    tab.refresh()
    x_std = tab.values()
    x = _map_point(std, n, x_std)
    basis = tuple(int(v) for v in tab.basis)

    if status == "unbounded":
        d_std = np.zeros(std.c.size)
        d_std[j_in] = 1.0
        d_std[tab.basis] = -tab.T[:, j_in]
        d = _map_ray(std, n, d_std)
        rate = float(p.c @ d)
        cert = {"kind": "ray", "direction": d, "rate": rate}
        return LPOutcome(status="UNBOUNDED", x=x, certificate=cert,
                         iterations=tab.iterations, basis=basis, trace=trace)

    y_std = _dual_from_probes(tab)
    y_nat = std.row_sign[:std.m_orig] * y_std[:std.m_orig]
    dual = sense_flip * y_nat
    c_min = p.c * sense_flip
    reduced = sense_flip * (c_min - p.A.T @ y_nat)
    return LPOutcome(status="OPTIMAL", value=float(p.c @ x), x=x, dual=dual,
                     reduced_costs=reduced, iterations=tab.iterations,
                     basis=basis, trace=trace)


def verify_certificates(p: LinearProgram, out: LPOutcome,
                        tol: float = 1e-7) -> tuple:
    """Check an outcome's certificates by direct substitution.

    Returns (ok, residuals) where residuals maps check names to floats
    (all should be <= 0 up to roundoff when ok).
    """
    m, n = p.A.shape
    res = {}
    scale_b = 1.0 + float(np.abs(p.b).max(initial=0.0))
    scale_c = 1.0 + float(np.abs(p.c).max(initial=0.0))

    def _primal_feas(x):
        worst = 0.0
        if m:
            ax = p.A @ x
            for i, r in enumerate(p.relations):
                if r == "<=":
                    worst = max(worst, ax[i] - p.b[i])
                elif r == ">=":
                    worst = max(worst, p.b[i] - ax[i])
                else:
                    worst = max(worst, abs(ax[i] - p.b[i]))
        worst = max(worst, float(np.max(p.lower - x, initial=0.0)))
        worst = max(worst, float(np.max(x - p.upper, initial=0.0)))
        return worst

    if out.status == "OPTIMAL":
        res["primal_feasibility"] = _primal_feas(out.x) - tol * scale_b
        sense_flip = -1.0 if p.sense == "max" else 1.0
        y_nat = sense_flip * out.dual
        c_min = sense_flip * p.c
        r_min = c_min - p.A.T @ y_nat
        worst = 0.0
        for i, rel in enumerate(p.relations):
            if rel == "<=":
                worst = max(worst, y_nat[i])
            elif rel == ">=":
                worst = max(worst, -y_nat[i])
        res["dual_signs"] = worst - tol * scale_c
        worst = 0.0
        for j in range(n):
            if not np.isfinite(p.upper[j]):
                worst = max(worst, -r_min[j])
            if not np.isfinite(p.lower[j]):
                worst = max(worst, r_min[j])
        res["reduced_cost_signs"] = worst - tol * scale_c
        g = float(p.b @ y_nat) if m else 0.0
        for j in range(n):
            rj = r_min[j]
            if rj > 0 and np.isfinite(p.lower[j]):
                g += p.lower[j] * rj
            elif rj < 0 and np.isfinite(p.upper[j]):
                g += p.upper[j] * rj
        vmin = sense_flip * out.value
        res["duality_gap"] = abs(vmin - g) - tol * (1.0 + abs(vmin))
    elif out.status == "UNBOUNDED":
        res["point_feasibility"] = _primal_feas(out.x) - tol * scale_b
        d = out.certificate["direction"]
        dn = float(np.abs(d).max(initial=0.0))
        worst = 0.0
        if m:
            ad = p.A @ d
            for i, rel in enumerate(p.relations):
                if rel == "<=":
                    worst = max(worst, ad[i])
                elif rel == ">=":
                    worst = max(worst, -ad[i])
                else:
                    worst = max(worst, abs(ad[i]))
        for j in range(n):
            if np.isfinite(p.lower[j]):
                worst = max(worst, -d[j])
            if np.isfinite(p.upper[j]):
                worst = max(worst, d[j])
        res["ray_feasibility"] = worst - tol * (1.0 + dn)
        rate = float(p.c @ d)
        improving = rate > 0 if p.sense == "max" else rate < 0
        res["ray_improves"] = (-abs(rate)) if improving else abs(rate) + tol
    elif out.status == "INFEASIBLE":
        std = _standardize(p)
        y = out.certificate["y_standard"]
        prod = y @ std.A[:, :std.n_real]
        res["farkas_cone"] = float(prod.max(initial=0.0)) - tol * scale_c
        res["farkas_strict"] = tol - float(y @ std.b)
    else:
        raise ValueError(f"unknown status {out.status!r}")
    ok = all(v <= 0.0 for v in res.values())
    return ok, res

"""Supremal envelopes over cones of grid functions and sweeping duals.

The primal problem maximizes the pairing of a nonnegative measure nu
with functions h from a constraint class H that stay below a ceiling F
nodewise.  H is cut out by finitely many linear rows: mean-value
stencil rows with relation >= 0 (discretely subharmonic functions),
the same rows with = 0 (discretely harmonic), or custom rows, with
optional nonpositive offsets so that the zero function always remains
admissible in the convex-set mode.

The dual problem sweeps nu: it minimizes the pairing of F with
measures mu = nu + (rows)^T lambda, mu >= 0, where lambda >= 0 in cone
mode and is free on equality rows; the convex-set mode adds the
constant charge c = -offsets . lambda >= 0 to the objective.  Finite
LP strong duality makes the two values agree, and every dual optimum
doubles as a sweeping certificate checkable by substitution: mu - nu
must lie in the row span with admissible multipliers, and the pairing
inequality <h, nu> <= <h, mu> + c holds for every admissible h.

Ceiling entries of +inf drop the node's constraint (its dual mass is
pinned to zero); a -inf entry empties the primal feasible set, and the
dual is probed for whether it can place mass there before the value is
declared.  Jensen verification decides the pairing inequality over the
box-truncated class H intersected with [-1, 1]^nodes, which by
homogeneity settles the full cone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainMismatch, NotFeasible
from .gridpotential import (DiscreteMeasure, GridDomain, GridFunction,
                            _check_same_domain, defect_rows)
from .simplex import LinearProgram, solve

SUBHARMONIC_CONE = "subharmonic_cone"
HARMONIC_SUBSPACE = "harmonic_subspace"
CUSTOM = "custom"

_GAP_TOL = 1e-7
_FEAS_TOL = 1e-9


@dataclass
class ConeSpec:
    """Constraint class H = {h : rows . h (>=|==) offsets}.

    rows has one column per lattice node (outside columns are ignored).
    offsets must be <= 0 so that h = 0 is always admissible; a spec
    with all offsets zero is a cone, otherwise a convex set.
    """

    domain: GridDomain
    kind: str
    rows: np.ndarray
    relation: str
    offsets: np.ndarray

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=float)
        n = self.domain.nx * self.domain.ny
        if self.rows.ndim != 2 or self.rows.shape[1] != n:
            raise DomainMismatch("rows do not match the lattice")
        if self.relation not in (">=", "=="):
            raise ValueError("relation must be '>=' or '=='")
        self.offsets = np.broadcast_to(
            np.asarray(self.offsets, dtype=float),
            (self.rows.shape[0],)).copy()
        if np.any(self.offsets > 0):
            raise ValueError("offsets must be <= 0 so that 0 is admissible")
        if self.relation == "==" and np.any(self.offsets != 0):
            raise ValueError("equality rows require zero offsets")
        if self.kind in (SUBHARMONIC_CONE, HARMONIC_SUBSPACE):
            act = self.domain.active_ids
            drift = self.rows[:, act].sum(axis=1)
            if self.rows.shape[0] and np.abs(drift).max() > 1e-12:
                raise ValueError("stencil rows must vanish on constants")

    @classmethod
    def subharmonic_cone(cls, d: GridDomain, offsets=0.0) -> "ConeSpec":
        return cls(d, SUBHARMONIC_CONE, defect_rows(d), ">=", offsets)

    @classmethod
    def harmonic_subspace(cls, d: GridDomain) -> "ConeSpec":
        return cls(d, HARMONIC_SUBSPACE, defect_rows(d), "==", 0.0)

    @classmethod
    def custom(cls, d: GridDomain, rows, relation: str = ">=",
               offsets=0.0) -> "ConeSpec":
        return cls(d, CUSTOM, rows, relation, offsets)

    @property
    def is_cone(self) -> bool:
        return bool(np.all(self.offsets == 0))

    def admits(self, h: GridFunction, tol: float = _FEAS_TOL) -> bool:
        """Whether h satisfies every row within tol."""
        act = self.domain.active_ids
        lhs = self.rows[:, act] @ h.values[act]
        if self.relation == ">=":
            return bool(np.all(lhs >= self.offsets - tol))
        return bool(np.abs(lhs - self.offsets).max(initial=0.0) <= tol)


@dataclass
class SweepCertificate:
    """Dual optimum packaged as a sweeping of nu.

    mu = nu + rows^T lambda holds componentwise on active nodes, with
    lambda >= 0 in cone mode (free on equality rows) and the constant
    charge c = -offsets . lambda (zero in cone mode).
    """

    lam: np.ndarray
    mu: DiscreteMeasure
    c: float = 0.0

    def residuals(self, spec: ConeSpec, nu: DiscreteMeasure) -> dict:
        """Substitution residuals; all small for a valid certificate."""
        act = spec.domain.active_ids
        recon = nu.weights[act] + spec.rows[:, act].T @ self.lam
        out = {
            "decomposition": float(
                np.abs(self.mu.weights[act] - recon).max(initial=0.0)),
            "mu_negativity": float(max(0.0, -self.mu.weights.min(initial=0.0))),
            "charge": abs(self.c - float(-spec.offsets @ self.lam)),
        }
        if spec.relation == ">=":
            out["lambda_negativity"] = float(
                max(0.0, -self.lam.min(initial=0.0)))
        return out

    def summary(self) -> dict:
        return {
            "lambda_mass": float(np.abs(self.lam).sum()),
            "mu_mass": self.mu.mass(),
            "c": float(self.c),
            "support_size": int(self.mu.support.size),
        }


def _require_measure(nu: DiscreteMeasure, spec: ConeSpec) -> None:
    _check_same_domain(nu.domain, spec.domain)
    if nu.mass() <= 0:
        raise ValueError("the functional measure must carry positive mass")


def supremal_value(d: GridDomain, H: ConeSpec, nu: DiscreteMeasure,
                   F: GridFunction, collect_trace: bool = False) -> dict:
    """Largest pairing <nu, h> over h in H with h <= F nodewise.

    Returns {"value", "argmax", "trace"}: value is -inf when no h fits
    (including any -inf ceiling entry), +inf when the pairing is
    unbounded, and argmax is the maximizing function when finite.
    Trace entries record primal-feasible iterates of the solve.
    """
    _check_same_domain(F.domain, d)
    _require_measure(nu, H)
    act = d.active_ids
    ceil = F.values[act]
    if np.any(ceil == -np.inf):
        return {"value": float("-inf"), "argmax": None, "trace": []}
    prog = LinearProgram(
        c=nu.weights[act],
        sense="max",
        A=H.rows[:, act],
        relations=(H.relation,) * H.rows.shape[0],
        b=H.offsets,
        lower=-np.inf,
        upper=ceil,
    )
    out = solve(prog, collect_trace=collect_trace)
    trace = out.trace or []
    if out.status == "INFEASIBLE":
        return {"value": float("-inf"), "argmax": None, "trace": trace}
    if out.status == "UNBOUNDED":
        return {"value": float("inf"), "argmax": None, "trace": trace}
    vals = np.zeros(d.nx * d.ny)
    vals[act] = out.x
    return {"value": float(out.value), "argmax": GridFunction(d, vals),
            "trace": trace, "outcome": out}


def _dual_program(d: GridDomain, H: ConeSpec, nu: DiscreteMeasure,
                  F: GridFunction, affine: bool):
    """Assemble min <F, mu> (+ charge) over mu = nu + rows^T lambda."""
    act = d.active_ids
    n_mu = act.size
    m = H.rows.shape[0]
    ceil = F.values[act]
    block = np.hstack([np.eye(n_mu), -H.rows[:, act].T])
    cost = np.concatenate([
        np.where(np.isfinite(ceil), ceil, 0.0),
        -H.offsets if affine else np.zeros(m),
    ])
    upper = np.full(n_mu + m, np.inf)
    upper[:n_mu][ceil == np.inf] = 0.0
    lower = np.zeros(n_mu + m)
    if H.relation == "==":
        lower[n_mu:] = -np.inf
    return LinearProgram(
        c=cost, sense="min", A=block,
        relations=("==",) * n_mu, b=nu.weights[act],
        lower=lower, upper=upper,
    ), act, n_mu, m


def _probe_negative_ceiling(prog: LinearProgram, neg_cols: np.ndarray) -> bool:
    """Whether the dual can place mass where the ceiling is -inf."""
    c = np.zeros(prog.c.size)
    c[neg_cols] = 1.0
    probe = LinearProgram(c=c, sense="max", A=prog.A,
                          relations=prog.relations, b=prog.b,
                          lower=prog.lower, upper=prog.upper)
    out = solve(probe)
    if out.status == "UNBOUNDED":
        return True
    return out.status == "OPTIMAL" and out.value > _FEAS_TOL


def _sweep(d: GridDomain, H: ConeSpec, nu: DiscreteMeasure,
           F: GridFunction, affine: bool) -> dict:
    _check_same_domain(F.domain, d)
    _require_measure(nu, H)
    prog, act, n_mu, m = _dual_program(d, H, nu, F, affine)
    ceil = F.values[act]
    neg = np.where(ceil == -np.inf)[0]
    if neg.size:
        if _probe_negative_ceiling(prog, neg):
            return {"value": float("-inf"), "certificate": None}
        prog.upper[neg] = 0.0
    out = solve(prog)
    if out.status == "INFEASIBLE":
        return {"value": float("inf"), "certificate": None}
    if out.status == "UNBOUNDED":
        return {"value": float("-inf"), "certificate": None}
    weights = np.zeros(d.nx * d.ny)
    weights[act] = np.maximum(out.x[:n_mu], 0.0)
    lam = out.x[n_mu:]
    charge = float(-H.offsets @ lam) if affine else 0.0
    cert = SweepCertificate(lam=lam, mu=DiscreteMeasure(d, weights), c=charge)
    return {"value": float(out.value), "certificate": cert}


def sweep_dual_value(d: GridDomain, H: ConeSpec, nu: DiscreteMeasure,
                     F: GridFunction) -> dict:
    """Cheapest sweeping of nu relative to the ceiling F, cone mode.

    Returns {"value", "certificate"}: the minimum of <F, mu> over
    mu = nu + rows^T lambda with mu >= 0 and admissible lambda, +inf
    when no sweeping exists, -inf when mass can sit on a -inf ceiling
    node or the objective is unbounded below.
    """
    if not H.is_cone:
        raise NotFeasible("cone-mode sweeping requires zero offsets")
    return _sweep(d, H, nu, F, affine=False)


def affine_sweep_dual(d: GridDomain, H: ConeSpec, nu: DiscreteMeasure,
                      F: GridFunction) -> dict:
    """Sweeping with a constant charge for convex-set constraint specs.

    Minimizes <F, mu> + c with c = -offsets . lambda >= 0; with zero
    offsets this reduces exactly to cone-mode sweeping.
    """
    return _sweep(d, H, nu, F, affine=True)


def jensen_verify(d: GridDomain, H: ConeSpec, nu: DiscreteMeasure,
                  mu: DiscreteMeasure, c: float = 0.0,
                  tol: float = _FEAS_TOL) -> bool:
    """Whether <h, nu> <= <h, mu> + c for every admissible h.

    Decided by minimizing <h, mu - nu> + c over H boxed into
    [-1, 1]^nodes; homogeneity extends the verdict to the whole cone.
    """
    _check_same_domain(nu.domain, d)
    _check_same_domain(mu.domain, d)
    act = d.active_ids
    prog = LinearProgram(
        c=mu.weights[act] - nu.weights[act],
        sense="min",
        A=H.rows[:, act],
        relations=(H.relation,) * H.rows.shape[0],
        b=H.offsets,
        lower=-1.0,
        upper=1.0,
    )
    out = solve(prog)
    if out.status != "OPTIMAL":
        raise NotFeasible("box-truncated class admits no function")
    return bool(out.value + c >= -tol)


def minorant_exists(d: GridDomain, H: ConeSpec, F: GridFunction) -> dict:
    """Feasibility of {h in H : h <= F} with witness or certificate.

    Returns {"exists", "h", "farkas"}: a feasible h when the system is
    solvable, otherwise an infeasibility certificate (a -inf ceiling
    node is reported directly).
    """
    _check_same_domain(F.domain, d)
    act = d.active_ids
    ceil = F.values[act]
    if np.any(ceil == -np.inf):
        node = int(act[np.where(ceil == -np.inf)[0][0]])
        return {"exists": False, "h": None,
                "farkas": {"kind": "minus_infinity_node", "node": node}}
    prog = LinearProgram(
        c=np.zeros(act.size),
        sense="min",
        A=H.rows[:, act],
        relations=(H.relation,) * H.rows.shape[0],
        b=H.offsets,
        lower=-np.inf,
        upper=ceil,
    )
    out = solve(prog)
    if out.status == "INFEASIBLE":
        return {"exists": False, "h": None, "farkas": out.certificate}
    vals = np.zeros(d.nx * d.ny)
    vals[act] = out.x
    return {"exists": True, "h": GridFunction(d, vals), "farkas": None}


def _token(v: float):
    if v == np.inf:
        return "+inf"
    if v == -np.inf:
        return "-inf"
    return float(v)


def duality_report(d: GridDomain, H: ConeSpec, nu: DiscreteMeasure,
                   F: GridFunction, tol: float = _GAP_TOL) -> dict:
    """Primal and dual values with gap classification, JSON-ready."""
    primal = supremal_value(d, H, nu, F)
    dual = affine_sweep_dual(d, H, nu, F) if not H.is_cone \
        else sweep_dual_value(d, H, nu, F)
    p, q = primal["value"], dual["value"]
    if np.isfinite(p) and np.isfinite(q):
        gap = abs(p - q)
        status = "tight" if gap <= tol * (1 + abs(p)) else "gap"
    elif p == q:
        gap, status = 0.0, "tight"
    else:
        gap, status = float("inf"), "degenerate"
    cert = dual["certificate"]
    return {
        "primal": _token(p),
        "dual": _token(q),
        "gap": _token(gap),
        "status": status,
        "certificate": cert.summary() if cert is not None else None,
    }

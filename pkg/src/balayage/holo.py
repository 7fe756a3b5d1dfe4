"""Function-theoretic criteria over grid domains.

Ties the envelope/duality layer to concrete weighted-class questions:
log-potentials of zero divisors, existence of harmonic minorants below
a weight, the constructive smooth-extend-solve pipeline, dyadic weight
transforms, and assembly of the discrete log-modulus field together
with its conjugate.  The analytic step that would turn these fields
into an actual holomorphic function is out of scope; reports mark it
as external.
"""

from dataclasses import dataclass, field

import numpy as np

from .duality import (ConeSpec, SweepCertificate, _token, affine_sweep_dual,
                      minorant_exists, supremal_value, sweep_dual_value)
from .errors import DomainMismatch, NotFeasible, SupportViolation
from .gridpotential import (INTERIOR, DiscreteMeasure, GridDomain,
                            GridFunction, SubDomain, _check_same_domain,
                            balayage, harmonic_conjugate, harmonic_extension)
from .smoothing import (RadiusField, ball_average, distance_to_nodes,
                        refine_radius, variable_smooth)

__all__ = [
    "Divisor", "CriterionReport", "divisor_log_potential", "uq_potential",
    "minorant_criterion", "theorem71_pipeline", "weight_transform",
    "zero_set_construct", "field_csv",
]


@dataclass
class Divisor:
    """Finite multiset of zeros: ((x, y), multiplicity) atoms."""

    atoms: list

    def __post_init__(self):
        cleaned = []
        for entry in self.atoms:
            (ax, ay), mult = entry
            if mult != int(mult) or int(mult) < 1:
                raise ValueError("multiplicities must be positive integers")
            cleaned.append(((float(ax), float(ay)), int(mult)))
        self.atoms = cleaned

    def degree(self) -> int:
        return sum(m for _, m in self.atoms)


@dataclass
class CriterionReport:
    """Outcome of a minorant criterion run.

    When feasible, h is an admissible field with u + h <= M + C on the
    active nodes (C minimal, floored at zero), dual_value the matching
    sweeping optimum, and certificate its measure decomposition.
    transformed_weight carries the effective ceiling when the run
    involved a smoothing or transform step.  diagnostics holds scalar
    residuals verified during construction.
    """

    feasible: bool
    h: GridFunction = None
    C: float = None
    dual_value: float = float("-inf")
    certificate: SweepCertificate = None
    transformed_weight: GridFunction = None
    diagnostics: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "feasible": bool(self.feasible),
            "C": None if self.C is None else float(self.C),
            "dual_value": _token(self.dual_value),
            "certificate": (None if self.certificate is None
                            else self.certificate.summary()),
            "diagnostics": _jsonable(self.diagnostics),
            "analytic_step": "external",
            "h_csv": None if self.h is None else field_csv(self.h),
            "transformed_weight_csv": (
                None if self.transformed_weight is None
                else field_csv(self.transformed_weight)),
        }


def _jsonable(v):
    """Recursive JSON-safe copy; infinities become string tokens."""
    if isinstance(v, dict):
        return {k: _jsonable(w) for k, w in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(w) for w in v]
    if isinstance(v, np.ndarray):
        return [_jsonable(float(w)) for w in v.reshape(-1)]
    if isinstance(v, (float, np.floating)):
        return _token(float(v))
    if isinstance(v, (int, np.integer)):
        return int(v)
    return v


def field_csv(g: GridFunction) -> str:
    """Active nodes as CSV text with header ix,iy,x,y,value."""
    d = g.domain
    xs, ys = d.coordinate_arrays()
    lines = ["ix,iy,x,y,value"]
    for nid in d.active_ids:
        ix, iy = d.node_ixy(nid)
        lines.append(f"{ix},{iy},{float(xs[nid])!r},{float(ys[nid])!r},"
                     f"{_token(float(g.values[nid]))}")
    return "\n".join(lines) + "\n"


def divisor_log_potential(z: Divisor, d: GridDomain) -> GridFunction:
    """Sum of m * log|node - atom| with the near-field clip.

    Distances are floored at half a lattice step, so a node sitting on
    an atom contributes m * log(h/2) instead of -inf; the singularity
    keeps its cell scale while every value stays finite.
    """
    xs, ys = d.coordinate_arrays()
    hs = d.spacing
    vals = np.zeros(d.nx * d.ny)
    for (ax, ay), mult in z.atoms:
        jx = int(round((ax - d.origin[0]) / hs))
        jy = int(round((ay - d.origin[1]) / hs))
        if not (0 <= jx < d.nx and 0 <= jy < d.ny
                and d.active_mask[d.node_id(jx, jy)]):
            raise ValueError(f"divisor atom ({ax}, {ay}) outside the domain")
        dist = np.hypot(xs - ax, ys - ay)
        vals += mult * np.log(np.maximum(dist, 0.5 * hs))
    return GridFunction(d, vals)


def _as_log_modulus(q, domain: GridDomain) -> GridFunction:
    if isinstance(q, Divisor):
        return divisor_log_potential(q, domain)
    _check_same_domain(q.domain, domain)
    return q


def uq_potential(q1, q2, mode: str = "max",
                 domain: GridDomain = None) -> GridFunction:
    """Joint log-modulus of a pair of fields or divisors.

    mode="max" takes the pointwise larger log-modulus; mode="sqrt_sum"
    returns log sqrt(|q1|^2 + |q2|^2), evaluated in log space so large
    moduli cannot overflow.
    """
    if domain is None:
        for q in (q1, q2):
            if isinstance(q, GridFunction):
                domain = q.domain
                break
        else:
            raise ValueError("a domain is required when both inputs "
                             "are divisors")
    u1 = _as_log_modulus(q1, domain)
    u2 = _as_log_modulus(q2, domain)
    if mode == "max":
        vals = np.maximum(u1.values, u2.values)
    elif mode == "sqrt_sum":
        vals = 0.5 * np.logaddexp(2.0 * u1.values, 2.0 * u2.values)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return GridFunction(domain, vals)


def _ceiling_minus(M: GridFunction, u: GridFunction) -> GridFunction:
    """Extended-real ceiling M - u; vacuous where u, M make h free."""
    Mv, uv = M.values, u.values
    vacuous = (uv == -np.inf) | (Mv == np.inf)
    blocked = ~vacuous & ((Mv == -np.inf) | (uv == np.inf))
    out = np.zeros_like(Mv)
    fin = ~vacuous & ~blocked
    out[fin] = Mv[fin] - uv[fin]
    out[vacuous] = np.inf
    out[blocked] = -np.inf
    return GridFunction(M.domain, out)


def _max_deficit(uv, hv, Mv, act) -> float:
    """Largest u + h - M over active nodes, minding infinities."""
    u, h, M = uv[act], hv[act], Mv[act]
    live = (u > -np.inf) & (M < np.inf)
    if np.any(live & ((M == -np.inf) | (u == np.inf))):
        return float("inf")
    vals = u[live] + h[live] - M[live]
    return float(vals.max(initial=-np.inf))


def _dual_route(d, H, nu, F) -> dict:
    return (sweep_dual_value(d, H, nu, F) if H.is_cone
            else affine_sweep_dual(d, H, nu, F))


def minorant_criterion(u: GridFunction, M: GridFunction, H: ConeSpec,
                       nu: DiscreteMeasure) -> CriterionReport:
    """Decide whether some h in H keeps u + h below M plus a constant.

    Solves the envelope problem with ceiling M - u; feasibility is a
    finite-or-unbounded primal value, h the maximizing field, and C
    the smallest nonnegative constant with u + h <= M + C nodewise.
    The dual side returns the cheapest sweeping of nu, so feasibility
    here coincides with the integral criterion against all sweepings.
    """
    d = u.domain
    _check_same_domain(M.domain, d)
    F = _ceiling_minus(M, u)
    primal = supremal_value(d, H, nu, F)
    dual = _dual_route(d, H, nu, F)
    feasible = primal["value"] > -np.inf
    h = primal["argmax"]
    C = None
    diagnostics = {"primal_value": float(primal["value"])}
    if feasible and h is not None:
        C = max(0.0, _max_deficit(u.values, h.values, M.values, d.active_ids))
    if not feasible:
        diagnostics["farkas"] = minorant_exists(d, H, F)["farkas"]
    return CriterionReport(
        feasible=feasible, h=h, C=C, dual_value=dual["value"],
        certificate=dual["certificate"], diagnostics=diagnostics,
    )


def theorem71_pipeline(F: GridFunction, nu: DiscreteMeasure, U0: SubDomain,
                       U1: SubDomain, r: RadiusField,
                       H: ConeSpec) -> CriterionReport:
    """Constructive chain: refine, smooth, extend, solve, verify.

    Refines the radius field between U0 and U1, smooths the ceiling F
    with it, replaces the smoothed ceiling inside U1 by its harmonic
    extension, and solves the envelope problem against the extended
    ceiling.  The returned h satisfies h <= F_smoothed + C with the
    smallest such nonnegative C.  Because extension and sweeping onto
    the U1 boundary are adjoint, the certificate measure pairs equally
    with the extended ceiling and with the smoothed one after
    sweeping; the verified residual is logged in diagnostics.
    """
    d = F.domain
    _check_same_domain(nu.domain, d)
    if not np.all(U0.member_mask[nu.support]):
        raise SupportViolation("nu must be supported inside U0")
    rhat = refine_radius(r, d, U0, U1)
    Fsm = variable_smooth(F, rhat)
    Fbal = harmonic_extension(Fsm, d, U1)
    primal = supremal_value(d, H, nu, Fbal)
    dual = _dual_route(d, H, nu, Fbal)
    feasible = primal["value"] > -np.inf
    h = primal["argmax"]
    act = d.active_ids
    zero = np.zeros(d.nx * d.ny)
    C = None
    if feasible and h is not None:
        C = max(0.0, _max_deficit(zero, h.values, Fsm.values, act))
    diagnostics = {
        "primal_value": float(primal["value"]),
        "extension_gap": float(
            (Fbal.values[act] - Fsm.values[act]).max(initial=0.0)),
    }
    cert = dual["certificate"]
    if cert is not None:
        swept = balayage(cert.mu, d, U1)
        diagnostics["pairing_identity_residual"] = abs(
            cert.mu.integrate(Fbal) - swept.integrate(Fsm))
    return CriterionReport(
        feasible=feasible, h=h, C=C, dual_value=dual["value"],
        certificate=cert, transformed_weight=Fsm, diagnostics=diagnostics,
    )


def _radius_values(dfield, d: GridDomain) -> np.ndarray:
    if isinstance(dfield, RadiusField):
        _check_same_domain(dfield.domain, d)
        return dfield.values
    vals = np.asarray(dfield, dtype=float)
    if vals.shape == (d.ny, d.nx):
        vals = vals.reshape(-1)
    if vals.shape != (d.nx * d.ny,):
        raise DomainMismatch("radius values do not match the lattice")
    return vals


def weight_transform(M: GridFunction, mode: str = "inf_dyadic", *,
                     a: float = 1.0, depth: int = 8, rhat: RadiusField = None,
                     dfield=None, ratio_bound: float = None) -> GridFunction:
    """Averaged weight with the scale penalty and growth tail.

    Both modes evaluate ball_average(M, z, d) + log(1/d) plus the tail
    (1 + a) * log(2 + |z|) in the planar normalization.  inf_dyadic
    minimizes over the dyadic radii d_max(z)/2, d_max(z)/4, ... down
    to depth steps, where d_max(z) caps the distance to the boundary
    at one; dyadic radii finer than the lattice step are skipped, and
    nodes with no usable radius keep their original value.  fixed_d
    uses a caller-supplied radius field and, when ratio_bound is
    given, requires it to vary by at most that factor between
    neighbor nodes; nodes where the radius reaches min(1, boundary
    distance) fall outside the admissible range and keep their
    original value, while an admissible radius finer than the lattice
    step propagates the averaging error.
    """
    d = M.domain
    if a <= 0:
        raise ValueError("the growth exponent a must be positive")
    xs, ys = d.coordinate_arrays()
    modulus = np.hypot(xs, ys)
    tail = (1.0 + a) * np.log(2.0 + modulus)
    hs = d.spacing
    dist_bd = distance_to_nodes(d, d.boundary_ids)
    out = M.values.copy()
    base = variable_smooth(M, rhat) if rhat is not None else M

    if mode == "inf_dyadic":
        if depth < 1:
            raise ValueError("dyadic depth must be at least 1")
        for nid in d.active_ids:
            dmax = min(1.0, float(dist_bd[nid]))
            best = np.inf
            for j in range(1, depth + 1):
                rad = dmax * 0.5 ** j
                if rad < hs * (1.0 - 1e-12):
                    break
                best = min(best, ball_average(base, int(nid), rad)
                           + np.log(1.0 / rad))
            if np.isfinite(best):
                out[nid] = best + tail[nid]
        return GridFunction(d, out)

    if mode == "fixed_d":
        if dfield is None:
            raise ValueError("fixed_d mode needs a radius field")
        dvals = _radius_values(dfield, d)
        interior = d.interior_ids
        live = interior[dvals[interior]
                        < np.minimum(1.0, dist_bd[interior])]
        if ratio_bound is not None:
            for nid in live:
                for nbr in d.neighbors(int(nid)):
                    if d.roles[nbr] == INTERIOR and dvals[nid] > (
                            ratio_bound * dvals[nbr] + 1e-12):
                        raise ValueError("radius field varies faster than "
                                         "the ratio bound")
        for nid in live:
            out[nid] = (ball_average(base, int(nid), float(dvals[nid]))
                        + np.log(1.0 / dvals[nid]) + tail[nid])
        return GridFunction(d, out)

    raise ValueError(f"unknown mode {mode!r}")


def zero_set_construct(z: Divisor, M: GridFunction, z0: int) -> dict:
    """Harmonic completion of a divisor below a weight.

    Runs the minorant criterion for u the divisor potential against M
    over the harmonic subspace with a unit atom at z0, then assembles
    the discrete log-modulus log_f = u + h and the conjugate of h
    anchored at z0.  Raises NotFeasible when no harmonic field fits
    and MultiplyConnected when the domain cannot carry a single-valued
    conjugate.
    """
    d = M.domain
    u = divisor_log_potential(z, d)
    H = ConeSpec.harmonic_subspace(d)
    nu = DiscreteMeasure.delta(d, int(z0))
    report = minorant_criterion(u, M, H, nu)
    if not report.feasible or report.h is None:
        raise NotFeasible("no harmonic field fits below the weight")
    conj = harmonic_conjugate(report.h, d, int(z0))
    log_f = GridFunction(d, u.values + report.h.values)
    return {
        "h": report.h,
        "g_conjugate": conj.v,
        "log_f": log_f,
        "report": report,
        "conjugate_residue": float(conj.max_cell_residue),
    }

"""File-driven command line front end.

A problem spec is a single JSON document naming a command plus the
grid, fields, measures, cone, and parameters it needs.  Runs write a
deterministic report.json (sorted keys, "+inf"/"-inf" tokens for
extended reals), node fields as CSV, and optional P2 graymap
heatmaps.  Exit codes: 0 success, 2 criterion infeasible, 1 any
error.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .duality import (ConeSpec, _token, affine_sweep_dual, jensen_verify,
                      supremal_value, sweep_dual_value)
from .errors import Error, ParseError
from .gridpotential import (DiscreteMeasure, GridDomain, GridFunction,
                            SubDomain, balayage)
from .holo import (Divisor, _jsonable, divisor_log_potential, field_csv,
                   minorant_criterion, theorem71_pipeline, weight_transform)
from .order import SampledFunction, lower_envelope, minorant_formula
from .projlattice import FiniteSupremalSpec, sup_projection
from .smoothing import RadiusField

COMMANDS = ("envelope", "projlattice", "supremal", "dual", "balayage",
            "pipeline", "criterion", "transform")


def _untoken(v):
    if v == "+inf":
        return float("inf")
    if v == "-inf":
        return float("-inf")
    return float(v)


@dataclass
class ProblemSpec:
    """Parsed problem document; to_dict/from_dict round-trip exactly."""

    command: str
    grid: dict = None
    weight: list = None
    measure: list = None
    divisor: list = None
    cone: dict = None
    params: dict = field(default_factory=dict)
    seed: int = 0

    @classmethod
    def from_dict(cls, doc) -> "ProblemSpec":
        if not isinstance(doc, dict):
            raise ParseError("problem spec must be a JSON object")
        command = doc.get("command")
        if command not in COMMANDS:
            raise ParseError(f"unknown command {command!r}")
        weight = doc.get("weight", doc.get("F"))
        ps = cls(
            command=command,
            grid=doc.get("grid"),
            weight=weight,
            measure=doc.get("measure"),
            divisor=doc.get("divisor"),
            cone=doc.get("cone"),
            params=doc.get("params") or {},
            seed=int(doc.get("seed", 0)),
        )
        ps.validate()
        return ps

    def validate(self):
        grid_cmds = {"supremal", "dual", "balayage", "pipeline",
                     "criterion", "transform"}
        if self.command in grid_cmds:
            g = self.grid
            if not isinstance(g, dict) or "nx" not in g or "ny" not in g:
                raise ParseError("grid needs nx and ny")
        for key in ("U0", "U1"):
            rect = self.params.get(key)
            if rect is not None and (len(rect) != 4
                                     or rect[0] > rect[2]
                                     or rect[1] > rect[3]):
                raise ParseError(f"{key} must be [ix0, iy0, ix1, iy1]")
        u0, u1 = self.params.get("U0"), self.params.get("U1")
        if u0 is not None and u1 is not None:
            if not (u1[0] <= u0[0] and u1[1] <= u0[1]
                    and u0[2] <= u1[2] and u0[3] <= u1[3]):
                raise ParseError("U0 must nest inside U1")

    def to_dict(self) -> dict:
        doc = {"command": self.command, "params": self.params,
               "seed": self.seed}
        for key in ("grid", "weight", "measure", "divisor", "cone"):
            v = getattr(self, key)
            if v is not None:
                doc[key] = v
        return doc


# -- construction from spec pieces -------------------------------------


def _build_domain(ps: ProblemSpec) -> GridDomain:
    g = ps.grid
    spacing = float(g.get("spacing", 1.0))
    origin = tuple(g.get("origin", (0.0, 0.0)))
    mask = g.get("mask")
    try:
        if mask is not None:
            return GridDomain(np.asarray(mask, dtype=np.int8),
                              spacing=spacing, origin=origin)
        return GridDomain.rectangle(int(g["nx"]), int(g["ny"]),
                                    spacing=spacing, origin=origin)
    except Error:
        raise
    except (TypeError, ValueError) as e:
        raise ParseError(f"bad grid: {e}")


def _build_field(ps: ProblemSpec, d: GridDomain, raw) -> GridFunction:
    if raw is None:
        return GridFunction.constant(d, 0.0)
    if isinstance(raw, dict):
        if "constant" in raw:
            return GridFunction.constant(d, _untoken(raw["constant"]))
        expr = raw.get("expr")
        if expr == "zero":
            return GridFunction.constant(d, 0.0)
        if expr in ("divisor_potential", "neg_divisor_potential"):
            u = divisor_log_potential(_build_divisor(ps), d)
            if expr.startswith("neg"):
                return GridFunction(d, -u.values)
            return u
        if expr == "radial_sq":
            return GridFunction.from_callable(d, lambda x, y: x * x + y * y)
        raise ParseError(f"unknown field expression {raw!r}")
    try:
        vals = np.array([[_untoken(v) for v in row] for row in raw])
        return GridFunction(d, vals)
    except Error:
        raise
    except (TypeError, ValueError) as e:
        raise ParseError(f"bad field array: {e}")


def _build_measure(ps: ProblemSpec, d: GridDomain) -> DiscreteMeasure:
    if not ps.measure:
        raise ParseError("command needs a measure")
    w = np.zeros(d.nx * d.ny)
    try:
        for ix, iy, val in ps.measure:
            w[d.node_id(int(ix), int(iy))] += float(val)
    except (TypeError, ValueError, IndexError) as e:
        raise ParseError(f"bad measure entry: {e}")
    return DiscreteMeasure(d, w)


def _build_divisor(ps: ProblemSpec) -> Divisor:
    atoms = [((float(x), float(y)), int(m))
             for x, y, m in (ps.divisor or [])]
    return Divisor(atoms)


def _build_cone(ps: ProblemSpec, d: GridDomain) -> ConeSpec:
    doc = ps.cone or {"kind": "subharmonic"}
    kind = doc.get("kind", "subharmonic")
    if kind == "subharmonic":
        return ConeSpec.subharmonic_cone(d, offsets=doc.get("offsets", 0.0))
    if kind == "harmonic":
        return ConeSpec.harmonic_subspace(d)
    if kind == "custom":
        try:
            rows = np.asarray(doc["rows"], dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"bad custom cone rows: {e}")
        return ConeSpec(d, "custom", rows, doc.get("relation", ">="),
                        doc.get("offsets", 0.0))
    raise ParseError(f"unknown cone kind {kind!r}")


def _build_rect(ps: ProblemSpec, d: GridDomain, key: str) -> SubDomain:
    rect = ps.params.get(key)
    if rect is None:
        raise ParseError(f"command needs params.{key}")
    ix0, iy0, ix1, iy1 = (int(v) for v in rect)
    return SubDomain.from_rect(d, ix0, iy0, ix1, iy1)


def _build_radius(ps: ProblemSpec, d: GridDomain) -> RadiusField:
    raw = ps.params.get("radius")
    if raw is None:
        raise ParseError("command needs params.radius")
    if isinstance(raw, (int, float)):
        return RadiusField.constant(d, float(raw))
    return RadiusField(d, np.asarray(raw, dtype=float))


def _gap_status(p: float, q: float, tol: float):
    if np.isfinite(p) and np.isfinite(q):
        gap = abs(p - q)
        return gap, ("tight" if gap <= tol * (1 + abs(p)) else "gap")
    if p == q:
        return 0.0, "tight"
    return float("inf"), "degenerate"


# -- command handlers ---------------------------------------------------


def _run_supremal(ps: ProblemSpec, tol: float):
    d = _build_domain(ps)
    H = _build_cone(ps, d)
    nu = _build_measure(ps, d)
    F = _build_field(ps, d, ps.weight)
    primal = supremal_value(d, H, nu, F)
    dual = (sweep_dual_value if H.is_cone else affine_sweep_dual)(d, H, nu, F)
    gap, status = _gap_status(primal["value"], dual["value"], tol)
    cert = dual["certificate"]
    report = {"status": status, "primal": _token(primal["value"]),
              "dual": _token(dual["value"]), "gap": _token(gap), "C": None,
              "certificate": None if cert is None else cert.summary()}
    fields = {}
    if primal["argmax"] is not None:
        fields["argmax"] = primal["argmax"]
    if cert is not None:
        fields["dual_measure"] = GridFunction(d, cert.mu.weights)
        report["jensen_verified"] = jensen_verify(d, H, nu, cert.mu, cert.c)
    return report, fields, 0


def _run_envelope(ps: ProblemSpec, tol: float):
    p = ps.params
    try:
        samples = [(row[:-1], row[-1]) for row in p["samples"]]
        f = SampledFunction.from_pairs(samples)
        queries = [tuple(float(v) for v in q) for q in p["queries"]]
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise ParseError(f"bad envelope params: {e}")
    mode = p.get("mode", "conic")
    family = "affine" if mode == "convex" else "linear"
    primal = [lower_envelope(f, q, family) for q in queries]
    dual = [minorant_formula(f, q, mode) for q in queries]
    worst, status = 0.0, "tight"
    for a, b in zip(primal, dual):
        g, s = _gap_status(a, b, tol)
        if g > worst:
            worst = g
        if s != "tight":
            status = s
    report = {"status": status, "primal": [_token(v) for v in primal],
              "dual": [_token(v) for v in dual], "gap": _token(worst),
              "C": None, "certificate": None,
              "mode": mode, "family": family}
    return report, {}, 0


def _run_projlattice(ps: ProblemSpec, tol: float):
    p = ps.params
    try:
        spec = FiniteSupremalSpec(
            elements=tuple(tuple(e) for e in p["elements"]),
            q1_weights=p.get("q1", 1.0),
            depth=int(p["depth"]),
        )
        level = int(p["level"])
        point = tuple(float(v) for v in p["point"])
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"bad projlattice params: {e}")
    value = sup_projection(spec, level, point,
                           tail_bound=p.get("tail_bound"))
    # independent route: best functional over dominated projections
    direct = float("-inf")
    for h in spec.elements:
        if all(a <= b for a, b in zip(h.project(level), point)):
            direct = max(direct, spec.q(h))
    gap, status = _gap_status(value, direct, tol)
    report = {"status": status, "primal": _token(value),
              "dual": _token(direct), "gap": _token(gap),
              "C": None, "certificate": None, "level": level}
    return report, {}, 0


def _run_balayage(ps: ProblemSpec, tol: float):
    d = _build_domain(ps)
    mu = _build_measure(ps, d)
    U1 = _build_rect(ps, d, "U1")
    swept = balayage(mu, d, U1)
    err = abs(mu.mass() - swept.mass())
    report = {"status": "ok" if err <= 1e-12 * (1 + mu.mass()) else "gap",
              "mass_in": mu.mass(), "mass_out": swept.mass(),
              "mass_error": err, "C": None, "certificate": None}
    fields = {"measure": GridFunction(d, mu.weights),
              "swept": GridFunction(d, swept.weights)}
    return report, fields, 0


def _run_criterion(ps: ProblemSpec, tol: float):
    d = _build_domain(ps)
    H = _build_cone(ps, d)
    nu = _build_measure(ps, d)
    M = _build_field(ps, d, ps.weight)
    u = divisor_log_potential(_build_divisor(ps), d)
    rep = minorant_criterion(u, M, H, nu)
    return _criterion_report(rep, tol, {"u": u, "M": M})


def _run_pipeline(ps: ProblemSpec, tol: float):
    d = _build_domain(ps)
    H = _build_cone(ps, d)
    nu = _build_measure(ps, d)
    F = _build_field(ps, d, ps.weight)
    U0 = _build_rect(ps, d, "U0")
    U1 = _build_rect(ps, d, "U1")
    r = _build_radius(ps, d)
    rep = theorem71_pipeline(F, nu, U0, U1, r, H)
    return _criterion_report(rep, tol, {"F": F})


def _criterion_report(rep, tol: float, extra_fields: dict):
    primal = rep.diagnostics.get("primal_value", float("-inf"))
    gap, status = _gap_status(primal, rep.dual_value, tol)
    report = {"status": status, "primal": _token(primal),
              "dual": _token(rep.dual_value), "gap": _token(gap),
              "C": rep.C, "feasible": rep.feasible,
              "certificate": (None if rep.certificate is None
                              else rep.certificate.summary()),
              "diagnostics": _jsonable(
                  {k: v for k, v in rep.diagnostics.items()
                   if k != "primal_value"}),
              "analytic_step": "external"}
    if "farkas" in rep.diagnostics:
        report["farkas"] = _jsonable(rep.diagnostics["farkas"])
    fields = dict(extra_fields)
    if rep.h is not None:
        fields["h"] = rep.h
    if rep.transformed_weight is not None:
        fields["transformed_weight"] = rep.transformed_weight
    return report, fields, 0 if rep.feasible else 2


def _run_transform(ps: ProblemSpec, tol: float):
    d = _build_domain(ps)
    M = _build_field(ps, d, ps.weight)
    p = ps.params
    mode = p.get("mode", "inf_dyadic")
    kwargs = {"a": float(p.get("a", 1.0))}
    if mode == "inf_dyadic":
        kwargs["depth"] = int(p.get("depth", 8))
    else:
        raw = p.get("d")
        if raw is None:
            raise ParseError("fixed_d transform needs params.d")
        kwargs["dfield"] = (np.full(d.nx * d.ny, float(raw))
                            if isinstance(raw, (int, float))
                            else np.asarray(raw, dtype=float))
        if p.get("ratio_bound") is not None:
            kwargs["ratio_bound"] = float(p["ratio_bound"])
    if p.get("rhat") is not None:
        kwargs["rhat"] = RadiusField.constant(d, float(p["rhat"]))
    Mt = weight_transform(M, mode, **kwargs)
    report = {"status": "ok", "mode": mode, "a": kwargs["a"],
              "C": None, "certificate": None}
    return report, {"weight": M, "transformed": Mt}, 0


_HANDLERS = {
    "envelope": _run_envelope,
    "projlattice": _run_projlattice,
    "supremal": _run_supremal,
    "dual": _run_supremal,
    "balayage": _run_balayage,
    "pipeline": _run_pipeline,
    "criterion": _run_criterion,
    "transform": _run_transform,
}


# -- emission -----------------------------------------------------------


def _atomic_write(path: str, text: str):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def field_pgm(g: GridFunction, levels: int = 255) -> str:
    """P2 graymap of the active nodes, linear min-max scaled."""
    d = g.domain
    vals = g.values
    act = d.active_mask
    finite = act & np.isfinite(vals)
    if finite.any():
        lo, hi = vals[finite].min(), vals[finite].max()
    else:
        lo, hi = 0.0, 1.0
    span = hi - lo if hi > lo else 1.0
    pix = np.zeros(vals.shape, dtype=int)
    pix[finite] = np.rint((vals[finite] - lo) / span * levels).astype(int)
    pix[act & (vals == np.inf)] = levels
    lines = [f"P2\n{d.nx} {d.ny}\n{levels}"]
    for iy in range(d.ny - 1, -1, -1):
        row = pix[iy * d.nx:(iy + 1) * d.nx]
        lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def _emit(out_dir: str, report: dict, fields: dict, fmt: str):
    os.makedirs(out_dir, exist_ok=True)
    written = {}
    if fmt in ("csv", "all"):
        for name, g in sorted(fields.items()):
            fname = f"{name}.csv"
            _atomic_write(os.path.join(out_dir, fname), field_csv(g))
            written[name] = fname
    if fmt in ("pgm", "all"):
        for name, g in sorted(fields.items()):
            fname = f"{name}.pgm"
            _atomic_write(os.path.join(out_dir, fname), field_pgm(g))
    if written:
        report = dict(report, field_files=written)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    _atomic_write(os.path.join(out_dir, "report.json"), text)


def run(spec_path: str, out_dir: str, *, tol: float = 1e-7,
        fmt: str = "all", seed: int = None, quiet: bool = False) -> int:
    """Execute a problem spec file; returns the process exit code."""
    try:
        with open(spec_path) as fh:
            doc = json.load(fh)
    except OSError as e:
        print(f"error: cannot read spec: {e}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as e:
        print(f"error: spec is not valid JSON: {e}", file=sys.stderr)
        return 1
    try:
        ps = ProblemSpec.from_dict(doc)
        if seed is not None:
            ps.seed = int(seed)
        report, fields, code = _HANDLERS[ps.command](ps, tol)
        report = dict(report, command=ps.command, seed=ps.seed,
                      problem=ps.to_dict())
        _emit(out_dir, report, fields, fmt)
    except (Error, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: cannot write outputs: {e}", file=sys.stderr)
        return 1
    if not quiet:
        print(f"{ps.command}: status={report.get('status')} exit={code} "
              f"report={os.path.join(out_dir, 'report.json')}")
    return code


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="balayage",
        description="Envelope, sweeping, and criterion runs from JSON "
                    "problem specs.")
    parser.add_argument("--input", "-i", required=True,
                        help="problem spec JSON file")
    parser.add_argument("--out-dir", "-o", required=True,
                        help="directory for report.json and fields")
    parser.add_argument("--tol", type=float, default=1e-7,
                        help="gap classification tolerance")
    parser.add_argument("--format", choices=("json", "csv", "pgm", "all"),
                        default="all", dest="fmt",
                        help="which artifacts to write")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the spec seed")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress the summary line")
    args = parser.parse_args(argv)
    return run(args.input, args.out_dir, tol=args.tol, fmt=args.fmt,
               seed=args.seed, quiet=args.quiet)


if __name__ == "__main__":
    sys.exit(main())

"""Extended-real arithmetic and envelopes of finitely sampled functions.

Values live on the extended real line [-inf, +inf], stored as IEEE
float64.  Python's float almost implements the conventions we need; the
two gaps (inf - inf -> nan, 0 * inf -> nan) are closed by the helpers
here, which either return the convention value or raise:

  * a + b with {a, b} = {-inf, +inf} raises UndefinedSum,
  * t * (+-inf) = +-inf for finite t > 0, flips sign for t < 0,
  * 0 * (+-inf) = 0,
  * sup over an empty set is -inf, inf over an empty set is +inf.

A SampledFunction is a finite list of distinct points in R^d with finite
values.  Two envelope constructions are provided and agree pointwise by
finite-dimensional LP duality:

  * minorant_formula: value at x of the greatest sublinear (mode
    "conic") or convex (mode "convex") minorant, computed as the optimal
    mixing of sample values subject to the mass constraints.  An empty
    feasible set yields +inf, an unbounded one -inf.
  * lower_envelope: supremum at x over all linear (family "linear") or
    affine (family "affine") functions dominated by the samples.  An
    empty family yields -inf, an unbounded supremum +inf.

Both are thin wrappers over the simplex solver; the interesting content
is the outcome-to-extended-real mapping, which is exactly dual between
the two routines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InfiniteValue, UndefinedSum
from .simplex import LinearProgram, solve

ExtReal = float

NEG_INF = float("-inf")
POS_INF = float("inf")

# Hard caps keep the dense LP formulations small and exact.
MAX_DIM = 8
MAX_POINTS = 64


def ext_add(a: float, b: float) -> float:
    """Sum of two extended reals; opposite infinities are rejected."""
    if math.isnan(a) or math.isnan(b):
        raise ValueError("nan is not an extended real")
    if math.isinf(a) and math.isinf(b) and (a > 0) != (b > 0):
        raise UndefinedSum("(-inf) + (+inf) has no value")
    return a + b


def ext_scale(t: float, x: float) -> float:
    """Product t * x for finite t; 0 * (+-inf) = 0."""
    if math.isnan(t) or math.isnan(x):
        raise ValueError("nan is not an extended real")
    if math.isinf(t):
        raise InfiniteValue("scale factor must be finite")
    if t == 0.0:
        return 0.0
    return t * x


def ext_combine(a: float, b: float, op: str = "add") -> float:
    """Combine two extended reals.

    Parameters
    ----------
    a, b : float
        Operands.  For op "scale", `a` is the finite factor and `b` the
        extended real being scaled.
    op : str
        Either "add" or "scale".

    Returns
    -------
    float
        The combined value under the module conventions.
    """
    if op == "add":
        return ext_add(a, b)
    if op == "scale":
        return ext_scale(a, b)
    raise ValueError(f"unknown op {op!r}")


def ext_sup(values) -> float:
    """Supremum of an iterable of extended reals; empty -> -inf."""
    best = NEG_INF
    for v in values:
        if math.isnan(v):
            raise ValueError("nan is not an extended real")
        if v > best:
            best = v
    return best


def ext_inf(values) -> float:
    """Infimum of an iterable of extended reals; empty -> +inf."""
    best = POS_INF
    for v in values:
        if math.isnan(v):
            raise ValueError("nan is not an extended real")
        if v < best:
            best = v
    return best


def ext_dot(weights, values) -> float:
    """Sum of w * v over pairs, for finite weights w >= 0.

    Zero weights kill infinities (0 * inf = 0).  A positive weight on
    +inf together with a positive weight on -inf raises UndefinedSum.
    """
    pos_inf_hit = False
    neg_inf_hit = False
    total = 0.0
    for w, v in zip(weights, values):
        if w < 0 or math.isinf(w) or math.isnan(w):
            raise ValueError("weights must be finite and nonnegative")
        if w == 0.0:
            continue
        if math.isinf(v):
            if v > 0:
                pos_inf_hit = True
            else:
                neg_inf_hit = True
        else:
            total += w * v
    if pos_inf_hit and neg_inf_hit:
        raise UndefinedSum("measure pairs +inf against -inf")
    if pos_inf_hit:
        return POS_INF
    if neg_inf_hit:
        return NEG_INF
    return total


@dataclass(frozen=True)
class SampledFunction:
    """Finite function sample: distinct points in R^d with finite values."""

    points: np.ndarray
    values: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if pts.ndim != 2:
            raise DimensionMismatch("points must be a (k, d) array")
        k, d = pts.shape
        if k < 1:
            raise ValueError("need at least one sample point")
        if k > MAX_POINTS or d > MAX_DIM or d < 1:
            raise ValueError(
                f"sample size limits: k <= {MAX_POINTS}, 1 <= d <= {MAX_DIM}"
            )
        if vals.shape != (k,):
            raise DimensionMismatch("values must be a (k,) array")
        if not np.all(np.isfinite(pts)):
            raise InfiniteValue("sample points must be finite")
        if not np.all(np.isfinite(vals)):
            raise InfiniteValue("sample values must be finite")
        seen = {tuple(row) for row in pts}
        if len(seen) != k:
            raise ValueError("sample points must be distinct")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "dim", d)

    @classmethod
    def from_pairs(cls, pairs) -> "SampledFunction":
        pts = [np.atleast_1d(np.asarray(p, dtype=float)) for p, _ in pairs]
        vals = [float(v) for _, v in pairs]
        return cls(np.vstack(pts), np.asarray(vals))

    def __len__(self) -> int:
        return self.points.shape[0]


def _check_query(f: SampledFunction, x) -> np.ndarray:
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if xv.shape != (f.dim,):
        raise DimensionMismatch(
            f"query point has shape {xv.shape}, expected ({f.dim},)"
        )
    if not np.all(np.isfinite(xv)):
        raise InfiniteValue("query point must be finite")
    return xv


def minorant_formula(f: SampledFunction, x, mode: str = "conic") -> float:
    """Greatest sublinear or convex minorant of `f`, evaluated at `x`.

    The value is the optimal cost of mixing sample values: minimize
    sum(t_k * f(x_k)) over t >= 0 with sum(t_k * x_k) = x, adding
    sum(t_k) = 1 in mode "convex".

    Returns
    -------
    float
        Optimal mixing cost; +inf when no admissible mixing exists,
        -inf when mixings of arbitrarily low cost exist.
    """
    xv = _check_query(f, x)
    if mode not in ("conic", "convex"):
        raise ValueError(f"unknown mode {mode!r}")
    k = len(f)
    rows = [f.points[:, j] for j in range(f.dim)]
    rhs = list(xv)
    if mode == "convex":
        rows.append(np.ones(k))
        rhs.append(1.0)
    prog = LinearProgram(
        c=f.values.copy(),
        sense="min",
        A=np.vstack(rows),
        relations=("==",) * len(rows),
        b=np.asarray(rhs),
        lower=0.0,
    )
    out = solve(prog)
    if out.status == "OPTIMAL":
        return out.value
    if out.status == "INFEASIBLE":
        return POS_INF
    return NEG_INF


def lower_envelope(f: SampledFunction, x, family: str = "linear") -> float:
    """Upper envelope at `x` of linear or affine minorants of `f`.

    Maximizes g(x) over g in the chosen family with g(x_k) <= f(x_k) at
    every sample point.

    Returns
    -------
    float
        The supremum; -inf when the family has no member below the
        samples, +inf when the supremum is unbounded.
    """
    xv = _check_query(f, x)
    if family not in ("linear", "affine"):
        raise ValueError(f"unknown family {family!r}")
    k = len(f)
    cols = [f.points]
    obj = [xv]
    if family == "affine":
        cols.append(np.ones((k, 1)))
        obj.append(np.ones(1))
    prog = LinearProgram(
        c=np.concatenate(obj),
        sense="max",
        A=np.hstack(cols),
        relations=("<=",) * k,
        b=f.values.copy(),
        lower=NEG_INF,
    )
    out = solve(prog)
    if out.status == "OPTIMAL":
        return out.value
    if out.status == "UNBOUNDED":
        return POS_INF
    return NEG_INF

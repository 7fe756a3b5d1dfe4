"""Function-theoretic criteria: divisor potentials, minorant reports,
the smooth-extend-solve pipeline, weight transforms, and zero-set
assembly.  Pinned values come from hand evaluation or from inline
re-derivations independent of the library code paths."""

import json

import numpy as np
import pytest

from balayage.duality import ConeSpec, defect_rows
from balayage.errors import (DomainMismatch, EmptyMargin, MultiplyConnected,
                             NotFeasible, RadiusTooSmall, SupportViolation)
from balayage.gridpotential import (BOUNDARY, INTERIOR, DiscreteMeasure,
                                    GridDomain, GridFunction, SubDomain,
                                    harmonic_conjugate)
from balayage.holo import (CriterionReport, Divisor, divisor_log_potential,
                           field_csv, minorant_criterion, theorem71_pipeline,
                           uq_potential, weight_transform, zero_set_construct)
from balayage.smoothing import RadiusField

from conftest import make_subharmonic


def _grid9(spacing=0.5):
    half = 4 * spacing
    return GridDomain.rectangle(9, 9, spacing=spacing, origin=(-half, -half))


def _bridge_gap(u, rep, M):
    """Largest violation of u + h <= M + C over active nodes."""
    d = u.domain
    act = d.active_ids
    live = (u.values[act] > -np.inf) & (M.values[act] < np.inf)
    lhs = u.values[act][live] + rep.h.values[act][live]
    rhs = M.values[act][live] + rep.C
    return float((lhs - rhs).max(initial=-np.inf))


class TestDivisor:
    def test_multiplicities_must_be_positive_integers(self):
        with pytest.raises(ValueError):
            Divisor([((0.0, 0.0), 0)])
        with pytest.raises(ValueError):
            Divisor([((0.0, 0.0), 1.5)])

    def test_degree_sums_multiplicities(self):
        z = Divisor([((0.0, 0.0), 2), ((1.0, 0.5), 3)])
        assert z.degree() == 5

    def test_atom_outside_domain_rejected(self):
        d = _grid9()
        with pytest.raises(ValueError):
            divisor_log_potential(Divisor([((50.0, 0.0), 1)]), d)


class TestDivisorLogPotential:
    def test_distance_one_gives_zero(self):
        d = _grid9(spacing=0.5)
        u = divisor_log_potential(Divisor([((0.0, 0.0), 1)]), d)
        # node (6, 4) sits at (1.0, 0.0): log 1 = 0
        assert u.values[d.node_id(6, 4)] == pytest.approx(0.0, abs=1e-15)

    def test_multiplicity_two_at_distance_e(self):
        step = np.e / 4
        d = GridDomain.rectangle(9, 9, spacing=step, origin=(-np.e, -np.e))
        u = divisor_log_potential(Divisor([((0.0, 0.0), 2)]), d)
        # node (8, 4) sits at (e, 0): 2 log e = 2
        assert u.values[d.node_id(8, 4)] == pytest.approx(2.0, abs=1e-14)

    def test_coincident_node_clips_to_half_step(self):
        d = GridDomain.rectangle(9, 9, spacing=0.1, origin=(-0.4, -0.4))
        u = divisor_log_potential(Divisor([((0.0, 0.0), 3)]), d)
        assert u.values[d.node_id(4, 4)] == pytest.approx(
            3 * np.log(0.05), abs=1e-12)

    def test_empty_divisor_is_zero(self):
        d = _grid9()
        u = divisor_log_potential(Divisor([]), d)
        assert np.all(u.values == 0.0)

    def test_atoms_superpose(self):
        d = _grid9()
        za = Divisor([((0.0, 0.0), 1)])
        zb = Divisor([((0.5, -0.5), 2)])
        both = Divisor(za.atoms + zb.atoms)
        ua, ub = divisor_log_potential(za, d), divisor_log_potential(zb, d)
        u = divisor_log_potential(both, d)
        assert np.allclose(u.values, ua.values + ub.values)


class TestUqPotential:
    def test_max_mode_constant_moduli(self):
        d = _grid9()
        q1 = GridFunction.constant(d, 1.0)   # |q1| = e
        q2 = GridFunction.constant(d, 0.0)   # |q2| = 1
        u = uq_potential(q1, q2, "max")
        act = d.active_ids
        assert np.all(u.values[act] == 1.0)

    def test_sqrt_sum_equal_unit_moduli(self):
        d = _grid9()
        q = GridFunction.constant(d, 0.0)
        u = uq_potential(q, q, "sqrt_sum")
        act = d.active_ids
        assert np.allclose(u.values[act], 0.5 * np.log(2.0))

    def test_modes_bracket_each_other(self):
        # max(a, b) <= log sqrt(e^2a + e^2b) <= max(a, b) + log sqrt 2
        d = _grid9()
        rng = np.random.default_rng(41)
        for _ in range(5):
            q1 = GridFunction(d, rng.uniform(-3, 3, d.nx * d.ny))
            q2 = GridFunction(d, rng.uniform(-3, 3, d.nx * d.ny))
            lo = uq_potential(q1, q2, "max").values
            hi = uq_potential(q1, q2, "sqrt_sum").values
            act = d.active_ids
            assert np.all(hi[act] >= lo[act] - 1e-12)
            assert np.all(hi[act] <= lo[act] + 0.5 * np.log(2.0) + 1e-12)

    def test_divisor_inputs_resolve_to_potentials(self):
        d = _grid9()
        z = Divisor([((0.0, 0.0), 1)])
        u = uq_potential(z, GridFunction.constant(d, -10.0), "max")
        pot = divisor_log_potential(z, d)
        act = d.active_ids
        assert np.allclose(u.values[act],
                           np.maximum(pot.values[act], -10.0))

    def test_two_divisors_need_a_domain(self):
        z = Divisor([((0.0, 0.0), 1)])
        with pytest.raises(ValueError):
            uq_potential(z, z, "max")
        d = _grid9()
        u = uq_potential(z, z, "max", domain=d)
        assert u.domain is d

    def test_domain_mismatch_rejected(self):
        d1, d2 = _grid9(), _grid9(spacing=0.25)
        with pytest.raises(DomainMismatch):
            uq_potential(GridFunction.constant(d1, 0.0),
                         GridFunction.constant(d2, 0.0), "max")

    def test_unknown_mode_rejected(self):
        d = _grid9()
        q = GridFunction.constant(d, 0.0)
        with pytest.raises(ValueError):
            uq_potential(q, q, "geometric")


class TestMinorantCriterion:
    def test_zero_weight_zero_potential(self):
        d = _grid9()
        H = ConeSpec.subharmonic_cone(d)
        nu = DiscreteMeasure.delta(d, d.node_id(4, 4))
        zero = GridFunction.constant(d, 0.0)
        rep = minorant_criterion(zero, zero, H, nu)
        act = d.active_ids
        assert rep.feasible
        assert np.abs(rep.h.values[act]).max() == pytest.approx(0.0, abs=1e-9)
        assert rep.C == pytest.approx(0.0, abs=1e-9)
        assert rep.dual_value == pytest.approx(0.0, abs=1e-9)

    def test_divisor_against_harmonic_subspace(self):
        d = _grid9(spacing=0.5)
        u = divisor_log_potential(Divisor([((0.0, 0.0), 1)]), d)
        M = GridFunction.constant(d, 0.0)
        H = ConeSpec.harmonic_subspace(d)
        nu = DiscreteMeasure.delta(d, d.node_id(2, 2))
        rep = minorant_criterion(u, M, H, nu)
        assert rep.feasible
        assert np.isfinite(rep.dual_value)
        # primal and dual routes agree and certify each other
        primal = rep.diagnostics["primal_value"]
        assert abs(primal - rep.dual_value) <= 1e-7 * (1 + abs(primal))
        res = rep.certificate.residuals(H, nu)
        assert max(res.values()) <= 1e-7
        # h is discretely harmonic and bridges u below M
        act = d.active_ids
        defect = defect_rows(d)[:, act] @ rep.h.values[act]
        assert np.abs(defect).max() <= 1e-7
        assert _bridge_gap(u, rep, M) <= 1e-9

    def test_uncanceled_bottomless_weight_is_infeasible(self):
        d = _grid9()
        u = divisor_log_potential(Divisor([((0.0, 0.0), 1)]), d)
        vals = np.zeros(d.nx * d.ny)
        vals[d.node_id(4, 4)] = -np.inf
        M = GridFunction(d, vals)
        H = ConeSpec.subharmonic_cone(d)
        nu = DiscreteMeasure.delta(d, d.node_id(4, 4))
        rep = minorant_criterion(u, M, H, nu)
        assert not rep.feasible
        assert rep.h is None and rep.C is None
        assert rep.dual_value == -np.inf
        assert rep.diagnostics["farkas"]["kind"] == "minus_infinity_node"

    def test_bottomless_weight_canceled_by_potential(self):
        # u = -inf at the same node turns the ceiling vacuous there
        d = _grid9()
        uv = np.zeros(d.nx * d.ny)
        Mv = np.zeros(d.nx * d.ny)
        uv[d.node_id(4, 4)] = -np.inf
        Mv[d.node_id(4, 4)] = -np.inf
        H = ConeSpec.subharmonic_cone(d)
        nu = DiscreteMeasure.delta(d, d.node_id(2, 2))
        rep = minorant_criterion(GridFunction(d, uv), GridFunction(d, Mv),
                                 H, nu)
        assert rep.feasible

    def test_plus_infinite_potential_blocks(self):
        d = _grid9()
        uv = np.zeros(d.nx * d.ny)
        uv[d.node_id(3, 3)] = np.inf
        H = ConeSpec.subharmonic_cone(d)
        nu = DiscreteMeasure.delta(d, d.node_id(4, 4))
        rep = minorant_criterion(GridFunction(d, uv),
                                 GridFunction.constant(d, 0.0), H, nu)
        assert not rep.feasible


class TestTheorem71Pipeline:
    def _setup11(self):
        d = GridDomain.rectangle(11, 11, spacing=0.5, origin=(-2.5, -2.5))
        U0 = SubDomain.from_rect(d, 4, 4, 6, 6)
        U1 = SubDomain.from_rect(d, 2, 2, 8, 8)
        r = RadiusField.constant(d, 0.6)
        nu = DiscreteMeasure.delta(d, d.node_id(5, 5))
        return d, U0, U1, r, nu

    def test_zero_ceiling(self):
        d, U0, U1, r, nu = self._setup11()
        H = ConeSpec.subharmonic_cone(d)
        rep = theorem71_pipeline(GridFunction.constant(d, 0.0),
                                 nu, U0, U1, r, H)
        act = d.active_ids
        assert rep.feasible
        assert np.abs(rep.h.values[act]).max() <= 1e-9
        assert rep.C == pytest.approx(0.0, abs=1e-9)
        assert np.abs(rep.transformed_weight.values[act]).max() <= 1e-12

    def test_matches_direct_criterion_outside_u1(self):
        d, U0, U1, r, nu = self._setup11()
        H = ConeSpec.subharmonic_cone(d)
        z = Divisor([((0.0, 0.0), 1)])
        u = divisor_log_potential(z, d)
        F = GridFunction(d, -u.values)
        rep = theorem71_pipeline(F, nu, U0, U1, r, H)
        direct = minorant_criterion(u, GridFunction.constant(d, 0.0), H, nu)
        assert rep.feasible and direct.feasible
        outside = d.active_ids[~U1.member_mask[d.active_ids]]
        diff = np.abs(rep.h.values[outside] - direct.h.values[outside]).max()
        assert diff <= 1e-6

    def test_certificate_pairing_identity(self):
        # extension and sweeping onto the U1 boundary are adjoint
        d, U0, U1, r, nu = self._setup11()
        for H in (ConeSpec.subharmonic_cone(d),
                  ConeSpec.harmonic_subspace(d)):
            u = divisor_log_potential(Divisor([((0.0, 0.0), 1)]), d)
            F = GridFunction(d, -u.values)
            rep = theorem71_pipeline(F, nu, U0, U1, r, H)
            assert rep.certificate is not None
            assert rep.diagnostics["pairing_identity_residual"] <= 1e-9

    def test_h_stays_below_smoothed_ceiling(self):
        d, U0, U1, r, nu = self._setup11()
        H = ConeSpec.subharmonic_cone(d)
        F = GridFunction.from_callable(d, lambda x, y: x * x - 0.5 * y * y)
        rep = theorem71_pipeline(F, nu, U0, U1, r, H)
        assert rep.feasible
        act = d.active_ids
        gap = (rep.h.values[act] - rep.transformed_weight.values[act]
               - rep.C).max()
        assert gap <= 1e-9
        assert rep.C >= 0.0

    def test_measure_outside_u0_rejected(self):
        d, U0, U1, r, _ = self._setup11()
        H = ConeSpec.subharmonic_cone(d)
        stray = DiscreteMeasure.delta(d, d.node_id(1, 1))
        with pytest.raises(SupportViolation):
            theorem71_pipeline(GridFunction.constant(d, 0.0),
                               stray, U0, U1, r, H)

    def test_u1_touching_outer_boundary_rejected(self):
        d, U0, _, r, nu = self._setup11()
        H = ConeSpec.subharmonic_cone(d)
        wide = SubDomain.from_rect(d, 0, 0, 10, 10)
        with pytest.raises(EmptyMargin):
            theorem71_pipeline(GridFunction.constant(d, 0.0),
                               nu, U0, wide, r, H)


class TestWeightTransform:
    def _grid11(self):
        return GridDomain.rectangle(11, 11, spacing=0.25,
                                    origin=(-1.25, -1.25))

    def test_dyadic_center_value(self):
        # at the origin d_max = 1, admissible dyadic radii {1/2, 1/4};
        # log(1/d) is smallest at d = 1/2 and the tail adds 2 log 2
        d = self._grid11()
        Mt = weight_transform(GridFunction.constant(d, 0.0),
                              "inf_dyadic", a=1.0, depth=12)
        assert Mt.values[d.node_id(5, 5)] == pytest.approx(
            3 * np.log(2.0), abs=1e-12)

    def test_dyadic_off_center_oracle(self):
        d = self._grid11()
        Mt = weight_transform(GridFunction.constant(d, 0.0),
                              "inf_dyadic", a=1.0, depth=12)
        nid = d.node_id(7, 5)
        # independent re-derivation at (0.5, 0.0)
        xs, ys = d.coordinate_arrays()
        bd = d.active_ids[d.roles[d.active_ids] == BOUNDARY]
        dist = np.hypot(xs[bd] - xs[nid], ys[bd] - ys[nid]).min()
        dmax = min(1.0, dist)
        cands = [dmax * 0.5 ** j for j in range(1, 13)
                 if dmax * 0.5 ** j >= 0.25 * (1 - 1e-12)]
        want = min(np.log(1.0 / c) for c in cands) \
            + 2.0 * np.log(2.0 + abs(xs[nid]))
        assert Mt.values[nid] == pytest.approx(want, abs=1e-12)

    def test_constant_weight_shifts_by_the_constant(self):
        d = self._grid11()
        base = weight_transform(GridFunction.constant(d, 0.0),
                                "inf_dyadic", a=1.0, depth=6)
        shifted = weight_transform(GridFunction.constant(d, 2.5),
                                   "inf_dyadic", a=1.0, depth=6)
        act = d.active_ids
        assert np.allclose(shifted.values[act], base.values[act] + 2.5)

    def test_fixed_d_sub_mean_inequality(self):
        # subharmonic weight: the ball average dominates the center value
        d = self._grid11()
        a = 1.0
        M = GridFunction.from_callable(d, lambda x, y: x * x + y * y)
        Mt = weight_transform(M, "fixed_d", a=a,
                              dfield=np.full(d.nx * d.ny, 0.5))
        xs, ys = d.coordinate_arrays()
        bd = d.active_ids[d.roles[d.active_ids] == BOUNDARY]
        checked = 0
        for nid in d.interior_ids:
            dist = np.hypot(xs[bd] - xs[nid], ys[bd] - ys[nid]).min()
            if 0.5 >= min(1.0, dist):
                # outside the admissible range: value passes through
                assert Mt.values[nid] == M.values[nid]
                continue
            tail = (1 + a) * np.log(2.0 + np.hypot(xs[nid], ys[nid]))
            avg = Mt.values[nid] - np.log(1.0 / 0.5) - tail
            assert M.values[nid] <= avg + 1e-12
            checked += 1
        assert checked > 10

    def test_fixed_d_below_one_step_propagates(self):
        d = self._grid11()
        M = GridFunction.constant(d, 0.0)
        with pytest.raises(RadiusTooSmall):
            weight_transform(M, "fixed_d", a=1.0,
                             dfield=np.full(d.nx * d.ny, 0.2))

    def test_fixed_d_ratio_bound(self):
        d = self._grid11()
        M = GridFunction.constant(d, 0.0)
        dv = np.full(d.nx * d.ny, 0.5)
        dv[d.node_id(5, 5)] = 0.9
        with pytest.raises(ValueError):
            weight_transform(M, "fixed_d", a=1.0, dfield=dv, ratio_bound=1.2)
        # a slack bound accepts the same field
        out = weight_transform(M, "fixed_d", a=1.0, dfield=dv,
                               ratio_bound=2.0)
        assert np.isfinite(out.values[d.active_ids]).all()

    def test_parameter_validation(self):
        d = self._grid11()
        M = GridFunction.constant(d, 0.0)
        with pytest.raises(ValueError):
            weight_transform(M, "inf_dyadic", a=0.0)
        with pytest.raises(ValueError):
            weight_transform(M, "inf_dyadic", a=1.0, depth=0)
        with pytest.raises(ValueError):
            weight_transform(M, "fixed_d", a=1.0)
        with pytest.raises(ValueError):
            weight_transform(M, "octave", a=1.0)

    def test_nodes_without_usable_radius_pass_through(self):
        # near the boundary every dyadic radius drops below one step
        d = self._grid11()
        M = GridFunction.from_callable(d, lambda x, y: x - y)
        Mt = weight_transform(M, "inf_dyadic", a=1.0, depth=6)
        edge = d.node_id(1, 2)
        assert M.values[edge] != 0.0
        assert Mt.values[edge] == M.values[edge]


class TestZeroSetConstruct:
    def test_empty_divisor_zero_weight(self):
        d = _grid9()
        out = zero_set_construct(Divisor([]), GridFunction.constant(d, 0.0),
                                 d.node_id(2, 2))
        act = d.active_ids
        assert np.abs(out["h"].values[act]).max() <= 1e-9
        assert np.abs(out["log_f"].values[act]).max() <= 1e-9
        assert out["conjugate_residue"] <= 1e-9

    def test_weight_equal_to_potential(self):
        d = _grid9()
        z = Divisor([((0.0, 0.0), 1)])
        u = divisor_log_potential(z, d)
        out = zero_set_construct(z, u, d.node_id(2, 2))
        act = d.active_ids
        assert np.abs(out["h"].values[act]).max() <= 1e-9
        assert out["report"].C == pytest.approx(0.0, abs=1e-9)

    def test_zero_weight_on_nine_grid(self):
        d = _grid9(spacing=0.5)
        z = Divisor([((0.0, 0.0), 1)])
        z0 = d.node_id(2, 2)
        out = zero_set_construct(z, GridFunction.constant(d, 0.0), z0)
        act = d.active_ids
        C = out["report"].C
        assert np.all(out["log_f"].values[act] <= C + 1e-9)
        # log_f assembles the potential plus the harmonic part
        u = divisor_log_potential(z, d)
        assert np.allclose(out["log_f"].values,
                           u.values + out["h"].values)
        # conjugate anchored at z0, residue at the lattice artifact scale
        assert out["g_conjugate"].values[z0] == pytest.approx(0.0, abs=1e-12)
        redo = harmonic_conjugate(out["h"], d, z0)
        assert out["conjugate_residue"] == pytest.approx(
            redo.max_cell_residue, abs=1e-15)
        assert out["conjugate_residue"] <= 0.05

    def test_infeasible_weight_raises(self):
        d = _grid9()
        vals = np.zeros(d.nx * d.ny)
        vals[d.node_id(6, 6)] = -np.inf
        with pytest.raises(NotFeasible):
            zero_set_construct(Divisor([]), GridFunction(d, vals),
                               d.node_id(2, 2))

    def test_multiply_connected_domain_raises(self):
        roles = np.full((9, 9), BOUNDARY, dtype=np.int8)
        roles[1:-1, 1:-1] = INTERIOR
        roles[3:6, 3:6] = 0
        for iy in range(9):
            for ix in range(9):
                if roles[iy, ix] == INTERIOR and 0 in (
                        roles[iy + 1, ix], roles[iy - 1, ix],
                        roles[iy, ix + 1], roles[iy, ix - 1]):
                    roles[iy, ix] = BOUNDARY
        d = GridDomain(roles, spacing=0.5, origin=(-2.0, -2.0))
        with pytest.raises(MultiplyConnected):
            zero_set_construct(Divisor([]), GridFunction.constant(d, 0.0),
                               d.node_id(1, 1))


class TestCriterionInvariants:
    def test_feasibility_matches_dual_finiteness(self):
        rng = np.random.default_rng(90)
        for trial in range(30):
            n = int(rng.integers(5, 10))
            d = GridDomain.rectangle(n, n, spacing=0.5,
                                     origin=(-(n - 1) / 4, -(n - 1) / 4))
            u = GridFunction(d, rng.uniform(-1, 1, d.nx * d.ny))
            M = make_subharmonic(d, rng)
            if trial % 3 == 0:
                vals = M.values.copy()
                vals[d.node_id(n // 2, n // 2)] = -np.inf
                M = GridFunction(d, vals)
            H = (ConeSpec.subharmonic_cone(d) if trial % 2
                 else ConeSpec.harmonic_subspace(d))
            nid = int(rng.choice(d.interior_ids))
            rep = minorant_criterion(u, M, H, DiscreteMeasure.delta(d, nid))
            assert rep.feasible == (rep.dual_value > -np.inf)
            if trial % 3 == 0:
                assert not rep.feasible
            if rep.feasible and np.isfinite(rep.dual_value):
                primal = rep.diagnostics["primal_value"]
                assert abs(primal - rep.dual_value) \
                    <= 1e-7 * (1 + abs(primal))
                assert _bridge_gap(u, rep, M) <= 1e-9

    def test_necessity_over_sweepings(self):
        # int u dmu <= int M dmu + C for the optimal certificate and
        # for random sweepings of nu
        d = GridDomain.rectangle(9, 9, spacing=0.1, origin=(-0.4, -0.4))
        Z = Divisor([((0.0, 0.0), 2), ((0.2, -0.1), 1), ((-0.15, 0.25), 1)])
        u = divisor_log_potential(Z, d)
        M = GridFunction.constant(d, 0.0)
        H = ConeSpec.subharmonic_cone(d)
        nu = DiscreteMeasure.delta(d, d.node_id(4, 4))
        rep = minorant_criterion(u, M, H, nu)
        assert rep.feasible
        mu = rep.certificate.mu
        assert mu.integrate(u) <= mu.integrate(M) + rep.C + 1e-9
        rng = np.random.default_rng(7)
        act = d.active_ids
        rows = H.rows
        for _ in range(20):
            lam = rng.uniform(0.0, 0.05, size=rows.shape[0])
            add = rows[:, act].T @ lam
            low = (nu.weights[act] + add).min()
            if low < 0:
                # scale back so nu + rows^T lam stays a measure
                lam *= 0.9 * nu.weights[act].max() / (
                    nu.weights[act].max() - low)
                add = rows[:, act].T @ lam
            w = nu.weights.copy()
            w[act] = np.maximum(nu.weights[act] + add, 0.0)
            mu_r = DiscreteMeasure(d, w)
            lhs = mu_r.integrate(u)
            rhs = mu_r.integrate(M) + rep.C * mu_r.mass()
            assert lhs <= rhs + 1e-9

    def test_subdivisor_keeps_feasibility(self):
        # dropping zeros or lowering multiplicities cannot break the
        # criterion: the removed potential is bounded below, so the
        # ceiling only rises by at most a constant
        d = GridDomain.rectangle(9, 9, spacing=0.1, origin=(-0.4, -0.4))
        full = Divisor([((0.0, 0.0), 2), ((0.2, -0.1), 1),
                        ((-0.15, 0.25), 1)])
        M = GridFunction.constant(d, 0.0)
        nu = DiscreteMeasure.delta(d, d.node_id(4, 4))
        for H in (ConeSpec.subharmonic_cone(d),
                  ConeSpec.harmonic_subspace(d)):
            base = minorant_criterion(divisor_log_potential(full, d),
                                      M, H, nu)
            assert base.feasible
            subs = [
                Divisor(full.atoms[:2]),
                Divisor([(full.atoms[0][0], 1)] + full.atoms[1:]),
                Divisor([full.atoms[0]]),
                Divisor([]),
            ]
            for z in subs:
                rep = minorant_criterion(divisor_log_potential(z, d),
                                         M, H, nu)
                assert rep.feasible
                assert rep.dual_value > -np.inf

    def test_quotient_symmetry(self):
        # swapping the two fields changes neither the joint modulus nor
        # the criterion outcome
        d = _grid9(spacing=0.5)
        z = Divisor([((0.0, 0.0), 1)])
        rng = np.random.default_rng(12)
        q2 = GridFunction(d, rng.uniform(-1.5, 0.5, d.nx * d.ny))
        M = GridFunction.constant(d, 1.0)
        H = ConeSpec.subharmonic_cone(d)
        nu = DiscreteMeasure.delta(d, d.node_id(4, 4))
        for mode in ("max", "sqrt_sum"):
            u12 = uq_potential(z, q2, mode, domain=d)
            u21 = uq_potential(q2, z, mode, domain=d)
            assert np.array_equal(u12.values, u21.values)
            r12 = minorant_criterion(u12, M, H, nu)
            r21 = minorant_criterion(u21, M, H, nu)
            assert r12.feasible == r21.feasible
            assert r12.dual_value == r21.dual_value
            assert r12.C == r21.C


class TestCriterionReportSerialization:
    def test_json_round_trip(self):
        d = _grid9()
        H = ConeSpec.subharmonic_cone(d)
        nu = DiscreteMeasure.delta(d, d.node_id(4, 4))
        zero = GridFunction.constant(d, 0.0)
        rep = minorant_criterion(zero, zero, H, nu)
        doc = rep.to_json_dict()
        assert doc["analytic_step"] == "external"
        assert set(doc) == {"feasible", "C", "dual_value", "certificate",
                            "diagnostics", "analytic_step", "h_csv",
                            "transformed_weight_csv"}
        text = json.dumps(doc, sort_keys=True)
        assert json.loads(text)["feasible"] is True
        lines = doc["h_csv"].strip().split("\n")
        assert lines[0] == "ix,iy,x,y,value"
        assert len(lines) == 1 + d.active_ids.size

    def test_infeasible_report_serializes_tokens(self):
        d = _grid9()
        vals = np.zeros(d.nx * d.ny)
        vals[d.node_id(4, 4)] = -np.inf
        H = ConeSpec.subharmonic_cone(d)
        nu = DiscreteMeasure.delta(d, d.node_id(4, 4))
        rep = minorant_criterion(GridFunction.constant(d, 0.0),
                                 GridFunction(d, vals), H, nu)
        doc = rep.to_json_dict()
        assert doc["dual_value"] == "-inf"
        assert doc["h_csv"] is None
        assert doc["diagnostics"]["farkas"]["kind"] == "minus_infinity_node"
        json.dumps(doc, sort_keys=True)

    def test_field_csv_tokens(self):
        d = _grid9()
        vals = np.full(d.nx * d.ny, 1.5)
        vals[d.node_id(1, 1)] = np.inf
        text = field_csv(GridFunction(d, vals))
        rows = text.strip().split("\n")[1:]
        cells = [r.split(",") for r in rows]
        assert any(c[4] == "+inf" for c in cells)
        ix, iy, x, y, v = cells[0]
        assert d.node_id(int(ix), int(iy)) == d.active_ids[0]
        assert float(x) == d.origin[0] + int(ix) * d.spacing

"""Chain-model tests with a brute-force extension oracle.

The oracle enumerates tail extensions over a value grid containing
every stored coordinate plus a dominating bound; since the supremal
function only compares coordinates against thresholds, that grid is
exhaustive and the oracle exact.
"""

import itertools
import json
import math
import pathlib

import numpy as np
import pytest

from balayage.errors import DimensionMismatch, LevelOutOfRange
from balayage.order import NEG_INF
from balayage.projlattice import (ChainElement, FiniteSupremalSpec,
                                  stabilized_limsup, sup_projection,
                                  supremal_value,
                                  verify_supremal_projection)

DATA = pathlib.Path(__file__).parent / "data"


def _oracle_sup_projection(spec, n, x_n):
    """Max of spf over a finite grid of extensions of x_n (exact)."""
    values = sorted({c for e in spec.elements for c in e.coords}
                    | {spec.default_tail_bound()})
    best = NEG_INF
    for tail in itertools.product(values, repeat=spec.depth - n):
        v = supremal_value(spec, tuple(x_n) + tail)
        if v > best:
            best = v
    if spec.depth == n:
        best = supremal_value(spec, tuple(x_n))
    return best


def _load_cases():
    with open(DATA / "projlattice_fixtures.json") as fh:
        return json.load(fh)["cases"]


class TestProjection:
    def test_drop_last_relation(self):
        x = ChainElement((1.0, 2.0, 3.0, 4.0))
        for n in range(1, 4):
            assert x.project(n) == x.project(n + 1)[:-1]

    def test_level_out_of_range(self):
        x = ChainElement((1.0, 2.0))
        with pytest.raises(LevelOutOfRange):
            x.project(0)
        with pytest.raises(LevelOutOfRange):
            x.project(3)

    def test_componentwise_sup_projects_levelwise(self):
        rng = np.random.default_rng(11)
        pts = [ChainElement(tuple(rng.uniform(-5, 5, 4))) for _ in range(5)]
        sup = ChainElement(tuple(np.max([p.coords for p in pts], axis=0)))
        for n in range(1, 5):
            levelwise = tuple(np.max([p.project(n) for p in pts], axis=0))
            assert sup.project(n) == levelwise


class TestSupProjection:
    def test_fixture_cases(self):
        for case in _load_cases():
            spec = FiniteSupremalSpec(tuple(case["elements"]),
                                      case["q1"], case["depth"])
            for q in case["queries"]:
                got = sup_projection(spec, q["level"], q["point"])
                want = NEG_INF if q["expected"] is None else q["expected"]
                assert got == want, (case["name"], q)
                assert got == _oracle_sup_projection(spec, q["level"],
                                                     q["point"])

    def test_stored_element_dominates_itself(self):
        spec = FiniteSupremalSpec(((1.0, -2.0, -9.0),), 1.0, 3)
        h = spec.elements[0]
        assert sup_projection(spec, 3, h.coords) >= spec.q(h)

    def test_level_validation(self):
        spec = FiniteSupremalSpec(((1.0, 2.0),), 1.0, 2)
        with pytest.raises(LevelOutOfRange):
            sup_projection(spec, 3, (0.0, 0.0, 0.0))
        with pytest.raises(DimensionMismatch):
            sup_projection(spec, 2, (0.0,))

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_extension_oracle(self, seed):
        rng = np.random.default_rng(4000 + seed)
        depth = int(rng.integers(1, 5))
        hsize = int(rng.integers(0, 5))
        elems = tuple(tuple(float(v) for v in rng.integers(-4, 5, depth))
                      for _ in range(hsize))
        spec = FiniteSupremalSpec(elems, float(rng.uniform(0.5, 2.0)), depth)
        n = int(rng.integers(1, depth + 1))
        x_n = tuple(float(v) for v in rng.integers(-4, 5, n))
        assert sup_projection(spec, n, x_n) == \
            _oracle_sup_projection(spec, n, x_n)

    @pytest.mark.parametrize("seed", range(10))
    def test_levels_decrease_toward_full_depth(self, seed):
        # f_n(pr_n x) >= f_{n+1}(pr_{n+1} x) >= spf(x)
        rng = np.random.default_rng(5000 + seed)
        depth = 4
        elems = tuple(tuple(float(v) for v in rng.integers(-3, 4, depth))
                      for _ in range(3))
        spec = FiniteSupremalSpec(elems, 1.0, depth)
        x = ChainElement(tuple(float(v) for v in rng.integers(-3, 4, depth)))
        vals = [sup_projection(spec, n, x.project(n))
                for n in range(1, depth + 1)]
        full = supremal_value(spec, x.coords)
        for a, b in zip(vals, vals[1:]):
            assert a >= b
        assert vals[-1] >= full
        assert vals[-1] == full            # level N_max extension is empty

    @pytest.mark.parametrize("seed", range(10))
    def test_increasing_in_the_argument(self, seed):
        rng = np.random.default_rng(6000 + seed)
        elems = tuple(tuple(float(v) for v in rng.integers(-3, 4, 3))
                      for _ in range(4))
        spec = FiniteSupremalSpec(elems, 1.0, 3)
        x = rng.integers(-3, 4, 3).astype(float)
        y = x + rng.integers(0, 3, 3)
        assert supremal_value(spec, y) >= supremal_value(spec, x)


class TestStabilizedLimsup:
    def test_constant_sequence(self):
        x = ChainElement((1.0, 2.0, 3.0))
        ok, lim = stabilized_limsup([x, x, x], x)
        assert ok and lim.coords == x.coords

    def test_perturbed_later_coordinates(self):
        x = ChainElement((1.0, 2.0, 3.0))
        seq = []
        for k in range(1, 3):           # step k perturbs coordinate k+1
            c = list(x.coords)
            c[k] += 5.0
            seq.append(ChainElement(tuple(c)))
        seq.append(x)
        ok, lim = stabilized_limsup(seq, x)
        assert ok
        assert lim.coords == x.coords

    def test_alternating_first_coordinate(self):
        x = ChainElement((0.0, 0.0))
        seq = [ChainElement((float(k % 2), 0.0)) for k in range(6)]
        ok, lim = stabilized_limsup(seq, x)
        assert not ok and lim is None


class TestVerifyReport:
    def test_single_element_grid(self):
        spec = FiniteSupremalSpec(((1.0, -2.0, -9.0),), 1.0, 3)
        grid = [(a, b) for a in (-3.0, 0.0, 3.0) for b in (-3.0, 0.0, 3.0)]
        rep = verify_supremal_projection(spec, 2, grid)
        assert rep["max_discrepancy"] == 0.0
        assert rep["points_checked"] == 9

    def test_empty_family_grid(self):
        spec = FiniteSupremalSpec((), 1.0, 2)
        rep = verify_supremal_projection(spec, 1, [(0.0,), (5.0,)])
        assert rep["max_discrepancy"] == 0.0

    def test_two_incomparable_elements(self):
        spec = FiniteSupremalSpec(((1.0, 0.0, 5.0), (2.0, 3.0, -1.0)),
                                  1.0, 3)
        grid = [(a, b) for a in np.linspace(-2, 4, 7)
                for b in np.linspace(-2, 4, 7)]
        rep = verify_supremal_projection(spec, 2, grid)
        assert rep["max_discrepancy"] == 0.0

    @pytest.mark.parametrize("seed", range(10))
    def test_exact_zero_on_random_specs(self, seed):
        rng = np.random.default_rng(7000 + seed)
        depth = int(rng.integers(2, 5))
        elems = tuple(tuple(float(v) for v in rng.uniform(-3, 3, depth))
                      for _ in range(int(rng.integers(0, 5))))
        spec = FiniteSupremalSpec(elems, float(rng.uniform(0.1, 3)), depth)
        n = int(rng.integers(1, depth + 1))
        grid = [tuple(float(v) for v in rng.uniform(-4, 4, n))
                for _ in range(20)]
        rep = verify_supremal_projection(spec, n, grid)
        assert rep["max_discrepancy"] == 0.0

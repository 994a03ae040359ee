import itertools

import numpy as np
import pytest

import oracles
from agt.distance import (
    GameDistance,
    MetricScale,
    check_metric_props,
    distance_matrix,
    sel_distance,
)
from agt.errors import InputError
from agt.generators import all_selection_functions, grid_object, random_selection
from agt.metric import INF, ExtReal
from agt.selection import approximate, argmax_sel, eps_argmax_sel

OBJ = grid_object(2, 3)


def oracle_distance(s, t, radii):
    """Least radius with mutual containment, via the package-independent
    ball oracle on raw tables."""
    nv = s.obj.bwd.n
    dist = oracles.grid_dist(nv)
    tables = oracles.all_tables(s.obj.fwd.n, nv)

    def select(sel, k):
        rank = 0
        for v in k:
            rank = rank * nv + v
        return {x for x in range(s.obj.fwd.n) if sel.table[rank, x]}

    def contained(a, b, eps):
        for k in tables:
            grown = set()
            for k2 in oracles.ball(k, eps, nv, dist):
                grown |= select(b, k2)
            if not select(a, k) <= grown:
                return False
        return True

    for eps in radii:
        if contained(s, t, eps) and contained(t, s, eps):
            return eps
    return "inf"


class TestSelDistance:
    def test_self_distance_zero(self, rng):
        s = random_selection(OBJ, rng)
        assert sel_distance(s, s) == GameDistance(ExtReal(0), True)

    def test_enlargement_bound(self, rng):
        for _ in range(10):
            s = random_selection(OBJ, rng)
            for eps in (0, 1, 2):
                d = sel_distance(s, approximate(s, eps))
                assert d.value <= ExtReal(eps)

    def test_argmax_vs_slack_argmax_pinned(self):
        # frozen from the brute-force search over radii {0, 1, 2}
        assert oracle_distance(argmax_sel(OBJ), eps_argmax_sel(OBJ, 1), (0, 1, 2)) == 1
        d = sel_distance(argmax_sel(OBJ), eps_argmax_sel(OBJ, 1))
        assert d == GameDistance(ExtReal(1), True)

    def test_matches_oracle_on_random_pairs(self, rng):
        obj = grid_object(2, 2)
        for _ in range(15):
            s, t = random_selection(obj, rng), random_selection(obj, rng)
            expected = oracle_distance(s, t, (0, 1))
            got = sel_distance(s, t)
            if expected == "inf":
                assert got.value.is_infinite and not got.witnessed
            else:
                assert got == GameDistance(ExtReal(expected), True)

    def test_infinite_when_supports_differ(self):
        obj = grid_object(1, 2)
        pool = all_selection_functions(obj)
        empty = pool[0]
        full = pool[-1]
        d = sel_distance(empty, full)
        assert d.value is INF or d.value.is_infinite
        assert not d.witnessed

    def test_object_mismatch(self, rng):
        with pytest.raises(InputError):
            sel_distance(random_selection(OBJ, rng), random_selection(grid_object(2, 2), rng))

    def test_symmetry_and_triangle_sampled(self, rng):
        obj = grid_object(2, 2)
        pool = [random_selection(obj, rng) for _ in range(8)]
        for s, t in itertools.product(pool, repeat=2):
            assert sel_distance(s, t).value == sel_distance(t, s).value
        for s, t, u in itertools.combinations(pool, 3):
            assert sel_distance(s, u).value <= (
                sel_distance(s, t).value + sel_distance(t, u).value
            )


class TestDistanceMatrix:
    def test_agrees_with_pairwise(self, rng):
        obj = grid_object(2, 2)
        pool = [random_selection(obj, rng) for _ in range(12)]
        mat = distance_matrix(pool)
        for i, j in itertools.product(range(len(pool)), repeat=2):
            assert mat[i, j] == sel_distance(pool[i], pool[j]).value.to_raw()

    def test_mixed_objects_rejected(self, rng):
        with pytest.raises(InputError):
            distance_matrix([random_selection(OBJ, rng), random_selection(grid_object(2, 2), rng)])


class TestMetricProps:
    def test_small_scale_passes(self):
        scale = MetricScale(max_x=2, grid=2, eps_values=(0, 1), samples=2000)
        report = check_metric_props(scale)
        assert report.ok, report.violations
        assert report.checked > 0
        # in the finite model a zero distance forces table equality
        assert not report.zero_distance_pairs
        assert any("sampled" in b for b in report.sampled_blocks)

    def test_single_action_scale_fully_exhaustive(self):
        scale = MetricScale(max_x=1, grid=2, eps_values=(0, 1), samples=100)
        report = check_metric_props(scale)
        assert report.ok
        assert not report.sampled_blocks

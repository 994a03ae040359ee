import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from agt.errors import InputError
from agt.metric import (
    INF,
    ExtReal,
    FinMetricSpace,
    FnTable,
    MetricViolation,
    all_tables,
    as_extreal,
    ball_dilate,
    ext_add,
    sup_metric,
    table_matrix,
    tensor_metric,
    validate_metric,
    within_ball,
)

ext_reals = st.one_of(st.integers(0, 50).map(ExtReal), st.just(INF))


class TestExtReal:
    def test_add_examples(self):
        assert ext_add(0, 0) == ExtReal(0)
        assert ext_add(2, 3) == ExtReal(5)
        assert ext_add(7, INF) == INF

    def test_negative_rejected(self):
        with pytest.raises(InputError):
            ExtReal(-1)

    def test_infinity_has_no_units(self):
        with pytest.raises(InputError):
            INF.units

    @given(ext_reals, ext_reals, ext_reals)
    def test_add_associative_commutative(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a

    @given(ext_reals, ext_reals)
    def test_order_total_and_add_monotone(self, a, b):
        assert (a <= b) or (b <= a)
        assert a <= a + b

    @given(ext_reals)
    def test_raw_round_trip(self, a):
        assert ExtReal.from_raw(a.to_raw()) == a

    def test_scaling(self):
        assert ExtReal(3) * 2 == ExtReal(6)
        assert 2 * INF == INF


class TestValidateMetric:
    def test_discrete_ok(self):
        assert validate_metric(FinMetricSpace.discrete(("a", "b"))) is None

    def test_symmetry_violation(self):
        space = FinMetricSpace(("a", "b"), [[0, 1], [2, 0]])
        assert validate_metric(space) == MetricViolation("symmetry", ("a", "b"))

    def test_triangle_violation(self):
        space = FinMetricSpace.from_rows(
            ("a", "b", "c"), [[0, 1, 5], [1, 0, 1], [5, 1, 0]]
        )
        assert validate_metric(space) == MetricViolation("triangle", ("a", "b", "c"))

    def test_identity_violation(self):
        space = FinMetricSpace(("a", "b"), [[0, 0], [0, 0]])
        assert validate_metric(space) == MetricViolation("identity", ("a", "b"))

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            FinMetricSpace(("a", "b"), [[0]])

    def test_inf_distances_are_legal(self):
        space = FinMetricSpace.from_rows(("a", "b"), [[0, "inf"], ["inf", 0]])
        assert validate_metric(space) is None
        assert space.dist("a", "b") == INF


class TestTensorMetric:
    def test_discrete_pair(self):
        t = tensor_metric(
            FinMetricSpace.discrete(("a", "b")), FinMetricSpace.discrete(("c", "d"))
        )
        assert t.dist("(a,c)", "(b,d)") == ExtReal(1)

    def test_grid_pair(self):
        t = tensor_metric(FinMetricSpace.grid(3), FinMetricSpace.grid(3))
        assert t.dist("(0,2)", "(1,1)") == ExtReal(1)

    def test_self_distance_zero(self):
        t = tensor_metric(FinMetricSpace.grid(2), FinMetricSpace.grid(3))
        for label in t.carrier:
            assert t.dist(label, label) == ExtReal(0)

    def test_tensor_output_validates(self, rng):
        from agt.generators import random_metric_space

        for _ in range(25):
            a = random_metric_space(rng, max_n=4)
            b = random_metric_space(rng, max_n=4)
            assert validate_metric(tensor_metric(a, b)) is None


def _two_point_domain():
    return FinMetricSpace.discrete(("a", "b"))


class TestSupMetric:
    def test_examples(self):
        dom, grid = _two_point_domain(), FinMetricSpace.grid(3)
        f = FnTable.from_labels(dom, grid, {"a": "0", "b": "2"})
        g = FnTable.from_labels(dom, grid, {"a": "1", "b": "1"})
        assert sup_metric(f, g) == ExtReal(1)
        assert sup_metric(f, f) == ExtReal(0)

    def test_single_point(self):
        dom = FinMetricSpace.discrete(("a",))
        grid = FinMetricSpace.grid(4)
        f = FnTable.from_labels(dom, grid, {"a": "0"})
        g = FnTable.from_labels(dom, grid, {"a": "3"})
        assert sup_metric(f, g) == ExtReal(3)

    def test_domain_mismatch(self):
        grid = FinMetricSpace.grid(2)
        f = FnTable(_two_point_domain(), grid, [0, 1])
        g = FnTable(FinMetricSpace.discrete(("a",)), grid, [0])
        with pytest.raises(InputError):
            sup_metric(f, g)

    def test_is_a_metric_exhaustively(self):
        # symmetry, identity, triangle over the whole function space
        dom, grid = _two_point_domain(), FinMetricSpace.grid(3)
        tables = all_tables(dom, grid)
        for f in tables:
            for g in tables:
                d_fg = sup_metric(f, g)
                assert d_fg == sup_metric(g, f)
                assert (d_fg == ExtReal(0)) == (f == g)
                for h in tables:
                    assert d_fg <= sup_metric(f, h) + sup_metric(h, g)

    def test_matches_oracle(self, rng):
        dom, grid = _two_point_domain(), FinMetricSpace.grid(4)
        dist = oracles.grid_dist(4)
        for _ in range(50):
            f = FnTable(dom, grid, rng.integers(0, 4, 2))
            g = FnTable(dom, grid, rng.integers(0, 4, 2))
            expected = oracles.sup_dist(tuple(f.entries), tuple(g.entries), dist)
            assert sup_metric(f, g) == as_extreal(expected)


class TestWithinBall:
    def test_one_point_domain(self):
        dom = FinMetricSpace.discrete(("a",))
        f = FnTable.from_labels(dom, FinMetricSpace.grid(3), {"a": "1"})
        got = [b.entries[0] for b in within_ball(f, 1)]
        assert got == [0, 1, 2]

    def test_zero_radius(self):
        dom, grid = _two_point_domain(), FinMetricSpace.grid(3)
        f = FnTable(dom, grid, [2, 0])
        assert within_ball(f, 0) == [f]

    def test_all_four_tables(self):
        # frozen from the brute-force oracle: ball(f=(0,0), eps=1) on
        # grid {0,1} is the whole 4-table space
        dom, grid = _two_point_domain(), FinMetricSpace.grid(2)
        f = FnTable(dom, grid, [0, 0])
        expected = oracles.ball((0, 0), 1, 2, oracles.grid_dist(2))
        assert len(expected) == 4
        got = [tuple(b.entries) for b in within_ball(f, 1)]
        assert got == expected

    def test_matches_oracle_everywhere(self):
        dom, grid = _two_point_domain(), FinMetricSpace.grid(3)
        dist = oracles.grid_dist(3)
        for f in all_tables(dom, grid):
            for eps in (0, 1, 2, INF):
                eps_o = "inf" if eps is INF else eps
                expected = oracles.ball(tuple(f.entries), eps_o, 3, dist)
                got = [tuple(b.entries) for b in within_ball(f, eps)]
                assert got == expected

    def test_contains_centre_and_monotone(self, rng):
        dom, grid = _two_point_domain(), FinMetricSpace.grid(4)
        for _ in range(20):
            f = FnTable(dom, grid, rng.integers(0, 4, 2))
            sizes = [len(within_ball(f, eps)) for eps in (0, 1, 2, 3, INF)]
            assert f in within_ball(f, 0)
            assert sizes == sorted(sizes)
            assert sizes[-1] == 4**2

    @given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
    @settings(max_examples=30, deadline=None)
    def test_inf_ball_is_everything(self, a, b, c):
        dom = FinMetricSpace.discrete(("p", "q", "r"))
        grid = FinMetricSpace.grid(4)
        f = FnTable(dom, grid, [a, b, c])
        assert len(within_ball(f, INF)) == 4**3


class TestBallDilate:
    def test_matches_bruteforce_enlargement(self, rng):
        grid = FinMetricSpace.grid(3)
        dist = oracles.grid_dist(3)
        k_count = 3**2
        table = rng.random((k_count, 2)) < 0.4
        for eps in (0, 1, 2):
            grown = ball_dilate(table, 2, grid, as_extreal(eps))
            mat = table_matrix(2, 3)
            for rank in range(k_count):
                members = oracles.ball(tuple(mat[rank]), eps, 3, dist)
                expected_row = np.zeros(2, dtype=bool)
                for m in members:
                    m_rank = m[0] * 3 + m[1]
                    expected_row |= table[m_rank]
                assert np.array_equal(grown[rank], expected_row), (rank, eps)

import math
from fractions import Fraction

import pytest

from trapmeasure.gasket import (
    Direction,
    GasketSpec,
    decay_fit,
    favard,
    gasket_anchors,
    lemma1_check,
    lemma2_check,
    project,
)
from trapmeasure.permutations import digit_swap_permutation
from trapmeasure.trapezoid import TrapezoidSpec, area

F = Fraction


class TestSpecAndDirection:
    def test_depth_cap(self):
        with pytest.raises(ValueError):
            GasketSpec(9)
        assert GasketSpec(9, cap=9).depth == 9

    def test_direction_needs_exactly_one_mode(self):
        with pytest.raises(ValueError):
            Direction()
        with pytest.raises(ValueError):
            Direction(slope=F(1), angle=0.5)

    def test_slope_must_be_positive(self):
        with pytest.raises(ValueError):
            Direction.from_slope(F(-1, 2))

    def test_angle_range_and_finiteness(self):
        with pytest.raises(ValueError):
            Direction.from_angle(math.pi)
        with pytest.raises(ValueError):
            Direction.from_angle(float("nan"))
        assert Direction.from_angle(0.0).angle == 0.0


class TestAnchors:
    def test_depth_zero(self):
        assert gasket_anchors(GasketSpec(0)) == ((0, 0),)

    def test_depth_one(self):
        assert gasket_anchors(GasketSpec(1)) == (
            (0, 0),
            (F(2, 3), 0),
            (0, F(2, 3)),
        )

    def test_depth_two_count_and_member(self):
        pts = gasket_anchors(GasketSpec(2))
        assert len(pts) == 9
        assert len(set(pts)) == 9
        assert (F(8, 9), F(0)) in pts


class TestProjection:
    def test_exact_diagonal_projection_of_unit_triangle(self):
        proj = project(GasketSpec(0), Direction.from_slope(F(1)))
        assert [(p.lo, p.hi) for p in proj.scaled_set.parts] == [(0, 1)]
        assert proj.measure == pytest.approx(math.cos(math.pi / 4), abs=1e-12)

    def test_numeric_horizontal_projection(self):
        proj = project(GasketSpec(0), Direction.from_angle(0.0))
        assert proj.measure == pytest.approx(1.0, abs=1e-12)
        assert proj.parts == ((0.0, 1.0),)

    def test_exact_half_slope_depth_one_tiles(self):
        proj = project(GasketSpec(1), Direction.from_slope(F(1, 2)))
        # scaled anchors {0, 2/3, 1/3} with width max(1, 1/2)/3 merge to [0,1]
        assert [(p.lo, p.hi) for p in proj.scaled_set.parts] == [(0, 1)]
        assert proj.measure == pytest.approx(2 / math.sqrt(5), abs=1e-12)

    @pytest.mark.parametrize("depth", [0, 1, 2, 3, 4])
    @pytest.mark.parametrize("slope", [F(1, 3), F(1, 2), F(1), F(3, 2), F(2), F(5)])
    def test_exact_and_numeric_agree(self, depth, slope):
        spec = GasketSpec(depth)
        exact = project(spec, Direction.from_slope(slope))
        numeric = project(spec, Direction.from_angle(math.atan(float(slope))))
        assert abs(exact.measure - numeric.measure) <= 1e-9

    @pytest.mark.parametrize("depth", [0, 1, 3, 5])
    def test_coordinate_swap_symmetry(self, depth):
        spec = GasketSpec(depth)
        for k in range(1, 8):
            theta = k * math.pi / 16
            a = project(spec, Direction.from_angle(theta)).measure
            b = project(spec, Direction.from_angle(math.pi / 2 - theta)).measure
            assert abs(a - b) <= 1e-9

    def test_numeric_projection_deterministic(self):
        spec = GasketSpec(4)
        theta = 0.7
        first = project(spec, Direction.from_angle(theta))
        second = project(spec, Direction.from_angle(theta))
        assert first == second


class TestFavard:
    def test_triangle_baseline(self):
        # support width of the unit right triangle integrates to sqrt(2) + 2
        value = favard(GasketSpec(0), 4096)
        assert abs(value - (math.sqrt(2) + 2) / math.pi) <= 5e-3

    def test_rejects_tiny_grids(self):
        with pytest.raises(ValueError):
            favard(GasketSpec(0), 8)

    def test_nonincreasing_in_depth(self):
        values = [favard(GasketSpec(d), 512) for d in range(0, 7)]
        assert all(a + 1e-3 >= b for a, b in zip(values, values[1:]))

    def test_depth_five_well_below_depth_one(self):
        deep = favard(GasketSpec(5), 8192)
        shallow = favard(GasketSpec(1), 8192)
        assert deep <= 0.9 * shallow

    def test_above_minimum_grid_projection(self):
        spec = GasketSpec(3)
        value = favard(spec, 256)
        grid_min = min(
            project(spec, Direction.from_angle((i + 0.5) * math.pi / 256)).measure
            for i in range(256)
        )
        assert value >= grid_min > 0

    def test_odd_grid_supported(self):
        even = favard(GasketSpec(1), 1024)
        odd = favard(GasketSpec(1), 1023)
        assert abs(even - odd) <= 1e-2


class TestLemma1:
    def test_rows_cover_grid_and_flag_violations(self):
        grid = [F(k, 10) for k in range(11)]
        rows = lemma1_check(2, grid)
        assert [row.t for row in rows] == grid
        # the literal bound fails at t = 0: the slice tiles [0,1] while the
        # projection side is strictly smaller
        first = rows[0]
        assert first.lhs == 1
        assert first.rhs < 1
        assert not first.ok and first.ratio > 1

    def test_reproducible_across_runs(self):
        grid = [F(k, 4) for k in range(5)]
        first = lemma1_check(3, grid)
        second = lemma1_check(3, grid)
        for a, b in zip(first, second):
            assert a == b

    def test_full_height_ok(self):
        # t = 1: slice tiles [0,1]; rhs = 2 * proj at atan(1/2) covers it
        rows = lemma1_check(1, [F(1)])
        assert rows[0].lhs == 1

    def test_rejects_heights_outside_unit_interval(self):
        with pytest.raises(ValueError):
            lemma1_check(1, [F(3, 2)])


class TestLemma2:
    def test_pinned_grid_ratios(self):
        rows = lemma2_check(0.5, [5, 10, 20, 40])
        ratios = [row.ratio for row in rows]
        assert all(math.isfinite(r) for r in ratios)
        assert all(1 < r < 1.2 for r in ratios)
        assert all(a > b for a, b in zip(ratios, ratios[1:]))
        assert 1 < ratios[-1] < 1.1

    def test_small_exponent_limit(self):
        # p -> 0: the integral tends to e^n - 1, so the ratio tends to 1
        rows = lemma2_check(0.01, [20])
        assert rows[0].ratio == pytest.approx(1.0, rel=0.1)

    def test_rejects_bad_exponent(self):
        with pytest.raises(ValueError):
            lemma2_check(0.0, [5])
        with pytest.raises(ValueError):
            lemma2_check(1.0, [5])

    def test_rejects_nonpositive_grid(self):
        with pytest.raises(ValueError):
            lemma2_check(0.5, [0])


class TestDecayFit:
    def test_exact_power_law(self):
        fit = decay_fit([(1, 1.0), (2, 2**-0.5), (4, 4**-0.5)])
        assert fit.p == pytest.approx(0.5, abs=1e-12)
        assert fit.c == pytest.approx(1.0, abs=1e-12)
        assert fit.residual <= 1e-12

    def test_constant_values(self):
        fit = decay_fit([(1, 0.7), (2, 0.7), (3, 0.7)])
        assert fit.p == 0.0

    def test_rejects_degenerate_input(self):
        with pytest.raises(ValueError):
            decay_fit([(1, 1.0), (2, 0.5)])
        with pytest.raises(ValueError):
            decay_fit([(1, 1.0), (2, -0.5), (3, 0.2)])
        with pytest.raises(ValueError):
            decay_fit([(0.5, 1.0), (2, 0.5), (3, 0.2)])
        with pytest.raises(ValueError):
            decay_fit([(2, 1.0), (2, 0.5), (2, 0.2)])

    def test_digit_swap_family_has_positive_exponent(self):
        pairs = [
            (m, float(area(TrapezoidSpec(3**m, digit_swap_permutation(m)))))
            for m in range(1, 5)
        ]
        fit = decay_fit(pairs)
        assert fit.p > 0

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setcalc import catalog
from setcalc.classes import (
    ClassPair,
    ConvexValue,
    Grid1D,
    IntervalValue,
    SampledFn,
    VectorClass,
    canonical_pair,
    class_add,
    class_equal,
    class_leq,
    class_max,
    class_min,
    class_mul,
    class_scale,
    constant_class,
    integral,
    integral_gap,
    is_quasicontinuous,
    lsc_hull,
    measure_lip,
    usc_hull,
    value_at,
    value_at_vec,
    zero_class,
)
from setcalc.errors import (
    GridMismatch,
    InvalidGrid,
    InvalidSample,
    OutOfDomain,
    RepresentativeInconsistent,
)

SEEDS = st.integers(min_value=0, max_value=2**32 - 1)


def _class_gap(f, g):
    return max(
        float(np.max(np.abs(f.lower.values - g.lower.values))),
        float(np.max(np.abs(f.upper.values - g.upper.values))),
    )


class TestGrid1D:
    """Tests for Grid1D."""

    def test_nodes(self, grid):
        assert grid.h == pytest.approx(0.005)
        assert grid.nodes[0] == -1.0
        assert grid.nodes[-1] == 1.0
        assert grid.nodes[200] == 0.0

    def test_nodes_are_read_only(self, grid):
        with pytest.raises(ValueError):
            grid.nodes[0] = 5.0

    @pytest.mark.parametrize("a,b,n", [(1.0, -1.0, 10), (0.0, 0.0, 10), (0.0, 1.0, 1), (0.0, float("inf"), 10), (0.0, 1.0, 2.5)])
    def test_invalid(self, a, b, n):
        with pytest.raises(InvalidGrid):
            Grid1D(a, b, n)

    def test_locate(self, grid):
        assert grid.locate(0.0) == (200, 0.0)
        i, t = grid.locate(0.0025)
        assert i == 200
        assert t == pytest.approx(0.5)
        assert grid.locate(1.0) == (400, 0.0)

    def test_locate_snaps_to_nodes(self, grid):
        assert grid.locate(0.005 * (1 + 1e-12)) == (201, 0.0)

    def test_locate_out_of_domain(self, grid):
        with pytest.raises(OutOfDomain):
            grid.locate(1.5)
        with pytest.raises(OutOfDomain):
            grid.locate(float("nan"))

    def test_nearest_and_node_index(self, grid):
        assert grid.nearest(0.0026) == 201
        assert grid.node_index(0.005) == 201
        assert grid.node_index(0.0025) is None

    def test_same_as(self, grid):
        assert grid.same_as(Grid1D(-1, 1, 401))
        assert not grid.same_as(Grid1D(-1, 1, 201))


class TestSampledFn:
    """Tests for SampledFn validation."""

    def test_from_values_measures_metadata(self, grid):
        f = SampledFn.from_values(grid, 3.0 * grid.nodes)
        assert f.lip == pytest.approx(3.0)
        assert f.bound == 3.0
        assert f.is_continuous

    def test_values_are_read_only(self, grid):
        f = SampledFn.from_values(grid, grid.nodes)
        with pytest.raises(ValueError):
            f.values[0] = 1.0

    def test_rejects_wrong_shape(self, grid):
        with pytest.raises(InvalidSample):
            SampledFn.from_values(grid, np.zeros(10))

    def test_rejects_non_finite(self, grid):
        values = np.zeros(grid.n)
        values[3] = np.nan
        with pytest.raises(InvalidSample):
            SampledFn.from_values(grid, values)

    def test_rejects_values_above_bound(self, grid):
        with pytest.raises(InvalidSample):
            SampledFn(grid, np.full(grid.n, 2.0), (), 0.0, 1.0)

    def test_rejects_steep_step(self, grid):
        with pytest.raises(InvalidSample):
            SampledFn(grid, 10.0 * grid.nodes, (), 1.0, 10.0)

    def test_rejects_bad_jump_indices(self, grid):
        with pytest.raises(InvalidSample):
            SampledFn.from_values(grid, np.zeros(grid.n), [grid.n])

    def test_rejects_all_jump_nodes(self):
        small = Grid1D(0.0, 1.0, 3)
        with pytest.raises(InvalidSample):
            SampledFn.from_values(small, np.zeros(3), [0, 1, 2])

    def test_jump_free_steps_ignore_jumps(self, grid):
        f = catalog.get_entry("sign").sample(grid)
        assert f.jumps == (200,)
        assert f.lip == 0.0

    def test_one_sided_limits(self, sign):
        left, right = sign.lower.one_sided_limits()
        assert left[200] == -1.0
        assert right[200] == 1.0
        assert left[10] == right[10] == sign.lower.values[10]

    def test_adjacent_jumps_read_past_each_other(self, grid):
        values = np.where(grid.nodes < 0, -1.0, 1.0)
        f = SampledFn.from_values(grid, values, [199, 200, 201])
        left, right = f.one_sided_limits()
        assert left[200] == -1.0
        assert right[200] == 1.0

    def test_measure_lip(self, grid):
        assert measure_lip(grid, np.abs(grid.nodes)) == pytest.approx(1.0)


class TestHulls:
    """Tests for lsc_hull, usc_hull and quasicontinuity."""

    def test_hulls_at_jump(self, grid):
        raw = catalog.get_entry("sign").sample(grid)
        assert raw.values[200] == 0.0
        assert lsc_hull(raw).values[200] == -1.0
        assert usc_hull(raw).values[200] == 1.0

    def test_continuous_sample_is_its_own_hull(self, abs_class):
        f = abs_class.lower
        assert lsc_hull(f) is f
        assert usc_hull(f) is f

    @settings(max_examples=25, deadline=None)
    @given(seed=SEEDS)
    def test_hull_order_and_idempotence(self, seed):
        grid = Grid1D(-1.0, 1.0, 201)
        f = catalog.random_step(grid, np.random.default_rng(seed), jumps=2, spacing=10)
        lo, up = lsc_hull(f), usc_hull(f)
        assert np.all(lo.values <= f.values)
        assert np.all(f.values <= up.values)
        assert np.array_equal(lsc_hull(lo).values, lo.values)
        assert np.array_equal(usc_hull(up).values, up.values)

    def test_raw_sign_is_not_quasicontinuous(self, grid):
        raw = catalog.get_entry("sign").sample(grid)
        assert not is_quasicontinuous(raw)

    def test_canonical_representatives_are_quasicontinuous(self, sign):
        assert is_quasicontinuous(sign.lower)
        assert is_quasicontinuous(sign.upper)


class TestClassPair:
    """Tests for ClassPair and canonical_pair."""

    def test_sign_representatives(self, sign):
        assert sign.lower.values[200] == -1.0
        assert sign.upper.values[200] == 1.0
        assert sign.essential_jumps == (200,)
        assert not sign.is_continuous

    def test_values_at_jumps_do_not_matter(self, grid, sign):
        values = np.sign(grid.nodes)
        values[200] = 0.7
        moved = canonical_pair(SampledFn.from_values(grid, values, [200], 0.0, 1.0))
        assert _class_gap(moved, sign) == 0.0

    def test_removable_jump_is_not_essential(self, grid):
        values = np.array(grid.nodes)
        values[100] = 0.9
        pair = canonical_pair(SampledFn.from_values(grid, values, [100], 1.0, 1.0))
        assert pair.essential_jumps == ()
        assert pair.lower.values[100] == pytest.approx(grid.nodes[100])

    def test_rejects_lower_above_upper(self, abs_class):
        with pytest.raises(RepresentativeInconsistent):
            ClassPair(abs_class.upper, SampledFn.from_values(abs_class.grid, abs_class.lower.values - 0.5))

    def test_rejects_different_jump_sets(self, grid, sign):
        other = SampledFn.from_values(grid, sign.upper.values, [200, 300], 0.0, 1.0)
        with pytest.raises(RepresentativeInconsistent):
            ClassPair(sign.lower, other)

    def test_rejects_non_hull_pair(self, grid, sign):
        upper = np.array(sign.upper.values)
        upper[200] = 0.0
        with pytest.raises(RepresentativeInconsistent):
            ClassPair(sign.lower, SampledFn.from_values(grid, upper, [200], 0.0, 1.0))

    def test_rejects_different_grids(self, abs_class, coarse_grid):
        other = catalog.build("abs", coarse_grid)
        with pytest.raises(GridMismatch):
            ClassPair(abs_class.lower, other.upper)


class TestAlgebra:
    """Tests for the vector space, ring and lattice operations."""

    def test_sign_minus_sign_is_zero(self, sign, zero):
        diff = class_add(sign, class_scale(-1.0, sign))
        assert class_equal(diff, zero)
        assert diff.essential_jumps == ()
        assert value_at(diff, 0.0) == IntervalValue(0.0, 0.0)

    def test_operators(self, sign, abs_class):
        assert class_equal(sign + abs_class, class_add(sign, abs_class))
        assert class_equal(2 * sign, class_scale(2.0, sign))
        assert class_equal(sign * abs_class, class_mul(sign, abs_class))
        assert class_equal(sign - sign, zero_class(sign.grid))
        assert class_equal(-sign, class_scale(-1.0, sign))

    def test_metadata_propagates(self, sign, abs_class):
        total = class_add(sign, abs_class)
        assert total.jumps == (200,)
        assert total.bound >= 2.0
        assert class_scale(-3.0, abs_class).lip > 2.99

    def test_grid_mismatch(self, sign, coarse_grid):
        with pytest.raises(GridMismatch):
            class_add(sign, catalog.build("sign", coarse_grid))

    def test_sign_times_abs_is_x(self, grid, sign, abs_class):
        product = class_mul(sign, abs_class)
        assert np.max(np.abs(product.lower.values - grid.nodes)) <= product.tol_rep
        assert product.essential_jumps == ()

    @settings(max_examples=20, deadline=None)
    @given(seed=SEEDS)
    def test_ring_and_lattice_laws(self, seed):
        grid = Grid1D(-1.0, 1.0, 201)
        rng = np.random.default_rng(seed)
        f, g, h = (canonical_pair(catalog.random_piecewise(grid, rng, 3)) for _ in range(3))
        tol = max(p.tol_rep for p in (f, g, h))
        assert _class_gap(class_add(f, g), class_add(g, f)) <= tol
        assert _class_gap(class_add(class_add(f, g), h), class_add(f, class_add(g, h))) <= tol
        assert _class_gap(class_mul(f, class_add(g, h)), class_add(class_mul(f, g), class_mul(f, h))) <= tol
        assert _class_gap(class_min(f, class_max(g, h)), class_max(class_min(f, g), class_min(f, h))) <= tol
        assert class_leq(class_min(f, g), f)
        assert class_leq(f, class_max(f, g))

    def test_constant_class(self, grid):
        c = constant_class(grid, 2.5)
        assert c.lip == 0.0
        assert value_at(c, 0.3) == IntervalValue(2.5, 2.5)


class TestValues:
    """Tests for set-valued evaluation."""

    def test_sign_at_zero(self, sign):
        assert value_at(sign, 0.0) == IntervalValue(-1.0, 1.0)

    def test_zero_at_zero(self, zero):
        assert value_at(zero, 0.0) == IntervalValue(0.0, 0.0)

    def test_interpolates_inside_cells(self, abs_class):
        value = value_at(abs_class, 0.0025)
        assert value.is_singleton()
        assert value.lo == pytest.approx(0.0025)

    def test_cell_next_to_jump_uses_one_sided_value(self, sign):
        assert value_at(sign, 0.0025) == IntervalValue(1.0, 1.0)
        assert value_at(sign, -0.0025) == IntervalValue(-1.0, -1.0)

    def test_out_of_domain(self, sign):
        with pytest.raises(OutOfDomain):
            value_at(sign, -1.5)

    def test_vector_value_at_joint_jump(self, sign, abs_class):
        F = VectorClass.of(sign, abs_class)
        value = value_at_vec(F, 0.0)
        assert value.dim == 2
        assert not value.is_singleton()
        assert value.contains((0.0, 0.0))
        assert value.contains((-1.0, 0.0))
        assert value.contains((1.0, 0.0))

    def test_vector_value_off_jumps_is_a_point(self, sign, abs_class):
        value = value_at_vec(VectorClass.of(sign, abs_class), 0.5)
        assert value.is_singleton()
        assert value.vertices[0] == pytest.approx([1.0, 0.5])

    def test_scalar_vector_value_reduces_to_interval(self, sign):
        value = value_at_vec(VectorClass.of(sign), 0.0)
        assert value.as_interval() == IntervalValue(-1.0, 1.0)

    def test_dot(self, sign, abs_class):
        F = VectorClass.of(sign, abs_class)
        assert class_equal(F.dot((1.0, 0.0)), sign)
        assert F.m == 2
        assert F.jumps == (200,)


class TestIntegrals:
    """Tests for integral and integral_gap."""

    def test_lower_and_upper_integrals_agree(self, sign):
        gap, allowed = integral_gap(sign)
        assert gap <= allowed
        assert integral(sign) == pytest.approx(0.0, abs=1e-2)

    def test_abs_integral(self, abs_class):
        assert integral(abs_class) == pytest.approx(1.0, abs=1e-4)
        assert integral(abs_class.lower) == integral(abs_class, "upper")


class TestIntervalValue:
    """Tests for IntervalValue."""

    def test_invalid(self):
        with pytest.raises(InvalidSample):
            IntervalValue(1.0, 0.0)

    def test_minkowski_sum(self):
        assert IntervalValue(-1, 1) + IntervalValue(-1, 1) == IntervalValue(-2, 2)

    def test_scale_and_negation(self):
        assert IntervalValue(0, 1).scale(-2) == IntervalValue(-2, 0)
        assert -IntervalValue(0, 1) == IntervalValue(-1, 0)

    def test_relations(self):
        inner, outer = IntervalValue(0, 0), IntervalValue(-2, 2)
        assert inner.issubset(outer)
        assert not outer.issubset(inner)
        assert outer.contains(2.0)
        assert outer.hausdorff(inner) == 2.0
        assert IntervalValue.point(3).is_singleton()


class TestConvexValue:
    """Tests for ConvexValue."""

    SQUARE = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]

    def test_hull_drops_interior_points(self):
        value = ConvexValue.hull(self.SQUARE + [(0.0, 0.0), (0.5, 0.0)])
        assert len(value.vertices) == 4

    def test_collinear_hull_keeps_end_points(self):
        value = ConvexValue.hull([(0.0, 0.0), (2.0, 2.0), (0.5, 0.5), (1.0, 1.0)])
        assert len(value.vertices) == 2
        assert sorted(map(tuple, value.vertices.tolist())) == [(0.0, 0.0), (2.0, 2.0)]

    def test_hull_one_dimensional(self):
        value = ConvexValue.hull([[3.0], [-1.0], [0.0]])
        assert value.as_interval() == IntervalValue(-1.0, 3.0)

    def test_contains_and_support(self):
        value = ConvexValue.hull(self.SQUARE)
        assert value.contains((0.0, 0.0))
        assert value.contains((1.0, 0.5))
        assert not value.contains((1.5, 0.0))
        assert value.support((1.0, 0.0)) == 1.0
        assert value.distance((2.0, 0.0)) == pytest.approx(1.0)

    def test_hausdorff(self):
        square = ConvexValue.hull(self.SQUARE)
        point = ConvexValue.point((0.0, 0.0))
        assert square.hausdorff(point) == pytest.approx(np.sqrt(2.0))
        assert point.issubset(square)

    def test_segment(self):
        seg = ConvexValue.hull([(-1.0, 0.0), (1.0, 0.0)])
        assert seg.contains((0.0, 0.0))
        assert seg.distance((0.0, 1.0)) == pytest.approx(1.0)

    def test_rejects_empty(self):
        with pytest.raises(InvalidSample):
            ConvexValue.hull(np.empty((0, 2)))

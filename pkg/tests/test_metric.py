import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setcalc import catalog
from setcalc.classes import Grid1D, SampledFn, VectorClass, canonical_pair, class_add, constant_class
from setcalc.envelope import lip_lower_envelope, lip_upper_envelope
from setcalc.errors import DimensionMismatch, GridMismatch, HypothesisViolated, InvalidSchedule
from setcalc.metric import (
    check_graph_limit,
    check_statement_4_1,
    class_distance,
    default_directions,
    delta_metric,
    limit_tolerance,
    r_metric,
    r_metric_vec,
    s_metric,
    s_metric_vec,
    saturation_modulus,
    tends_to_zero,
    truncation_ok,
)
from setcalc.verify import TRUNCATION_PAIRS

SEEDS = st.integers(min_value=0, max_value=2**32 - 1)
KS = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0)


def _random_classes(seed, count):
    grid = Grid1D(-1.0, 1.0, 121)
    rng = np.random.default_rng(seed)
    return [canonical_pair(catalog.random_piecewise(grid, rng, 3, 6)) for _ in range(count)]


def _clamps(grid):
    return [catalog.build(f"clamp:{2 ** j}", grid) for j in range(2, 9)]


class TestScalarMetrics:
    """Tests for s_metric and r_metric."""

    def test_identity(self, sign):
        assert s_metric(sign, sign, KS).value == 0.0
        assert r_metric(sign, sign, KS).value == 0.0

    def test_distinct_classes_are_apart(self, sign, zero):
        assert s_metric(sign, zero, KS).value > 0.1

    @settings(max_examples=15, deadline=None)
    @given(seed=SEEDS)
    def test_symmetry_and_triangle(self, seed):
        f, g, h = _random_classes(seed, 3)
        tol = max(p.tol_rep for p in (f, g, h))
        assert s_metric(f, g, KS).value == pytest.approx(s_metric(g, f, KS).value, abs=1e-12)
        assert s_metric(f, h, KS).value <= s_metric(f, g, KS).value + s_metric(g, h, KS).value + tol
        assert r_metric(f, h, KS).value <= r_metric(f, g, KS).value + r_metric(g, h, KS).value + tol

    @settings(max_examples=15, deadline=None)
    @given(seed=SEEDS)
    def test_r_dominates_s(self, seed):
        f, g = _random_classes(seed, 2)
        assert r_metric(f, g, KS).value >= s_metric(f, g, KS).value

    def test_constants(self, grid):
        a, b = constant_class(grid, 0.0), constant_class(grid, 0.25)
        assert s_metric(a, b, KS).value == pytest.approx(0.25)
        assert r_metric(a, b, KS).value == pytest.approx(0.25 + 0.5)

    def test_report(self, sign, zero):
        report = s_metric(sign, zero, KS)
        assert report.kind == "s"
        assert [row[0] for row in report.per_k][:len(KS)] == list(KS)
        assert report.value == max(max(lo, up) for _, lo, up in report.per_k)
        assert report.truncation_bound >= 0.0
        doc = report.to_dict()
        assert doc["per_k"][0]["k"] == 1.0
        assert doc["directions"] is None
        assert "tol_rep" in doc["tolerances"]

    def test_default_schedule(self, sign, zero):
        assert len(s_metric(sign, zero).per_k) == 11

    def test_unknown_kind(self, sign):
        with pytest.raises(InvalidSchedule):
            class_distance("q", sign, sign, KS)

    def test_grid_mismatch(self, sign, coarse_grid):
        with pytest.raises(GridMismatch):
            s_metric(sign, catalog.build("sign", coarse_grid), KS)

    def test_delta_metric(self, grid):
        a, b = constant_class(grid, 0.0), constant_class(grid, 0.5)
        assert delta_metric(a.lower, b.lower) == pytest.approx(0.5 + 1.0)

    def test_clamps_approach_sign(self, grid, sign):
        dists = [s_metric(c, sign, KS).value for c in _clamps(grid)]
        assert dists[-1] < dists[0]
        assert dists[-1] <= 10.0 * grid.h * 2.0


class TestVectorMetrics:
    """Tests for s_metric_vec and r_metric_vec."""

    def test_scalar_case_matches(self, sign, abs_class):
        F, G = VectorClass.of(sign), VectorClass.of(abs_class)
        assert r_metric_vec(F, G, KS).value == pytest.approx(r_metric(sign, abs_class, KS).value, abs=1e-12)

    def test_pair_with_zero_component(self, sign, zero):
        F = VectorClass.of(sign, zero)
        G = VectorClass.of(zero, zero)
        report = s_metric_vec(F, G, KS, default_directions(2, 16))
        assert report.value >= s_metric(sign, zero, KS).value - 1e-12
        assert len(report.directions) == 16
        assert len(report.per_k) >= len(KS)

    def test_dimension_mismatch(self, sign):
        with pytest.raises(DimensionMismatch):
            s_metric_vec(VectorClass.of(sign), VectorClass.of(sign, sign), KS)

    def test_rejects_non_unit_direction(self, sign):
        F = VectorClass.of(sign, sign)
        with pytest.raises(InvalidSchedule):
            s_metric_vec(F, F, KS, [(1.0, 1.0)])


class TestDirections:
    """Tests for default_directions."""

    def test_scalar(self):
        assert default_directions(1) == ((1.0,), (-1.0,))

    def test_plane(self):
        dirs = default_directions(2, 8)
        assert len(dirs) == 8
        assert dirs[0] == (1.0, 0.0)
        for d in dirs:
            assert math.hypot(*d) == pytest.approx(1.0)

    def test_higher_dimensions_are_seeded(self):
        a = default_directions(3, 10, seed=5)
        assert a == default_directions(3, 10, seed=5)
        for d in a:
            assert np.linalg.norm(d) == pytest.approx(1.0)

    def test_invalid_dimension(self):
        with pytest.raises(DimensionMismatch):
            default_directions(0)


class TestTendsToZero:
    """Tests for tends_to_zero."""

    def test_decreasing(self):
        assert tends_to_zero([1.0, 0.5, 0.1, 0.01], 0.05)

    def test_final_term_too_large(self):
        assert not tends_to_zero([1.0, 0.5, 0.6], 0.05)

    def test_rising_tail(self):
        assert not tends_to_zero([1.0, 0.0, 0.0, 0.3, 0.01], 0.05)

    def test_empty(self):
        assert not tends_to_zero([], 1.0)


class TestGraphLimit:
    """Tests for check_graph_limit and check_statement_4_1."""

    def test_clamps_to_sign(self, grid, sign):
        clamps = _clamps(grid)
        zeros = [0.0] * len(clamps)
        assert check_graph_limit(clamps, sign, zeros, 0.0, zeros, 0.0, ks=KS)

    def test_points_approaching_the_jump(self, grid, sign):
        clamps = _clamps(grid)
        xs = [2.0 ** (1 - j) for j in range(2, 9)]
        etas = [1.0] * len(clamps)
        assert check_graph_limit(clamps, sign, xs, 0.0, etas, 1.0, ks=KS)

    def test_constant_sequence(self, abs_class):
        seq = [abs_class] * 3
        assert check_graph_limit(seq, abs_class, [0.5] * 3, 0.5, [0.5] * 3, 0.5, ks=KS)

    def test_adversarial_eta(self, grid, sign):
        clamps = _clamps(grid)
        zeros = [0.0] * len(clamps)
        with pytest.raises(HypothesisViolated):
            check_graph_limit(clamps, sign, zeros, 0.0, [2.0] * len(clamps), 2.0, ks=KS)

    def test_diverging_functions(self, grid, sign):
        seq = [constant_class(grid, float(j)) for j in range(4)]
        with pytest.raises(HypothesisViolated):
            check_graph_limit(seq, sign, [0.0] * 4, 0.0, [0.0] * 4, 0.0, ks=KS)

    def test_unequal_lengths(self, sign):
        with pytest.raises(HypothesisViolated):
            check_graph_limit([sign], sign, [0.0, 0.0], 0.0, [0.0], 0.0, ks=KS)

    def test_graph_convergence_implies_s_convergence(self, grid, sign):
        assert check_statement_4_1(sign, [c.lower for c in _clamps(grid)], KS)

    def test_smooth_abs_family(self, grid, abs_class):
        seq = [catalog.build(f"smoothabs:{2 ** j}", grid).lower for j in range(2, 9)]
        assert check_statement_4_1(abs_class, seq, KS)

    def test_statement_rejects_jumps(self, sign):
        with pytest.raises(HypothesisViolated):
            check_statement_4_1(sign, [sign.lower], KS)

    def test_statement_rejects_non_converging_graphs(self, grid, sign):
        with pytest.raises(HypothesisViolated):
            check_statement_4_1(sign, [catalog.build("zero", grid).lower] * 3, KS)


class TestTruncation:
    """Tests for the truncation bound and schedule extension."""

    def test_saturation_modulus(self, sign, zero):
        assert saturation_modulus(sign) == pytest.approx(2.0 / sign.grid.h)
        assert saturation_modulus(zero) == 0.0

    def test_truncation_ok(self):
        assert truncation_ok(1.0, 0.05)
        assert not truncation_ok(1.0, 0.2)
        assert truncation_ok(0.0, 1e-7)
        assert not truncation_ok(0.0, 1e-3)

    @pytest.mark.parametrize("kind", ["s", "r"])
    @pytest.mark.parametrize("a,b", TRUNCATION_PAIRS)
    def test_default_schedule_meets_the_contract(self, grid, kind, a, b):
        report = class_distance(kind, catalog.build(a, grid), catalog.build(b, grid))
        assert truncation_ok(report.value, report.truncation_bound)

    def test_saturated_schedule_is_certified(self, sign, zero):
        assert s_metric(sign, zero).truncation_bound == 0.0

    def test_short_schedule_is_extended(self, grid, sign):
        clamp = catalog.build("clamp:64", grid)
        report = s_metric(clamp, sign, (1.0, 2.0, 4.0))
        ks = [row[0] for row in report.per_k]
        assert len(ks) > 3
        assert ks[:4] == [1.0, 2.0, 4.0, 8.0]
        assert truncation_ok(report.value, report.truncation_bound)

    def test_extension_can_be_switched_off(self, grid, sign):
        clamp = catalog.build("clamp:64", grid)
        report = class_distance("s", clamp, sign, (1.0, 2.0, 4.0), extend=False)
        assert [row[0] for row in report.per_k] == [1.0, 2.0, 4.0]
        assert not truncation_ok(report.value, report.truncation_bound)

    def test_vector_schedule_is_extended(self, grid, sign):
        F = VectorClass.of(catalog.build("clamp:64", grid))
        report = s_metric_vec(F, VectorClass.of(sign), (1.0, 2.0, 4.0))
        assert len(report.per_k) > 3
        assert truncation_ok(report.value, report.truncation_bound)


class TestConvergence:
    """Tests relating s- and r-convergence of sequences of classes."""

    def test_r_convergence_implies_s_convergence(self, grid, sign):
        clamps = _clamps(grid)
        tol = limit_tolerance(clamps + [sign])
        r_dists = [r_metric(c, sign, KS).value for c in clamps]
        s_dists = [s_metric(c, sign, KS).value for c in clamps]
        assert tends_to_zero(r_dists, tol)
        assert tends_to_zero(s_dists, tol)
        for c in clamps:
            s = class_distance("s", c, sign, KS, extend=False).value
            assert s <= class_distance("r", c, sign, KS, extend=False).value + 1e-12

    def test_shifted_abs_converges_in_both(self, grid, abs_class):
        seq = [class_add(abs_class, constant_class(grid, 2.0 ** -j)) for j in range(1, 9)]
        tol = limit_tolerance(seq + [abs_class])
        for metric in (s_metric, r_metric):
            assert tends_to_zero([metric(f, abs_class, KS).value for f in seq], tol)

    @pytest.mark.parametrize("metric", [s_metric, r_metric])
    def test_cauchy_sequences_have_their_limit(self, grid, sign, abs_class, metric):
        for seq, limit in (
            (_clamps(grid), sign),
            ([class_add(abs_class, constant_class(grid, 2.0 ** -j)) for j in range(1, 9)], abs_class),
        ):
            tol = limit_tolerance(seq + [limit])
            gaps = [metric(a, b, KS).value for a, b in zip(seq, seq[1:])]
            assert tends_to_zero(gaps, tol)
            assert tends_to_zero([metric(f, limit, KS).value for f in seq], tol)

    def test_diverging_sequence_is_not_cauchy(self, grid):
        seq = [constant_class(grid, float(j)) for j in range(5)]
        gaps = [s_metric(a, b, KS).value for a, b in zip(seq, seq[1:])]
        assert not tends_to_zero(gaps, limit_tolerance(seq))

    @settings(max_examples=5, deadline=None)
    @given(seed=SEEDS)
    def test_envelope_sums_converge_to_the_sum(self, seed):
        grid = Grid1D(-1.0, 1.0, 121)
        rng = np.random.default_rng(seed)
        f = class_add(canonical_pair(catalog.random_piecewise(grid, rng, 3, 6)), catalog.build("sign", grid))
        g = canonical_pair(catalog.random_piecewise(grid, rng, 3, 6))
        target = class_add(f, g)
        dists = []
        for j in range(11):
            k = 2.0 ** j
            mixed = lip_lower_envelope(f.lower, k).values + lip_upper_envelope(g.upper, k).values
            dists.append(s_metric(canonical_pair(SampledFn.from_values(grid, mixed)), target).value)
        assert tends_to_zero(dists, limit_tolerance([f, g, target]))

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setcalc import catalog
from setcalc.classes import Grid1D, SampledFn
from setcalc.errors import GridMismatch, HasJumps
from setcalc.hausdorff import (
    closed_graph,
    closed_graph_hausdorff,
    graph_hausdorff,
    point_set_hausdorff,
    polyline_hausdorff,
    resample,
)

SEEDS = st.integers(min_value=0, max_value=2**32 - 1)


class TestGraphHausdorff:
    """Tests for graph_hausdorff."""

    def test_identical_graphs(self, abs_class):
        assert graph_hausdorff(abs_class.lower, abs_class.lower) == 0.0

    def test_parallel_constants(self, grid):
        f = SampledFn.from_values(grid, np.zeros(grid.n))
        g = SampledFn.from_values(grid, np.full(grid.n, 0.3))
        assert graph_hausdorff(f, g) == pytest.approx(0.3)

    def test_shifted_line(self, grid):
        f = SampledFn.from_values(grid, grid.nodes)
        g = SampledFn.from_values(grid, grid.nodes + 0.1)
        # endpoints are 0.1 away, interior points 0.1/sqrt(2)
        assert graph_hausdorff(f, g) == pytest.approx(0.1)

    def test_symmetric(self, grid, rng):
        f = catalog.random_piecewise(grid, rng)
        g = catalog.random_piecewise(grid, rng)
        assert graph_hausdorff(f, g) == pytest.approx(graph_hausdorff(g, f))

    def test_different_resolutions(self, grid):
        f = catalog.build("abs", grid).lower
        g = catalog.build("abs", Grid1D(-1.0, 1.0, 101)).lower
        assert graph_hausdorff(f, g) <= 1e-12

    def test_rejects_jumps(self, sign, abs_class):
        with pytest.raises(HasJumps):
            graph_hausdorff(sign.lower, abs_class.lower)

    def test_rejects_different_intervals(self, abs_class):
        other = catalog.build("abs", Grid1D(-2.0, 2.0, 401))
        with pytest.raises(GridMismatch):
            graph_hausdorff(abs_class.lower, other.lower)

    @settings(max_examples=20, deadline=None)
    @given(seed=SEEDS)
    def test_matches_point_set_oracle(self, seed):
        grid = Grid1D(-1.0, 1.0, 101)
        rng = np.random.default_rng(seed)
        f, g = catalog.random_piecewise(grid, rng), catalog.random_piecewise(grid, rng)
        dense = 2 * grid.n - 1
        fd, gd = resample(f, dense), resample(g, dense)
        brute = point_set_hausdorff(
            np.column_stack([fd.grid.nodes, fd.values]),
            np.column_stack([gd.grid.nodes, gd.values]),
        )
        lip = max(f.lip, g.lip)
        assert abs(graph_hausdorff(f, g) - brute) <= fd.grid.h * math.sqrt(1.0 + lip * lip)


class TestPolylines:
    """Tests for polyline and point-set distances."""

    def test_polyline_against_point(self):
        p = [(0.0, 0.0), (2.0, 0.0)]
        q = [(1.0, 1.0)]
        assert polyline_hausdorff(p, q) == pytest.approx(math.sqrt(2.0))

    def test_vertices_match_segments(self):
        p = [(0.0, 0.0), (2.0, 0.0)]
        q = [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]
        assert polyline_hausdorff(p, q) == 0.0
        assert point_set_hausdorff(p, q) == 1.0

    def test_point_sets(self):
        assert point_set_hausdorff([(0.0, 0.0)], [(3.0, 4.0)]) == 5.0


class TestClosedGraph:
    """Tests for closed graphs of classes."""

    def test_sign_has_vertical_segment(self, sign):
        pts = closed_graph(sign)
        assert len(pts) == sign.grid.n + 1
        assert (0.0, -1.0) in map(tuple, pts)
        assert (0.0, 1.0) in map(tuple, pts)

    def test_continuous_graph(self, abs_class):
        assert closed_graph(abs_class.lower).shape == (abs_class.grid.n, 2)

    def test_steep_clamp_approaches_sign(self, grid, sign):
        clamp = catalog.build("clamp:256", grid)
        assert closed_graph_hausdorff(clamp, sign) < 0.01
        assert closed_graph_hausdorff(catalog.build("zero", grid), sign) == pytest.approx(1.0)


class TestResample:
    """Tests for resample."""

    def test_linear_is_exact(self, grid):
        f = SampledFn.from_values(grid, 0.5 * grid.nodes)
        g = resample(f, 1001)
        assert g.grid.n == 1001
        assert np.allclose(g.values, 0.5 * g.grid.nodes, atol=1e-15)

    def test_rejects_jumps(self, sign):
        with pytest.raises(HasJumps):
            resample(sign.lower, 801)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setcalc import catalog
from setcalc.classes import Grid1D, SampledFn, canonical_pair
from setcalc.completion import (
    DEFAULT_DEPTH,
    DiscreteTower,
    LipschitzTower,
    TowerElement,
    check_compatible,
    cauchy_limit,
    density_approx,
    embed,
    from_class,
    rho_tilde,
    rho_tilde_tail,
    verify_tower,
)
from setcalc.envelope import lip_lower_envelope
from setcalc.errors import DepthMismatch, NotCauchy, NotInTower, PrecisionUnreachable
from setcalc.metric import class_distance, s_metric


@pytest.fixture()
def tower(grid):
    return LipschitzTower(grid)


class TestLipschitzTower:
    """Tests for LipschitzTower levels and validation."""

    def test_moduli(self, tower, grid):
        assert tower.modulus(1) == 1.0
        assert tower.modulus(4) == 8.0
        assert tower.moduli(3) == (1.0, 2.0, 4.0)
        assert tower.depth is None
        assert tower.tolerance == pytest.approx(10 * grid.h)

    def test_explicit_moduli(self, grid):
        tower = LipschitzTower(grid, moduli=[1, 3, 9])
        assert tower.depth == 3
        assert tower.modulus(2) == 3.0
        with pytest.raises(DepthMismatch):
            tower.modulus(4)
        with pytest.raises(DepthMismatch):
            tower.resolve_depth(5)

    @pytest.mark.parametrize("kwargs", [{"base": 1.0}, {"moduli": []}, {"moduli": [2, 1]}, {"moduli": [1, 1]}])
    def test_bad_levels(self, grid, kwargs):
        with pytest.raises(DepthMismatch):
            LipschitzTower(grid, **kwargs)

    def test_resolve_depth(self, tower):
        assert tower.resolve_depth(None) == DEFAULT_DEPTH
        assert tower.resolve_depth(3) == 3
        with pytest.raises(DepthMismatch):
            tower.resolve_depth(0)

    def test_level_of(self, tower, grid, sign):
        assert tower.level_of(catalog.build("abs", grid).lower) == 1
        assert tower.level_of(catalog.build("clamp:4", grid).lower) == 3
        assert tower.level_of(sign.lower) is None
        assert LipschitzTower(grid, moduli=[1, 2]).level_of(catalog.build("clamp:4", grid).lower) is None

    def test_foreign_grid(self, tower):
        other = catalog.build("abs", Grid1D(-1.0, 1.0, 201)).lower
        with pytest.raises(NotInTower):
            tower.level_of(other)


class TestElements:
    """Tests for embed, from_class and the element record."""

    def test_embed_lipschitz_element(self, tower, abs_class):
        x = embed(tower, abs_class.lower, 4)
        assert x.depth == 4
        assert x.moduli == (1.0, 2.0, 4.0, 8.0)
        assert all(lo is abs_class.lower and up is abs_class.lower for lo, up in zip(x.lowers, x.uppers))
        assert x.gap == 0.0
        assert x.tail == (0.0, 0.0, 0.0, 0.0)

    def test_embed_projects_below_own_level(self, tower, grid):
        f = catalog.build("clamp:4", grid).lower
        x = embed(tower, f, 5)
        lo, up = x.level(1)
        assert np.all(lo.values <= f.values + 1e-12)
        assert np.all(up.values >= f.values - 1e-12)
        assert x.level(3)[0] is f
        assert x.tail[0] > 0.0
        assert x.gap == 0.0

    def test_embed_rejects(self, tower, grid, sign):
        with pytest.raises(NotInTower):
            embed(tower, sign.lower, 6)
        with pytest.raises(NotInTower):
            embed(tower, catalog.build("clamp:4", grid).lower, 2)

    def test_from_class_sign(self, tower, sign):
        x = from_class(tower, sign, 8)
        assert check_compatible(tower, x)
        assert all(b <= a + 1e-12 for a, b in zip(x.tail, x.tail[1:]))
        assert x.gap == x.tail[-1]
        assert x.gap > 0.0

    def test_truncate(self, tower, sign):
        x = from_class(tower, sign, 6)
        short = x.truncate(3)
        assert short.depth == 3
        assert short.gap == x.tail[2]
        assert short.moduli == x.moduli[:3]
        assert x.truncate(10) is x

    def test_incompatible_element(self, tower, sign, grid):
        x = from_class(tower, sign, 4)
        swapped = type(x)(x.depth, x.lowers[::-1], x.uppers[::-1], x.gap, x.tail, x.moduli)
        assert not check_compatible(tower, swapped)

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**32 - 1))
    def test_class_images_are_compatible(self, seed):
        grid = Grid1D(-1.0, 1.0, 201)
        tower = LipschitzTower(grid)
        pair = canonical_pair(catalog.random_step(grid, np.random.default_rng(seed)))
        assert check_compatible(tower, from_class(tower, pair, 8))


class TestDistances:
    """Tests for rho_tilde and its tail bound."""

    def test_constants(self, tower, grid):
        x = embed(tower, catalog.build("zero", grid).lower, 5)
        y = embed(tower, catalog.build("const:0.3", grid).lower, 5)
        assert rho_tilde(tower, x, y) == pytest.approx(0.3)
        assert rho_tilde_tail(tower, x, y) == pytest.approx(0.0, abs=1e-12)
        assert rho_tilde(tower, x, x) == 0.0

    def test_truncates_to_shared_depth(self, tower, sign, abs_class):
        x = from_class(tower, sign, 8)
        y = embed(tower, abs_class.lower, 5)
        assert rho_tilde(tower, x, y) == pytest.approx(rho_tilde(tower, x.truncate(5), y))

    def test_tail_bound_is_nonnegative(self, tower, sign, zero):
        x, y = from_class(tower, sign, 6), from_class(tower, zero, 6)
        assert rho_tilde_tail(tower, x, y) >= 0.0

    def test_different_moduli(self, grid, abs_class):
        x = embed(LipschitzTower(grid), abs_class.lower, 3)
        y = embed(LipschitzTower(grid, base=3.0), abs_class.lower, 3)
        with pytest.raises(DepthMismatch):
            rho_tilde(LipschitzTower(grid), x, y)

    def test_matches_s_metric(self, tower, grid, rng, sign):
        depth = 12
        moduli = tower.moduli(depth)
        pairs = [canonical_pair(catalog.random_piecewise(grid, rng, 3, 20)) for _ in range(3)] + [sign]
        for f, g in zip(pairs, pairs[1:]):
            x, y = from_class(tower, f, depth), from_class(tower, g, depth)
            assert abs(rho_tilde(tower, x, y) - s_metric(f, g, moduli).value) <= tower.tolerance


class TestLimits:
    """Tests for cauchy_limit and density_approx."""

    def test_cauchy_limit(self, tower, grid, abs_class):
        base = abs_class.lower
        seq = [embed(tower, SampledFn.from_values(grid, base.values + 2.0 ** -j)) for j in range(1, 13)]
        limit = cauchy_limit(tower, seq)
        assert limit is seq[-1]
        assert rho_tilde(tower, limit, embed(tower, base)) <= tower.tolerance

    def test_empty_sequence(self, tower):
        with pytest.raises(NotCauchy):
            cauchy_limit(tower, [])

    def test_spread_too_large(self, tower, grid):
        seq = [embed(tower, catalog.build(f"const:{c}", grid).lower, 3) for c in (0, 1, 0, 1)]
        with pytest.raises(NotCauchy):
            cauchy_limit(tower, seq)

    def test_incompatible_limit_is_rejected(self, tower, grid):
        c = catalog.build("clamp:8", grid).lower
        x = TowerElement(3, (c, c, c), (c, c, c), 0.0, (0.0, 0.0, 0.0), tower.moduli(3))
        assert not check_compatible(tower, x)
        with pytest.raises(NotCauchy):
            cauchy_limit(tower, [x, x, x])

    def test_density(self, tower, sign):
        x = from_class(tower, sign)
        candidate = density_approx(tower, x, 0.05)
        image = embed(tower, candidate, x.depth)
        assert rho_tilde(tower, image, x) + rho_tilde_tail(tower, image, x) < 0.05

    def test_precision_unreachable(self, tower, sign):
        x = from_class(tower, sign, 6)
        with pytest.raises(PrecisionUnreachable):
            density_approx(tower, x, 1e-6)
        with pytest.raises(PrecisionUnreachable):
            density_approx(tower, x, 0.0)


class TestVerifyTower:
    """Tests for verify_tower reports."""

    @pytest.fixture()
    def samples(self, grid, rng):
        out = [catalog.random_piecewise(grid, rng, 3, 20) for _ in range(3)]
        out += [catalog.build(name, grid).lower for name in ("abs", "clamp:4", "zero")]
        return out

    @pytest.fixture()
    def chain(self, sign):
        return [lip_lower_envelope(sign.lower, 2.0 ** j) for j in range(8)]

    def test_lipschitz_tower_passes(self, tower, samples, chain):
        report = verify_tower(tower, samples, [chain], depth=6)
        assert report.passed, [c.to_dict() for c in report.failures()]
        names = [c.name for c in report.checks]
        assert names == ["betweenness", "metric monotonicity", "cauchy chain 0", "projection continuity"]
        assert sorted(report.projection_moduli) == list(range(1, 7))

    def test_discrete_tower_fails_cauchy(self, grid, samples, chain):
        report = verify_tower(DiscreteTower(grid), samples, [chain], depth=4)
        assert not report.passed
        assert [c.name for c in report.failures()] == ["cauchy chain 0"]

    def test_non_monotone_chain(self, tower, grid):
        chain = [catalog.build(name, grid).lower for name in ("zero", "abs", "zero")]
        report = verify_tower(tower, chain[:2], [chain], depth=2)
        failed = report.failures()
        assert [c.name for c in failed] == ["cauchy chain 0"]
        assert failed[0].to_dict()["measured"] is None

    def test_to_dict(self, tower, samples):
        doc = verify_tower(tower, samples, depth=3).to_dict()
        assert doc["passed"] is True
        assert set(doc["projection_moduli"]) == {"1", "2", "3"}
        continuity = [c for c in doc["checks"] if c["name"] == "projection continuity"][0]
        assert continuity["passed"] is True
        assert continuity["tolerance"] == pytest.approx(tower.tolerance)

    def test_amplifying_projection_is_flagged(self, grid, zero):
        report = verify_tower(_AmplifyingTower(grid), [zero.lower, catalog.build("const:0.3", grid).lower], depth=2)
        assert [c.name for c in report.failures()] == ["projection continuity"]
        continuity = report.failures()[0]
        assert continuity.measured == pytest.approx(0.6)
        assert "[1, 2]" in continuity.detail

    def test_discrete_projection_stays_within_its_bound(self, grid, samples):
        report = verify_tower(DiscreteTower(grid), samples, depth=4)
        assert report.passed


class _AmplifyingTower(LipschitzTower):
    """Lipschitz levels whose lower projection triples distances."""

    def project_down(self, f, n):
        return SampledFn.from_values(self.grid, 3.0 * self._check(f).values)


@pytest.mark.acceptance
def test_rho_tilde_matches_s_metric_acceptance():
    """20 seeded classes, with and without jumps, compared on one schedule."""
    grid = Grid1D(-1.0, 1.0, 401)
    tower = LipschitzTower(grid)
    rng = np.random.default_rng(13)
    depth = 12
    moduli = tower.moduli(depth)
    classes = [canonical_pair(catalog.random_piecewise(grid, rng, 3, 20)) for _ in range(10)]
    classes += [canonical_pair(catalog.random_step(grid, rng)) for _ in range(10)]
    order = rng.permutation(len(classes))
    classes = [classes[i] for i in order]
    for f, g in zip(classes, classes[1:]):
        x, y = from_class(tower, f, depth), from_class(tower, g, depth)
        s = class_distance("s", f, g, moduli, extend=False).value
        assert abs(rho_tilde(tower, x, y) - s) <= tower.tolerance

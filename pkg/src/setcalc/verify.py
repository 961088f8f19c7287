# Property suites run by `setcalc verify`
#
# Each suite is a list of named checks. A check measures one quantity and
# compares it with a tolerance; reports hold no timestamps or run ids, so
# the same RunConfig always produces the same document.

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from . import catalog
from .classes import (
	ClassPair,
	ConvexValue,
	IntervalValue,
	SampledFn,
	VectorClass,
	canonical_pair,
	class_add,
	class_max,
	class_min,
	class_mul,
	class_scale,
	integral_gap,
	is_quasicontinuous,
	lsc_hull,
	measure_lip,
	usc_hull,
	value_at,
	zero_class,
)
from .completion import (
	DiscreteTower,
	LipschitzTower,
	cauchy_limit,
	check_compatible,
	density_approx,
	embed,
	from_class,
	rho_tilde,
	rho_tilde_tail,
	verify_tower,
)
from .config import RunConfig
from .context import get_run_id, operation
from .envelope import envelope_family, envelope_oracle, lip_lower_envelope, lip_upper_envelope
from .errors import HypothesisViolated, NotConverged, SetcalcError, UnknownFunction
from .expr import gradient as expr_gradient
from .expr import parse
from .gradient import (
	GradientField,
	SmoothingSchedule,
	classical_gradient,
	clarke_gradient,
	closure_gradient,
	differentiability_at_continuity,
	gradient_tolerance,
	grad_add,
	grad_minmax,
	grad_scale,
	limit_exchange,
	minkowski_value,
	node_gap,
	stationarity_check,
)
from .hausdorff import graph_hausdorff, point_set_hausdorff, resample
from .metric import check_graph_limit, check_statement_4_1, r_metric, s_metric, s_metric_vec, truncation_ok
from .plane import (
	CHAMFER_RATIO,
	Grid2D,
	Sampled2D,
	clarke_gradient_2d,
	envelope_oracle_2d,
	gradient_value_2d,
	lip_lower_envelope_2d,
)

logger = logging.getLogger(__name__)

SUITES = ("core", "envelope", "metric", "gradient", "completion", "plane")

# Node count per axis of the plane demonstration grid
PLANE_NODES = 41

# Exact anchors compare floats produced by exact arithmetic on the grid
EXACT = 1e-9

# Catalog pairs whose metric reports must carry a tight truncation bound
TRUNCATION_PAIRS = (("sign", "zero"), ("sign", "abs"), ("clamp:64", "sign"), ("step-sum", "zero"))


@dataclass
class Check:
	suite: str
	name: str
	passed: bool
	measured: Optional[float]
	tolerance: Optional[float]
	detail: str = ""

	def to_dict(self) -> Dict:
		return {
			"suite": self.suite,
			"name": self.name,
			"passed": self.passed,
			"measured": _finite_or_none(self.measured),
			"tolerance": _finite_or_none(self.tolerance),
			"detail": self.detail,
		}


@dataclass
class VerifyReport:
	config: Dict
	checks: List[Check] = field(default_factory=list)

	@property
	def passed(self) -> bool:
		return all(c.passed for c in self.checks)

	def failures(self) -> List[Check]:
		return [c for c in self.checks if not c.passed]

	def to_dict(self) -> Dict:
		suites: Dict[str, List[Dict]] = {}
		for c in self.checks:
			suites.setdefault(c.suite, []).append(c.to_dict())
		return {
			"passed": self.passed,
			"failed": len(self.failures()),
			"total": len(self.checks),
			"config": self.config,
			"suites": suites,
		}


def _finite_or_none(value: Optional[float]) -> Optional[float]:
	if value is None:
		return None
	value = float(value)
	return value if math.isfinite(value) else None


# A check body returns (measured, tolerance) or (measured, tolerance, detail)
Body = Callable[[], Tuple]


def _within(measured: float, tolerance: float, detail: str = "") -> Tuple[float, float, str]:
	return float(measured), float(tolerance), detail


def _flag(ok: bool, detail: str = "") -> Tuple[float, float, str]:
	# boolean checks report 0 when they hold and 1 when they do not
	return (0.0 if ok else 1.0), 0.0, detail


def _expect(exc_type, fn: Callable[[], object]) -> Tuple[float, float, str]:
	try:
		fn()
	except exc_type as exc:
		return 0.0, 0.0, f"raised {type(exc).__name__}"
	return 1.0, 0.0, f"expected {exc_type.__name__}"


def _run(suite: str, name: str, body: Body) -> Check:
	try:
		out = body()
	except SetcalcError as exc:
		logger.warning("check raised", extra={"features": {"check": name, "error": exc.subcode}})
		return Check(suite, name, False, None, None, f"{type(exc).__name__}: {exc.message}")
	measured, tolerance = out[0], out[1]
	detail = out[2] if len(out) > 2 else ""
	passed = measured is not None and measured <= tolerance
	return Check(suite, name, bool(passed), measured, tolerance, detail)


def _origin(grid) -> float:
	return float(grid.nodes[grid.nearest(0.0)])


def _tol_rep(cfg: RunConfig, *pairs: ClassPair) -> float:
	if cfg.tol_rep is not None:
		return cfg.tol_rep
	return max(p.tol_rep for p in pairs)


def _tol_grad(cfg: RunConfig, pair: ClassPair) -> float:
	if cfg.tol_grad is not None:
		return cfg.tol_grad
	return gradient_tolerance(pair, measure_lip(pair.grid, pair.lower.values))


def _class_gap(f: ClassPair, g: ClassPair) -> float:
	return float(max(
		np.max(np.abs(f.lower.values - g.lower.values)),
		np.max(np.abs(f.upper.values - g.upper.values)),
	))


def _interval_gap(value: IntervalValue, lo: float, hi: float) -> float:
	return value.hausdorff(IntervalValue(lo, hi))


# Suites

def _random_step(grid, rng):
	return catalog.random_step(grid, rng, jumps=2, spacing=max(2, grid.n // 20))


def core_checks(cfg: RunConfig, rng: np.random.Generator) -> List[Tuple[str, Body]]:
	grid = cfg.grid
	x0 = _origin(grid)
	sign = catalog.build("sign", grid)
	zero = catalog.build("zero", grid)
	step = _random_step(grid, rng)
	triples = [tuple(canonical_pair(catalog.random_piecewise(grid, rng, 3)) for _ in range(3)) for _ in range(3)]

	def ring_laws():
		worst = 0.0
		for f, g, h in triples:
			worst = max(
				worst,
				_class_gap(class_add(class_add(f, g), h), class_add(f, class_add(g, h))),
				_class_gap(class_mul(f, class_add(g, h)), class_add(class_mul(f, g), class_mul(f, h))),
				_class_gap(class_min(f, class_max(g, h)), class_max(class_min(f, g), class_min(f, h))),
				_class_gap(class_add(f, class_scale(-1.0, f)), zero_class(grid)),
			)
		return _within(worst, _tol_rep(cfg, *[p for t in triples for p in t]))

	def hull_order():
		f = step
		lo, up = lsc_hull(f), usc_hull(f)
		worst = max(float(np.max(lo.values - f.values)), float(np.max(f.values - up.values)), 0.0)
		return _within(worst, 0.0, f"{len(f.jumps)} jumps")

	def representative_independence():
		f = step
		moved = np.array(f.values)
		idx = list(f.jumps)
		moved[idx] = -moved[idx]
		g = SampledFn.from_values(grid, moved, f.jumps, f.lip, f.bound)
		return _within(_class_gap(canonical_pair(f), canonical_pair(g)), 0.0)

	def canonical_quasicontinuous():
		pair = canonical_pair(step)
		return _flag(is_quasicontinuous(pair.lower) and is_quasicontinuous(pair.upper))

	def integrals():
		gap, allowed = integral_gap(canonical_pair(step))
		return _within(gap, allowed)

	return [
		("sign value at 0 is [-1, 1]", lambda: _within(_interval_gap(value_at(sign, x0), -1.0, 1.0), EXACT)),
		("zero value at 0 is {0}", lambda: _within(_interval_gap(value_at(zero, x0), 0.0, 0.0), EXACT)),
		("lsc <= f <= usc", hull_order),
		("jump node values do not change the class", representative_independence),
		("canonical representatives are quasicontinuous", canonical_quasicontinuous),
		("lower and upper integrals agree", integrals),
		("ring and lattice laws", ring_laws),
	]


def envelope_checks(cfg: RunConfig, rng: np.random.Generator) -> List[Tuple[str, Body]]:
	grid = cfg.grid
	h = grid.h
	sign = catalog.build("sign", grid)
	samples = [catalog.random_piecewise(grid, rng, 3, max(2, grid.n // 20)) for _ in range(3)]
	samples.append(_random_step(grid, rng))

	def oracle():
		worst = 0.0
		for f in samples:
			for k in (1.0, 4.0, 16.0):
				fast_lo = lip_lower_envelope(f, k).values
				fast_up = lip_upper_envelope(f, k).values
				worst = max(
					worst,
					float(np.max(np.abs(fast_lo - envelope_oracle(f, k, "lower").values))),
					float(np.max(np.abs(fast_up - envelope_oracle(f, k, "upper").values))),
				)
		return _within(worst, EXACT, f"{len(samples)} samples, k in 1, 4, 16")

	def gap_law():
		fam = envelope_family(sign, (1.0, 2.0, 4.0, 8.0, 16.0))
		worst = max(abs(g - 2.0 / math.sqrt(k * k + 1.0)) for k, g in zip(fam.ks, fam.gaps))
		return _within(worst, 3.0 * h)

	def family_laws():
		fam = envelope_family(sign, cfg.ks)
		worst = 0.0
		for k, lo, up in zip(fam.ks, fam.lowers, fam.uppers):
			worst = max(
				worst,
				measure_lip(grid, lo.values) - k * (1.0 + 1e-9),
				measure_lip(grid, up.values) - k * (1.0 + 1e-9),
				float(np.max(lo.values - sign.lower.values)),
				float(np.max(sign.upper.values - up.values)),
			)
		for a, b in zip(fam.lowers, fam.lowers[1:]):
			worst = max(worst, float(np.max(a.values - b.values)))
		for a, b in zip(fam.uppers, fam.uppers[1:]):
			worst = max(worst, float(np.max(b.values - a.values)))
		rising = max((b - a for a, b in zip(fam.gaps, fam.gaps[1:])), default=0.0)
		return _within(max(worst, rising, 0.0), EXACT, f"{len(fam.ks)} moduli")

	def abs_fixed_point():
		f = catalog.build("abs", grid)
		lo = lip_lower_envelope(f.lower, 2.0)
		up = lip_upper_envelope(f.upper, 2.0)
		return _within(max(float(np.max(np.abs(lo.values - f.lower.values))), float(np.max(np.abs(up.values - f.upper.values)))), EXACT)

	return [
		("fast envelopes match the quadratic oracle", oracle),
		("sign gap is 2/sqrt(k^2 + 1)", gap_law),
		("k-Lipschitz, monotone, sandwiched", family_laws),
		("1-Lipschitz abs is its own 2-envelope", abs_fixed_point),
	]


def metric_checks(cfg: RunConfig, rng: np.random.Generator) -> List[Tuple[str, Body]]:
	grid = cfg.grid
	ks = cfg.ks
	sign = catalog.build("sign", grid)
	zero = catalog.build("zero", grid)
	spacing = max(2, grid.n // 20)
	classes = [canonical_pair(catalog.random_piecewise(grid, rng, 3, spacing)) for _ in range(3)]
	tol = _tol_rep(cfg, sign, *classes)

	def identity():
		return _within(r_metric(sign, sign, ks).value, 0.0)

	def symmetry():
		f, g, _ = classes
		return _within(abs(s_metric(f, g, ks).value - s_metric(g, f, ks).value), EXACT)

	def triangle():
		f, g, h = classes
		excess = s_metric(f, h, ks).value - s_metric(f, g, ks).value - s_metric(g, h, ks).value
		return _within(max(excess, 0.0), tol)

	def r_dominates_s():
		s = s_metric(sign, zero, ks).value
		r = r_metric(sign, zero, ks).value
		return _within(max(s - r, 0.0), EXACT, f"s={s:.6g} r={r:.6g}")

	def graph_oracle():
		f, g = classes[0].lower, classes[1].lower
		dense = 2 * grid.n - 1
		fd, gd = resample(f, dense), resample(g, dense)
		brute = point_set_hausdorff(
			np.column_stack([fd.grid.nodes, fd.values]),
			np.column_stack([gd.grid.nodes, gd.values]),
		)
		lip = max(f.lip, g.lip)
		return _within(abs(graph_hausdorff(f, g) - brute), fd.grid.h * math.sqrt(1.0 + lip * lip))

	def truncation_contract():
		ok, worst = True, 0.0
		for a, b in TRUNCATION_PAIRS:
			f, g = catalog.build(a, grid), catalog.build(b, grid)
			for metric in (s_metric, r_metric):
				report = metric(f, g, ks)
				ok = ok and truncation_ok(report.value, report.truncation_bound)
				if report.value > 0.0:
					worst = max(worst, report.truncation_bound / report.value)
		return _flag(ok, f"worst bound/value={worst:.3g}")

	def vector_dominates_scalar():
		F = VectorClass.of(sign, zero)
		G = VectorClass.of(zero, zero)
		vec = s_metric_vec(F, G, ks, None).value
		scalar = s_metric(sign, zero, ks).value
		return _within(abs(vec - scalar), tol)

	slopes = [2.0 ** j for j in range(2, 9)]
	clamps = [catalog.build(f"clamp:{n:g}", grid) for n in slopes]

	def graph_limit():
		zeros = [0.0] * len(clamps)
		ok = check_graph_limit(clamps, sign, zeros, 0.0, zeros, 0.0, ks=ks)
		return _flag(ok)

	def graph_limit_adversarial():
		zeros = [0.0] * len(clamps)
		return _expect(
			HypothesisViolated,
			lambda: check_graph_limit(clamps, sign, zeros, 0.0, [2.0] * len(clamps), 2.0, ks=ks),
		)

	def graph_convergence():
		return _flag(check_statement_4_1(sign, [c.lower for c in clamps], ks))

	return [
		("r(f, f) = 0", identity),
		("s is symmetric", symmetry),
		("s triangle inequality", triangle),
		("r >= s", r_dominates_s),
		("graph distance matches the point-set oracle", graph_oracle),
		("truncation bound below 10% of the value", truncation_contract),
		("vector metric on (f, 0) reduces to the scalar metric", vector_dominates_scalar),
		("graph limits stay in the limit class", graph_limit),
		("graph limit rejects a bad premise", graph_limit_adversarial),
		("graph convergence implies s convergence", graph_convergence),
	]


def gradient_checks(cfg: RunConfig, rng: np.random.Generator) -> List[Tuple[str, Body]]:
	grid = cfg.grid
	ks = cfg.ks
	sched = cfg.smoothing_schedule()
	x0 = _origin(grid)
	abs_ = catalog.build("abs", grid)
	neg_abs = catalog.build("neg-abs", grid)
	d_abs = clarke_gradient(abs_)
	d_neg = clarke_gradient(neg_abs)

	def clarke_abs():
		sign = catalog.build("sign", grid)
		return _within(_class_gap(d_abs.first, sign), _tol_rep(cfg, sign))

	def cancel():
		value = value_at(grad_add(d_abs, d_neg).first, x0)
		return _within(_interval_gap(value, 0.0, 0.0), EXACT)

	def strict_inclusion():
		value = minkowski_value(d_abs, d_neg, x0)
		return _within(_interval_gap(value, -2.0, 2.0), EXACT)

	def closure_abs():
		field, diag = closure_gradient(abs_, sched, ks, cfg.tol_grad)
		return _within(node_gap(field, d_abs), _tol_grad(cfg, abs_), f"gaps={[round(g, 6) for g in diag.cauchy_gaps]}")

	def closure_cusp():
		return _expect(NotConverged, lambda: closure_gradient(catalog.build("cusp", grid), sched, ks, cfg.tol_grad))

	def two_schedules():
		other = SmoothingSchedule.geometric(grid, 24.0, 4, "envelope-average")
		worst = 0.0
		for name in ("abs", "logabs", "xabs", "clamp:8"):
			f = catalog.build(name, grid)
			a, _ = closure_gradient(f, sched, ks, cfg.tol_grad)
			b, _ = closure_gradient(f, other, ks, cfg.tol_grad)
			worst = max(worst, r_metric(a.first, b.first, ks).value / (2.0 * _tol_grad(cfg, f)))
		return _within(worst, 1.0, "ratio to 2 tol_grad, mollifier against envelope averages")

	def coincidence():
		worst = 0.0
		names = ("abs", "neg-abs", "ramp", "logabs", "quadratic", "xabs", "clamp:8")
		for name in names:
			entry = catalog.get_entry(name)
			f = entry.build(grid)
			field, _ = closure_gradient(f, sched, ks, cfg.tol_grad)
			closed_form = GradientField.scalar(entry.gradient_class(grid))
			worst = max(worst, node_gap(field, closed_form) / _tol_grad(cfg, f))
		return _within(worst, 1.0, "ratio to tol_grad over " + ", ".join(names))

	pair_spacing = max(2, grid.n // 40)
	pairs = [catalog.random_pair(grid, rng, pieces=3, spacing=pair_spacing) for _ in range(3)]

	def linearity():
		worst = 0.0
		for f, g in pairs:
			F, G = canonical_pair(f), canonical_pair(g)
			dF, _ = closure_gradient(F, sched, ks, cfg.tol_grad)
			dG, _ = closure_gradient(G, sched, ks, cfg.tol_grad)
			for lam in (-2.0, 1.0, 3.0):
				H = class_add(class_scale(lam, F), G)
				dH, _ = closure_gradient(H, sched, ks, cfg.tol_grad)
				rhs = grad_add(grad_scale(lam, dF), dG)
				worst = max(worst, r_metric(dH.first, rhs.first, ks).value / _tol_grad(cfg, H))
		return _within(worst, 1.0, "ratio to tol_grad")

	crossing = [catalog.random_crossing_pair(grid, rng, pieces=3, spacing=pair_spacing) for _ in range(2)]

	def lattice():
		worst = 0.0
		for f, g in crossing:
			F, G = canonical_pair(f), canonical_pair(g)
			dF, dG = clarke_gradient(F), clarke_gradient(G)
			for which, op in (("min", class_min), ("max", class_max)):
				H = op(F, G)
				rule = grad_minmax(F, G, dF, dG, which)
				worst = max(worst, r_metric(rule.first, clarke_gradient(H).first, ks).value / _tol_grad(cfg, H))
		return _within(worst, 1.0, "ratio to tol_grad")

	def leibniz():
		f, field = expr_gradient(parse("mul(abs, abs)"), grid)
		target = catalog.get_entry("quadratic").gradient_class(grid)
		return _within(_class_gap(field.first, target), _tol_grad(cfg, f))

	def chain():
		f, field = expr_gradient(parse("compose(log, add(abs, const:1))"), grid)
		target = catalog.get_entry("logabs").gradient_class(grid)
		off = [i for i in range(grid.n) if i not in set(target.jumps)]
		sup = float(np.max(np.abs(field.first.lower.values[off] - target.lower.values[off])))
		kink = _interval_gap(value_at(field.first, x0), -1.0, 1.0)
		tol = _tol_grad(cfg, f)
		return _within(max(sup, kink), tol, f"off-kink sup={sup:.3g} kink gap={kink:.3g}")

	def stationarity():
		return _flag(stationarity_check(abs_, d_abs, x0))

	def continuity_point():
		entry = catalog.get_entry("quadratic")
		f = entry.build(grid)
		df = classical_gradient(entry.smooth_fn(grid))
		return _flag(differentiability_at_continuity(f, df, 0.5))

	def limit_exchange_run():
		sign = catalog.build("sign", grid)
		seq = []
		dists = []
		for n in (2.0 ** j for j in range(2, 11)):
			entry = catalog.get_entry(f"smoothabs:{n:g}")
			f = entry.build(grid)
			df = classical_gradient(entry.smooth_fn(grid))
			seq.append((f, df))
			dists.append(r_metric(df.first, sign, ks).value)
		limit, field = limit_exchange(seq, 0.0, cfg.tol_grad, ks)
		tol = _tol_grad(cfg, limit)
		rises = max((b - a for a, b in zip(dists, dists[1:])), default=0.0)
		final = dists[-1] / (5.0 * tol)
		return _within(max(final, rises / tol if rises > 0 else 0.0), 1.0, f"final r={dists[-1]:.4g}")

	return [
		("Clarke gradient of |x| is the sign class", clarke_abs),
		("grad |x| + grad -|x| has value {0} at 0", cancel),
		("pointwise sum is [-2, 2] at 0", strict_inclusion),
		("closure gradient of |x| converges to Clarke", closure_abs),
		("closure gradient of sqrt|x| does not converge", closure_cusp),
		("two smoothing families give one closure gradient", two_schedules),
		("closure matches closed-form Clarke gradients", coincidence),
		("linearity", linearity),
		("lattice rule", lattice),
		("Leibniz rule |x| * |x|", leibniz),
		("chain rule log(|x| + 1)", chain),
		("0 is in the gradient at the minimum of |x|", stationarity),
		("single-valued gradient gives the derivative", continuity_point),
		("limit exchange for sqrt(x^2 + n^-2)", limit_exchange_run),
	]


def completion_checks(cfg: RunConfig, rng: np.random.Generator) -> List[Tuple[str, Body]]:
	grid = cfg.grid
	tower = LipschitzTower(grid)
	sign = catalog.build("sign", grid)
	spacing = max(2, grid.n // 20)
	samples = [catalog.random_piecewise(grid, rng, 3, spacing) for _ in range(3)]
	samples += [catalog.build("abs", grid).lower, catalog.build("clamp:4", grid).lower, zero_class(grid).lower]
	chain = [lip_lower_envelope(sign.lower, 2.0 ** j) for j in range(8)]

	def lipschitz_tower():
		report = verify_tower(tower, samples, [chain])
		failed = [c.name for c in report.failures()]
		return _flag(report.passed, "failed: " + ", ".join(failed) if failed else "")

	def discrete_tower():
		report = verify_tower(DiscreteTower(grid), samples, [chain])
		failed = [c.name for c in report.failures()]
		return _flag(any(name.startswith("cauchy chain") for name in failed), "failed: " + ", ".join(failed))

	def compatible():
		return _flag(check_compatible(tower, from_class(tower, sign)))

	def density():
		x = from_class(tower, sign)
		candidate = density_approx(tower, x, 0.05)
		image = embed(tower, candidate, x.depth)
		return _within(rho_tilde(tower, image, x) + rho_tilde_tail(tower, image, x), 0.05)

	def cauchy():
		base = catalog.build("abs", grid).lower
		seq = [embed(tower, SampledFn.from_values(grid, base.values + 2.0 ** -j)) for j in range(1, 13)]
		limit = cauchy_limit(tower, seq)
		return _within(rho_tilde(tower, limit, embed(tower, base)), tower.tolerance)

	def matches_s():
		depth = 12
		moduli = tower.moduli(depth)
		pairs = [canonical_pair(catalog.random_piecewise(grid, rng, 3, spacing)) for _ in range(4)]
		pairs.append(sign)
		worst = 0.0
		for f, g in zip(pairs, pairs[1:]):
			x, y = from_class(tower, f, depth), from_class(tower, g, depth)
			worst = max(worst, abs(rho_tilde(tower, x, y) - s_metric(f, g, moduli).value))
		return _within(worst, tower.tolerance)

	return [
		("Lipschitz tower passes", lipschitz_tower),
		("discrete tower fails the Cauchy condition", discrete_tower),
		("class images are compatible", compatible),
		("sign is approximated within 0.05", density),
		("Cauchy limit reproduces the embedded limit", cauchy),
		("rho_tilde agrees with s", matches_s),
	]


def plane_checks(cfg: RunConfig, rng: np.random.Generator) -> List[Tuple[str, Body]]:
	grid = Grid2D.square(-1.0, 1.0, PLANE_NODES)
	a, b = rng.uniform(0.5, 1.5, size=2)
	f = Sampled2D.from_callable(
		grid, lambda X, Y: a * np.abs(X) - b * np.abs(Y) + 0.3 * X * Y, kinks_x_at=(0.0,), kinks_y_at=(0.0,),
	)
	cone = Sampled2D.from_callable(grid, lambda X, Y: np.abs(X) + np.abs(Y), kinks_x_at=(0.0,), kinks_y_at=(0.0,))

	def chamfer_sandwich():
		worst = 0.0
		for k in (0.5, 1.0, 2.0):
			env = lip_lower_envelope_2d(f, k).values
			low = envelope_oracle_2d(f, k, "lower").values
			high = envelope_oracle_2d(f, CHAMFER_RATIO * k, "lower").values
			worst = max(worst, float(np.max(low - env)), float(np.max(env - high)))
		return _within(max(worst, 0.0), EXACT)

	def kink_value():
		value = gradient_value_2d(clarke_gradient_2d(cone), (0.0, 0.0))
		square = ConvexValue.hull([(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)])
		return _within(value.hausdorff(square), EXACT)

	def smooth_value():
		value = gradient_value_2d(clarke_gradient_2d(cone), (0.5, 0.25))
		return _within(value.hausdorff(ConvexValue.point((1.0, 1.0))), EXACT)

	return [
		("chamfer envelope lies between Euclidean envelopes", chamfer_sandwich),
		("gradient of |x| + |y| at 0 is the square", kink_value),
		("gradient of |x| + |y| off the kinks is a point", smooth_value),
	]


SUITE_CHECKS: Dict[str, Callable[[RunConfig, np.random.Generator], List[Tuple[str, Body]]]] = {
	"core": core_checks,
	"envelope": envelope_checks,
	"metric": metric_checks,
	"gradient": gradient_checks,
	"completion": completion_checks,
	"plane": plane_checks,
}


def resolve_suites(name: str) -> Tuple[str, ...]:
	if name == "all":
		return SUITES
	if name not in SUITE_CHECKS:
		raise UnknownFunction(f"Unknown suite '{name}'. Expected one of: {', '.join(SUITES + ('all',))}")
	return (name,)


def run_suite(name: str, cfg: RunConfig) -> List[Check]:
	# one generator per suite so a suite's results do not depend on which ran before it
	rng = np.random.default_rng([cfg.seed, SUITES.index(name)])
	out = []
	with operation(run_id=get_run_id(), area=f"verify.{name}"):
		try:
			bodies = SUITE_CHECKS[name](cfg, rng)
		except SetcalcError as exc:
			return [Check(name, "setup", False, None, None, f"{type(exc).__name__}: {exc.message}")]
		for check_name, body in bodies:
			check = _run(name, check_name, body)
			logger.info(
				"check finished",
				extra={"features": {"check": check_name, "passed": check.passed, "measured": check.measured}},
			)
			out.append(check)
	return out


def run(cfg: RunConfig, suite: str = "all") -> VerifyReport:
	report = VerifyReport(config=cfg.to_dict())
	for name in resolve_suites(suite):
		report.checks.extend(run_suite(name, cfg))
	logger.info(
		"verify finished",
		extra={"features": {"suite": suite, "passed": report.passed, "failed": len(report.failures())}},
	)
	return report

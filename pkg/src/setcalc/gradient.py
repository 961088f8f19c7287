# Classical, Clarke and closure gradients and their calculus rules
#
# Gradients are vector classes over the domain grid. Kinks of f become jump
# nodes of the gradient; the value there is read from the neighbouring
# one-sided limits, which realizes the convex hull of nearby gradients.

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .classes import (
	ClassPair,
	ConvexValue,
	Grid1D,
	IntervalValue,
	SampledFn,
	VectorClass,
	canonical_pair,
	class_add,
	class_mul,
	class_of,
	class_scale,
	measure_lip,
	value_at,
	value_at_vec,
)
from .envelope import lip_lower_envelope, lip_upper_envelope
from .errors import (
	DimensionMismatch,
	GridMismatch,
	HypothesisViolated,
	InvalidSample,
	InvalidSchedule,
	NotAContinuityPoint,
	NotAnExtremum,
	NotConverged,
	NotLipschitz,
	RangeMismatch,
	ScheduleTooCoarse,
)
from .hausdorff import closed_graph_hausdorff
from .metric import limit_tolerance, r_metric, s_metric, tends_to_zero

logger = logging.getLogger(__name__)

SMOOTHING_KINDS = ("mollifier", "envelope-average")

# Stencil widths (in nodes) for the differentiability test
_STENCILS = (4, 2, 1)


def _gradient_floor(lip: float, h: float) -> float:
	return 10.0 * lip * h + 1e-9


def gradient_tolerance(f: Union[SampledFn, ClassPair], lip: Optional[float] = None) -> float:
	"""10*lip*h + 1e-9, the discretization floor of gradient comparisons."""
	if lip is None:
		lip = f.lip
	return _gradient_floor(lip, f.grid.h)


def kink_threshold(lip: float, h: float) -> float:
	"""Minimum jump of one-sided slopes that marks a kink."""
	return max(min(5.0 * _gradient_floor(lip, h), 0.5 * lip), 1e-9)


@dataclass(frozen=True, eq=False)
class SmoothFn:
	"""A continuous sample with an optional declared derivative."""

	sample: SampledFn
	derivative: Optional[np.ndarray] = None
	third_bound: Optional[float] = None

	def __post_init__(self):
		if self.sample.jumps:
			raise InvalidSample("A smooth function cannot declare jumps")
		if self.derivative is not None:
			d = np.array(self.derivative, dtype=float)
			if d.shape != (self.sample.grid.n,) or not np.all(np.isfinite(d)):
				raise InvalidSample("Declared derivative must hold one finite value per node")
			if self.third_bound is not None:
				central = _central_differences(self.sample.values, self.sample.grid.h)
				allowed = 10.0 * self.sample.grid.h ** 2 * float(self.third_bound) + 1e-9
				worst = float(np.max(np.abs(central - d)))
				if worst > allowed:
					raise InvalidSample(f"Declared derivative is off central differences by {worst} > {allowed}")
			d.setflags(write=False)
			object.__setattr__(self, "derivative", d)

	@property
	def grid(self) -> Grid1D:
		return self.sample.grid

	@property
	def values(self) -> np.ndarray:
		return self.sample.values

	def derivative_values(self) -> np.ndarray:
		if self.derivative is not None:
			return self.derivative
		return _central_differences(self.sample.values, self.sample.grid.h)


def smooth_from_callable(grid: Grid1D, fn, dfn=None, third_bound: Optional[float] = None) -> SmoothFn:
	sample = SampledFn.from_callable(grid, fn)
	derivative = None if dfn is None else np.asarray(dfn(grid.nodes), dtype=float) * np.ones(grid.n)
	return SmoothFn(sample, derivative, third_bound)


@dataclass(frozen=True, eq=False)
class GradientField(VectorClass):
	"""Gradient class of a function, one component per domain axis."""

	@classmethod
	def scalar(cls, pair: ClassPair) -> "GradientField":
		return cls((pair,))

	@property
	def first(self) -> ClassPair:
		return self.components[0]

	def value_at(self, x: float) -> Union[IntervalValue, ConvexValue]:
		if self.m == 1:
			return value_at(self.first, x)
		return value_at_vec(self, x)


@dataclass(frozen=True)
class SmoothingSchedule:
	"""Smoothing family and strictly decreasing widths (at least three stages)."""

	kind: str
	widths: Tuple[float, ...]

	def __post_init__(self):
		if self.kind not in SMOOTHING_KINDS:
			raise InvalidSchedule(f"Unknown smoothing kind {self.kind!r}, expected one of {SMOOTHING_KINDS}")
		widths = tuple(float(w) for w in self.widths)
		if len(widths) < 3:
			raise InvalidSchedule(f"A smoothing schedule needs at least 3 stages, got {len(widths)}")
		if any(not (math.isfinite(w) and w > 0) for w in widths):
			raise InvalidSchedule(f"Smoothing widths must be positive, got {list(widths)}")
		if any(b >= a for a, b in zip(widths, widths[1:])):
			raise InvalidSchedule(f"Smoothing widths must be strictly decreasing, got {list(widths)}")
		object.__setattr__(self, "widths", widths)

	@property
	def stages(self) -> int:
		return len(self.widths)

	@classmethod
	def geometric(cls, grid: Grid1D, w0_in_h: float = 16.0, stages: int = 5, kind: str = "mollifier"):
		"""Widths w0*h, w0*h/2, ... over `stages` stages."""
		return cls(kind, tuple(w0_in_h * grid.h / 2 ** j for j in range(stages)))


@dataclass(frozen=True)
class ClosureDiagnostic:
	"""Cauchy record of a smoothing run."""

	cauchy_gaps: Tuple[float, ...]
	converged: bool
	in_domain_hint: bool
	widths: Tuple[float, ...] = ()
	converged_at: Optional[int] = None
	value_gap: float = 0.0
	limit_gap: Optional[float] = None
	tol_grad: float = 0.0

	def to_dict(self) -> Dict:
		return {
			"gaps": list(self.cauchy_gaps),
			"converged": self.converged,
			"in_domain_hint": self.in_domain_hint,
			"widths": list(self.widths),
			"converged_at": self.converged_at,
			"value_gap": self.value_gap,
			"limit_gap": self.limit_gap,
			"tol_grad": self.tol_grad,
		}


def _central_differences(values: np.ndarray, h: float) -> np.ndarray:
	values = np.asarray(values, dtype=float)
	edge = 2 if values.shape[0] >= 3 else 1
	return np.gradient(values, h, edge_order=edge)


def _one_sided_slopes(values: np.ndarray, h: float) -> Tuple[np.ndarray, np.ndarray]:
	step = np.diff(values) / h
	left = np.full(values.shape[0], np.nan)
	right = np.full(values.shape[0], np.nan)
	left[1:] = step
	right[:-1] = step
	return left, right


def _kink_nodes(values: np.ndarray, h: float, threshold: float) -> List[int]:
	left, right = _one_sided_slopes(values, h)
	jump = np.abs(right - left)
	jump[0] = jump[-1] = 0.0
	kinks = jump > threshold
	return [int(i) for i in np.flatnonzero(kinks)]


def _field_from_kinks(grid: Grid1D, values: np.ndarray, kinks: Sequence[int]) -> GradientField:
	h = grid.h
	g = _central_differences(values, h)
	left, right = _one_sided_slopes(values, h)
	kinks = list(kinks)
	if kinks:
		idx = np.array(kinks)
		g[idx] = 0.5 * (left[idx] + right[idx])
		if 1 in kinks:
			g[0] = right[0]
		if grid.n - 2 in kinks:
			g[-1] = left[-1]
	return GradientField.scalar(canonical_pair(SampledFn.from_values(grid, g, kinks)))


def _lipschitz_values(f) -> Tuple[ClassPair, np.ndarray]:
	pair = class_of(f)
	if pair.essential_jumps:
		raise NotLipschitz(
			f"f jumps at nodes {list(pair.essential_jumps)}; a Lipschitz function is required"
		)
	return pair, np.asarray(pair.lower.values, dtype=float)


def classical_gradient(f: Union[SmoothFn, SampledFn]) -> GradientField:
	"""Declared derivative, or central differences with second-order edges."""
	if isinstance(f, SampledFn):
		f = SmoothFn(f)
	d = f.derivative_values()
	return GradientField.scalar(canonical_pair(SampledFn.from_values(f.grid, d)))


def clarke_gradient(f: Union[SampledFn, ClassPair]) -> GradientField:
	"""Clarke gradient of a piecewise-Lipschitz sample.

	Off kinks this is the central difference; at a kink it is the hull of the
	gradients on both sides.
	"""
	pair, values = _lipschitz_values(f)
	grid = pair.grid
	lip = measure_lip(grid, values)
	kinks = _kink_nodes(values, grid.h, kink_threshold(lip, grid.h))
	return _field_from_kinks(grid, values, kinks)


def mollify(f: Union[SampledFn, ClassPair], width: float) -> np.ndarray:
	"""Triangular-kernel smoothing of half-width `width` with odd reflection at the ends."""
	pair = class_of(f)
	values = np.asarray(pair.lower.values, dtype=float)
	grid = pair.grid
	m = int(round(width / grid.h))
	m = min(max(m, 1), grid.n - 1)
	offsets = np.arange(-m, m + 1)
	weights = 1.0 - np.abs(offsets) / (m + 1.0)
	weights /= weights.sum()
	padded = np.pad(values, m, mode="reflect", reflect_type="odd")
	return np.convolve(padded, weights, mode="valid")


def _smooth_stage(pair: ClassPair, width: float, kind: str) -> np.ndarray:
	if kind == "mollifier":
		return mollify(pair, width)
	k = 1.0 / width
	lo = lip_lower_envelope(pair.lower, k).values
	up = lip_upper_envelope(pair.upper, k).values
	return 0.5 * (lo + up)


def _stage_class(grid: Grid1D, values: np.ndarray) -> ClassPair:
	return canonical_pair(SampledFn.from_values(grid, values))


def _window_ok(window: Sequence[float], tol: float) -> bool:
	slack = 0.1 * tol
	return all(g < tol for g in window) and all(b <= a + slack for a, b in zip(window, window[1:]))


def _steep_runs(g: np.ndarray, step_tol: float) -> List[Tuple[int, int]]:
	"""Maximal node ranges [s, e] whose consecutive steps all exceed step_tol."""
	steep = (np.abs(np.diff(g)) > step_tol).astype(np.int8)
	edges = np.diff(np.concatenate(([0], steep, [0])))
	starts = np.flatnonzero(edges == 1)
	stops = np.flatnonzero(edges == -1)
	return [(int(s), int(e)) for s, e in zip(starts, stops)]


def _run_center(g: np.ndarray, s: int, e: int, marked: Sequence[int]) -> int:
	inside = [i for i in marked if s <= i <= e]
	if inside:
		return inside[0]
	n = g.shape[0]
	nodes = np.arange(s, e + 1)
	change = np.abs(g[np.minimum(nodes + 1, n - 1)] - g[np.maximum(nodes - 1, 0)])
	tied = nodes[change >= change.max() - 1e-12]
	return int(tied[(len(tied) - 1) // 2])


def _continued(g: np.ndarray, anchor: int, step: int, nodes: np.ndarray) -> np.ndarray:
	# linear continuation of g from the clean nodes anchor and anchor - step
	prev = anchor - step
	slope = g[anchor] - g[prev] if 0 <= prev < g.shape[0] else 0.0
	return g[anchor] + slope * np.abs(nodes - anchor)


def assemble_limit(
	grid: Grid1D,
	g: np.ndarray,
	lip: float,
	marked: Sequence[int] = (),
) -> GradientField:
	"""Gradient class read off a gradient sample whose jumps are smeared over a few nodes.

	Runs of steep steps mark transitions. Each run keeps one centre node;
	the other run nodes are continued from the clean nodes outside the run,
	and the centre becomes a jump node when the two continuations differ by
	more than the kink threshold. Nodes in `marked` are kept as jumps and
	preferred as centres.
	"""
	g = np.array(g, dtype=float)
	out = g.copy()
	jumps = set(int(i) for i in marked)
	step_tol = 0.25 * _gradient_floor(lip, grid.h)
	threshold = kink_threshold(lip, grid.h)
	for s, e in _steep_runs(g, step_tol):
		c = _run_center(g, s, e, sorted(jumps))
		left = _continued(g, s, 1, np.arange(s + 1, c + 1))
		right = _continued(g, e, -1, np.arange(c, e))
		lo_c = left[-1] if c > s else g[s]
		hi_c = right[0] if c < e else g[e]
		if abs(hi_c - lo_c) <= threshold and c not in jumps:
			continue
		out[s + 1:c] = left[:-1]
		out[c + 1:e] = right[1:]
		out[c] = 0.5 * (lo_c + hi_c)
		jumps.add(c)
	return GradientField.scalar(canonical_pair(SampledFn.from_values(grid, out, sorted(jumps))))


def node_gap(F: GradientField, G: GradientField) -> float:
	"""Largest node-wise Hausdorff distance between the interval values of two scalar fields."""
	a, b = F.first, G.first
	return float(max(
		np.max(np.abs(a.lower.values - b.lower.values)),
		np.max(np.abs(a.upper.values - b.upper.values)),
	))


def closure_gradient(
	f: Union[SampledFn, ClassPair],
	sched: Optional[SmoothingSchedule] = None,
	ks: Optional[Sequence[float]] = None,
	tol: Optional[float] = None,
) -> Tuple[GradientField, ClosureDiagnostic]:
	"""Gradient of f as the r-limit of gradients of smoothed stages.

	Stage gradients are compared in r; the run converges when the last three
	gaps (the final one against the grid-resolution stage) are below tol_grad
	and non-increasing. The limit is assembled from the finest smoothed
	stage gradient alone. Raises NotConverged with the diagnostic attached.
	"""
	pair = class_of(f)
	grid = pair.grid
	if sched is None:
		sched = SmoothingSchedule.geometric(grid)
	tol_grad = gradient_tolerance(pair) if tol is None else float(tol)
	values = np.asarray(pair.lower.values, dtype=float)

	stage_grads = []
	last_stage = None
	for w in sched.widths:
		smoothed = _smooth_stage(pair, w, sched.kind)
		last_stage = smoothed
		stage_grads.append(_stage_class(grid, _central_differences(smoothed, grid.h)))
	stage_grads.append(_stage_class(grid, _central_differences(values, grid.h)))

	gaps = tuple(r_metric(a, b, ks).value for a, b in zip(stage_grads, stage_grads[1:]))
	value_gap = r_metric(_stage_class(grid, last_stage), pair, ks).value
	value_tol = 10.0 * grid.h * (1.0 + pair.bound)

	converged_at = None
	for j in range(2, len(gaps)):
		if _window_ok(gaps[j - 2:j + 1], tol_grad):
			converged_at = j
			break
	converged = _window_ok(gaps[-3:], tol_grad) and value_gap <= value_tol and not pair.essential_jumps
	field = None
	limit_gap = None
	if converged:
		# the finest smoothed stage carries each kink as a short steep run
		finest = stage_grads[-2]
		field = assemble_limit(grid, finest.lower.values, measure_lip(grid, values))
		limit_gap = r_metric(stage_grads[-2], field.first, ks).value
		converged = limit_gap <= tol_grad
	logger.debug(
		"closure run",
		extra={"features": {
			"kind": sched.kind,
			"stages": sched.stages,
			"final_gap": gaps[-1],
			"tol_grad": tol_grad,
			"limit_gap": limit_gap,
			"converged": converged,
		}},
	)

	if not converged:
		diagnostic = ClosureDiagnostic(
			cauchy_gaps=gaps,
			converged=False,
			in_domain_hint=False,
			widths=sched.widths,
			converged_at=converged_at,
			value_gap=value_gap,
			limit_gap=limit_gap,
			tol_grad=tol_grad,
		)
		eps = 0.1 * tol_grad
		rises_early = len(gaps) >= 3 and gaps[1] > gaps[0] + eps
		falls_later = gaps[-1] < max(gaps) - eps
		if rises_early and falls_later:
			raise ScheduleTooCoarse(
				"Stage gaps rise before they fall; start the schedule at a larger width or add stages",
				diagnostic=diagnostic,
			)
		raise NotConverged(
			f"Stage gradients are not r-Cauchy within tol_grad={tol_grad:g} (last gaps {list(gaps[-3:])})",
			diagnostic=diagnostic,
		)

	diagnostic = ClosureDiagnostic(
		cauchy_gaps=gaps,
		converged=True,
		in_domain_hint=True,
		widths=sched.widths,
		converged_at=converged_at,
		value_gap=value_gap,
		limit_gap=limit_gap,
		tol_grad=tol_grad,
	)
	return field, diagnostic


# Calculus rules on classes

def _check_fields(df: GradientField, dg: GradientField) -> None:
	if df.m != dg.m:
		raise DimensionMismatch(f"Gradient fields differ in dimension: {df.m} vs {dg.m}")
	if df.grid != dg.grid:
		raise GridMismatch(f"Gradient fields live on different grids: {df.grid} vs {dg.grid}")


def grad_add(df: GradientField, dg: GradientField) -> GradientField:
	"""Class-level sum (not a Minkowski sum of values)."""
	_check_fields(df, dg)
	return GradientField(tuple(class_add(a, b) for a, b in zip(df.components, dg.components)))


def grad_scale(lam: float, df: GradientField) -> GradientField:
	return GradientField(tuple(class_scale(lam, c) for c in df.components))


def grad_product(f: ClassPair, g: ClassPair, df: GradientField, dg: GradientField) -> GradientField:
	"""Leibniz rule f*dg + g*df."""
	f, g = class_of(f), class_of(g)
	_check_fields(df, dg)
	if f.grid != g.grid or f.grid != df.grid:
		raise GridMismatch("Functions and gradients must share one grid")
	return GradientField(tuple(
		class_add(class_mul(f, b), class_mul(g, a)) for a, b in zip(df.components, dg.components)
	))


def _crossing_nodes(diff: np.ndarray, tie: float) -> List[int]:
	sign = np.where(diff > tie, 1, np.where(diff < -tie, -1, 0))
	strict = np.flatnonzero(sign != 0)
	out = []
	for i, j in zip(strict, strict[1:]):
		if sign[i] == sign[j]:
			continue
		if j - i > 1:
			out.extend(range(i + 1, j))
		else:
			out.append(int(i) if abs(diff[i]) <= abs(diff[j]) else int(j))
	return out


def grad_minmax(
	f: ClassPair,
	g: ClassPair,
	df: GradientField,
	dg: GradientField,
	which: str = "min",
) -> GradientField:
	"""Gradient of min(f, g) or max(f, g) by selecting the active gradient."""
	if which not in ("min", "max"):
		raise ValueError(f"which must be 'min' or 'max', got {which!r}")
	f, g = class_of(f), class_of(g)
	_check_fields(df, dg)
	if f.grid != g.grid or f.grid != df.grid:
		raise GridMismatch("Functions and gradients must share one grid")
	grid = f.grid
	diff = f.lower.values - g.lower.values
	tie = 1e-12 * (1.0 + max(f.bound, g.bound))
	pick_f = diff <= tie if which == "min" else diff >= -tie
	jumps = set(df.jumps) | set(dg.jumps) | set(_crossing_nodes(diff, tie))
	comps = []
	for a, b in zip(df.components, dg.components):
		values = np.where(pick_f, a.lower.values, b.lower.values)
		bound = max(a.bound, b.bound)
		comps.append(canonical_pair(SampledFn.from_values(grid, values, sorted(jumps), bound=bound)))
	return GradientField(tuple(comps))


def _outer_range(phi: SmoothFn, f: ClassPair) -> None:
	lo = float(f.lower.values.min())
	hi = float(f.upper.values.max())
	slack = 1e-12 * max(1.0, abs(phi.grid.a), abs(phi.grid.b))
	if lo < phi.grid.a - slack or hi > phi.grid.b + slack:
		raise RangeMismatch(f"Range [{lo}, {hi}] of f leaves the domain [{phi.grid.a}, {phi.grid.b}] of phi")


def compose(phi: SmoothFn, f: ClassPair) -> ClassPair:
	"""The class of phi o f."""
	f = class_of(f)
	_outer_range(phi, f)
	values = np.interp(f.lower.values, phi.grid.nodes, phi.values)
	return canonical_pair(SampledFn.from_values(f.grid, values, f.jumps))


def grad_chain(phi: SmoothFn, f: ClassPair, df: GradientField) -> GradientField:
	"""Chain rule phi'(f) * df."""
	f = class_of(f)
	if f.grid != df.grid:
		raise GridMismatch("f and its gradient must share one grid")
	_outer_range(phi, f)
	outer = np.interp(f.lower.values, phi.grid.nodes, phi.derivative_values())
	outer_class = canonical_pair(SampledFn.from_values(f.grid, outer, f.jumps))
	return GradientField(tuple(class_mul(outer_class, c) for c in df.components))


def minkowski_value(df: GradientField, dg: GradientField, x: float) -> IntervalValue:
	"""Pointwise Minkowski sum df(x) + dg(x), the right side of Clarke's sum rule."""
	_check_fields(df, dg)
	return value_at(df.first, x) + value_at(dg.first, x)


def stationarity_check(f: ClassPair, df: GradientField, x0: float, tol: Optional[float] = None) -> bool:
	"""0 in df(x0) at a local extremum x0 of f."""
	f = class_of(f)
	grid = f.grid
	i = grid.nearest(x0)
	lo, hi = max(0, i - 2), min(grid.n, i + 3)
	slack = f.tol_rep
	is_min = f.lower.values[i] <= float(np.min(f.lower.values[lo:hi])) + slack
	is_max = f.upper.values[i] >= float(np.max(f.upper.values[lo:hi])) - slack
	if not (is_min or is_max):
		raise NotAnExtremum(f"x0={x0} is not a local extremum of f on the grid")
	if tol is None:
		tol = gradient_tolerance(f, measure_lip(grid, f.lower.values))
	x = grid.nodes[i]
	if df.m == 1:
		return value_at(df.first, x).contains(0.0, tol)
	return value_at_vec(df, x).contains(np.zeros(df.m), tol)


def differentiability_at_continuity(
	f: ClassPair,
	df: GradientField,
	x: float,
	tol: Optional[float] = None,
) -> bool:
	"""Difference quotients of f at a continuity point of df approach df(x)."""
	f = class_of(f)
	grid = f.grid
	i = grid.nearest(x)
	value = value_at_vec(df, grid.nodes[i])
	tol_rep = max(c.tol_rep for c in df.components)
	if not value.is_singleton(tol_rep):
		raise NotAContinuityPoint(f"The gradient is not single-valued at x={grid.nodes[i]}")
	slope = value.vertices[0]
	if tol is None:
		tol = gradient_tolerance(f, measure_lip(grid, f.lower.values))
	mid = 0.5 * (f.lower.values + f.upper.values)
	h = grid.h
	errors = []
	for s in _STENCILS:
		if i - s >= 0 and i + s < grid.n:
			q = (mid[i + s] - mid[i - s]) / (2 * s * h)
		elif i + s < grid.n:
			q = (mid[i + s] - mid[i]) / (s * h)
		elif i - s >= 0:
			q = (mid[i] - mid[i - s]) / (s * h)
		else:
			continue
		errors.append(float(np.max(np.abs(q - slope[0]))))
	if not errors:
		raise NotAContinuityPoint("The grid has no stencil around x")
	return errors[-1] <= tol and errors[-1] <= errors[0] + tol


def limit_exchange(
	seq: Sequence[Tuple[ClassPair, GradientField]],
	x0: float,
	tol: Optional[float] = None,
	ks: Optional[Sequence[float]] = None,
) -> Tuple[ClassPair, GradientField]:
	"""Limit of (f_n, df_n) when f_n(x0) converges and the gradient graphs are h-Cauchy.

	Returns the uniform limit at working precision (the verified tail element)
	and the gradient limit assembled from the tail gradient, with jump nodes
	where its graph rises steeply. Both must be s- and r-limits of the
	sequence, and the gradient must match the Clarke gradient of the limit in
	the closed-graph distance.
	"""
	if len(seq) < 2:
		raise HypothesisViolated("Limit exchange needs at least two terms")
	pairs = [class_of(f) for f, _ in seq]
	fields = [df for _, df in seq]
	grid = pairs[0].grid
	for p, df in zip(pairs, fields):
		if p.grid != grid or df.grid != grid:
			raise GridMismatch("All terms must share one grid")
		if df.m != 1:
			raise DimensionMismatch(f"Limit exchange takes scalar gradients, got dimension {df.m}")
	last = pairs[-1]
	lip = measure_lip(grid, last.lower.values)
	if tol is None:
		tol = gradient_tolerance(last, lip)

	values = []
	for p in pairs:
		v = value_at(p, x0)
		values.append(0.5 * (v.lo + v.hi))
	if not tends_to_zero([abs(a - b) for a, b in zip(values, values[1:])], tol):
		raise HypothesisViolated(f"f_n(x0) does not converge: {values}")
	sup_gaps = [float(np.max(np.abs(a.lower.values - b.lower.values))) for a, b in zip(pairs, pairs[1:])]
	if not tends_to_zero(sup_gaps, tol):
		raise HypothesisViolated(f"f_n is not uniformly Cauchy: {sup_gaps}")
	graph_gaps = [closed_graph_hausdorff(a.first, b.first) for a, b in zip(fields, fields[1:])]
	if not tends_to_zero(graph_gaps, tol):
		raise HypothesisViolated(f"Gradient graphs are not h-Cauchy: {graph_gaps}")

	tail = fields[-1].first
	field = assemble_limit(grid, tail.lower.values, lip, tail.jumps)

	fn_tol = limit_tolerance(pairs)
	grad_tol = limit_tolerance([df.first for df in fields] + [field.first])
	for metric in (s_metric, r_metric):
		fn_dists = [metric(p, last, ks).value for p in pairs]
		if not tends_to_zero(fn_dists, fn_tol):
			raise HypothesisViolated(f"f_n does not converge to the limit in {metric.__name__}: {fn_dists}")
		grad_dists = [metric(df.first, field.first, ks).value for df in fields]
		if not tends_to_zero(grad_dists, grad_tol):
			raise HypothesisViolated(f"df_n does not converge to the limit gradient in {metric.__name__}: {grad_dists}")

	try:
		reference = clarke_gradient(last)
	except NotLipschitz as exc:
		raise HypothesisViolated(f"The limit is not Lipschitz: {exc.message}")
	agreement = closed_graph_hausdorff(field.first, reference.first)
	if agreement > tol:
		raise HypothesisViolated(f"Limit gradient is {agreement} away from the Clarke gradient of the limit")
	logger.debug(
		"limit exchange",
		extra={"features": {"terms": len(seq), "agreement": agreement, "jumps": list(field.jumps)}},
	)
	return last, field

# Named functions with closed forms, and seeded random families
#
# Entries are addressed by name, with parameters after colons:
# "const:2", "clamp:8", "mollified:abs:4".

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .classes import ClassPair, Grid1D, SampledFn, canonical_pair
from .errors import UnknownFunction
from .gradient import SmoothFn, mollify

Fn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class CatalogEntry:
	"""A named function with its closed form and, where known, its Clarke gradient."""

	name: str
	description: str
	value: Fn
	gradient: Optional[Fn] = None
	jumps_at: Tuple[float, ...] = ()
	kinks_at: Tuple[float, ...] = ()
	smooth: bool = False
	params: Dict[str, float] = field(default_factory=dict)
	builder: Optional[Callable[[Grid1D], ClassPair]] = None

	@property
	def has_gradient(self) -> bool:
		return self.gradient is not None

	def sample(self, grid: Grid1D) -> SampledFn:
		return SampledFn.from_callable(grid, self.value, self.jumps_at)

	def build(self, grid: Grid1D) -> ClassPair:
		if self.builder is not None:
			return self.builder(grid)
		return canonical_pair(self.sample(grid))

	def smooth_fn(self, grid: Grid1D) -> SmoothFn:
		if not self.smooth:
			raise UnknownFunction(f"'{self.name}' is not smooth")
		derivative = None if self.gradient is None else np.asarray(self.gradient(grid.nodes), dtype=float) * np.ones(grid.n)
		return SmoothFn(self.sample(grid), derivative)

	def gradient_class(self, grid: Grid1D) -> ClassPair:
		"""Closed-form Clarke gradient as a class, kinks as jump nodes."""
		if self.gradient is None:
			raise UnknownFunction(f"'{self.name}' has no closed-form gradient")
		values = np.asarray(self.gradient(grid.nodes), dtype=float) * np.ones(grid.n)
		kinks = [grid.nearest(x) for x in self.kinks_at]
		return canonical_pair(SampledFn.from_values(grid, values, kinks))

	def to_dict(self) -> Dict:
		return {
			"name": self.name,
			"description": self.description,
			"smooth": self.smooth,
			"has_gradient": self.has_gradient,
			"jumps_at": list(self.jumps_at),
			"kinks_at": list(self.kinks_at),
			"params": dict(self.params),
		}


def _sinlog(x: np.ndarray) -> np.ndarray:
	x = np.asarray(x, dtype=float)
	out = np.zeros_like(x)
	nz = x != 0
	out[nz] = x[nz] * np.sin(np.log(np.abs(x[nz])))
	return out


def _sinlog_grad(x: np.ndarray) -> np.ndarray:
	x = np.asarray(x, dtype=float)
	out = np.zeros_like(x)
	nz = x != 0
	t = np.log(np.abs(x[nz]))
	out[nz] = np.sin(t) + np.cos(t)
	return out


_FIXED: Dict[str, CatalogEntry] = {
	e.name: e for e in (
		CatalogEntry("abs", "|x|", np.abs, np.sign, kinks_at=(0.0,)),
		CatalogEntry("neg-abs", "-|x|", lambda x: -np.abs(x), lambda x: -np.sign(x), kinks_at=(0.0,)),
		CatalogEntry("sign", "sign(x), the class f_1", np.sign, jumps_at=(0.0,)),
		CatalogEntry("zero", "0, the class f_2", lambda x: np.zeros_like(x), lambda x: np.zeros_like(x), smooth=True),
		CatalogEntry("linear", "x", lambda x: np.array(x, dtype=float), lambda x: np.ones_like(x), smooth=True),
		CatalogEntry("quadratic", "x^2", lambda x: x * x, lambda x: 2.0 * x, smooth=True),
		CatalogEntry(
			"sinlog", "x sin(log|x|), oscillating slope near 0",
			_sinlog, _sinlog_grad, kinks_at=(0.0,),
		),
		CatalogEntry("cusp", "sqrt(|x|), not Lipschitz at 0", lambda x: np.sqrt(np.abs(x))),
		CatalogEntry(
			"ramp", "max(x, 0)", lambda x: np.maximum(x, 0.0),
			lambda x: (np.asarray(x) > 0).astype(float), kinks_at=(0.0,),
		),
		CatalogEntry("xabs", "x|x|, C^1", lambda x: x * np.abs(x), lambda x: 2.0 * np.abs(x), smooth=True),
		CatalogEntry(
			"logabs", "log(|x| + 1)", lambda x: np.log1p(np.abs(x)),
			lambda x: np.sign(x) / (np.abs(x) + 1.0), kinks_at=(0.0,),
		),
		CatalogEntry(
			"step-sum", "sign(x - 1/2) + sign(x + 1/2)",
			lambda x: np.sign(x - 0.5) + np.sign(x + 0.5), jumps_at=(-0.5, 0.5),
		),
	)
}


def _param(name: str, text: str) -> float:
	try:
		return float(text)
	except ValueError:
		raise UnknownFunction(f"Bad parameter '{text}' in catalog name '{name}'")


def _const(name: str, c: float) -> CatalogEntry:
	return CatalogEntry(
		name, f"constant {c:g}", lambda x: np.full_like(np.asarray(x, dtype=float), c),
		lambda x: np.zeros_like(np.asarray(x, dtype=float)), smooth=True, params={"c": c},
	)


def _clamp(name: str, n: float) -> CatalogEntry:
	if n <= 0:
		raise UnknownFunction(f"'{name}' needs a positive slope")
	return CatalogEntry(
		name, f"clip({n:g} x, -1, 1), a Lipschitz approximant of sign",
		lambda x: np.clip(n * np.asarray(x, dtype=float), -1.0, 1.0),
		lambda x: np.where(np.abs(n * np.asarray(x, dtype=float)) < 1.0, n, 0.0),
		kinks_at=(-1.0 / n, 1.0 / n), params={"n": n},
	)


def _smoothabs(name: str, n: float) -> CatalogEntry:
	if n <= 0:
		raise UnknownFunction(f"'{name}' needs a positive parameter")
	eps2 = 1.0 / (n * n)
	return CatalogEntry(
		name, f"sqrt(x^2 + 1/{n:g}^2)",
		lambda x: np.sqrt(x * x + eps2), lambda x: x / np.sqrt(x * x + eps2),
		smooth=True, params={"n": n},
	)


def _mollified(name: str, base: CatalogEntry, width_in_h: float) -> CatalogEntry:
	if width_in_h <= 0:
		raise UnknownFunction(f"'{name}' needs a positive width")

	def build(grid: Grid1D) -> ClassPair:
		values = mollify(base.build(grid), width_in_h * grid.h)
		return canonical_pair(SampledFn.from_values(grid, values))

	return CatalogEntry(
		name, f"{base.name} smoothed by a triangular kernel of half-width {width_in_h:g}h",
		base.value, params={"width_in_h": width_in_h}, builder=build,
	)


def get_entry(name: str) -> CatalogEntry:
	name = name.strip()
	if name in _FIXED:
		return _FIXED[name]
	head, _, rest = name.partition(":")
	if rest:
		if head == "const":
			return _const(name, _param(name, rest))
		if head == "clamp":
			return _clamp(name, _param(name, rest))
		if head == "smoothabs":
			return _smoothabs(name, _param(name, rest))
		if head == "mollified":
			base_name, _, width = rest.rpartition(":")
			if base_name:
				return _mollified(name, get_entry(base_name), _param(name, width))
	raise UnknownFunction(f"Unknown catalog function '{name}'. Run 'setcalc catalog' for the list")


def build(name: str, grid: Grid1D) -> ClassPair:
	return get_entry(name).build(grid)


def list_entries() -> List[CatalogEntry]:
	"""Fixed entries plus one example of each parameterized family."""
	examples = [get_entry(n) for n in ("const:1", "clamp:8", "smoothabs:16", "mollified:abs:4")]
	return list(_FIXED.values()) + examples


# Random families

def _knot_positions(grid: Grid1D, rng: np.random.Generator, count: int, spacing: int) -> np.ndarray:
	"""Sorted interior node indices at least `spacing` apart."""
	lo, hi = spacing, grid.n - 1 - spacing
	slots = (hi - lo) // spacing
	if slots < count:
		raise UnknownFunction(f"Grid with n={grid.n} cannot hold {count} knots {spacing} nodes apart")
	chosen = np.sort(rng.choice(slots, size=count, replace=False))
	return lo + chosen * spacing


def _next_slope(slope: float, rng: np.random.Generator, max_slope: float) -> float:
	step = rng.uniform(1.0, 2.0) * rng.choice((-1.0, 1.0))
	if abs(slope + step) > max_slope:
		step = -step
	return slope + step


def _piecewise_from_knots(grid: Grid1D, rng: np.random.Generator, knots, max_slope: float, curvature: float):
	x = grid.nodes
	slopes = [rng.uniform(-1.0, 1.0)]
	for _ in knots:
		slopes.append(_next_slope(slopes[-1], rng, max_slope))
	steps = np.empty(grid.n - 1)
	edges = [0] + list(knots) + [grid.n - 1]
	for s, (i, j) in zip(slopes, zip(edges, edges[1:])):
		steps[i:j] = s * grid.h
	values = np.concatenate([[0.0], np.cumsum(steps)])
	values += rng.uniform(-0.5, 0.5) - values[grid.n // 2]
	values += 0.5 * curvature * x * x
	return SampledFn.from_values(grid, values)


def random_piecewise(grid: Grid1D, rng: np.random.Generator, pieces: int = 5, spacing: int = 5,
                     max_slope: float = 3.0) -> SampledFn:
	"""Continuous piecewise linear-plus-quadratic sample with kinks on nodes.

	Slopes change by at least 1 at every kink.
	"""
	knots = _knot_positions(grid, rng, pieces - 1, spacing)
	return _piecewise_from_knots(grid, rng, knots, max_slope, rng.uniform(-1.0, 1.0))


def random_pair(grid: Grid1D, rng: np.random.Generator, pieces: int = 5, spacing: int = 5,
                max_slope: float = 3.0) -> Tuple[SampledFn, SampledFn]:
	"""Two random_piecewise samples whose kinks never share a node."""
	knots = _knot_positions(grid, rng, 2 * (pieces - 1), spacing)
	f = _piecewise_from_knots(grid, rng, knots[0::2], max_slope, rng.uniform(-1.0, 1.0))
	g = _piecewise_from_knots(grid, rng, knots[1::2], max_slope, rng.uniform(-1.0, 1.0))
	return f, g


def random_crossing_pair(grid: Grid1D, rng: np.random.Generator, pieces: int = 5, spacing: int = 10,
                         max_slope: float = 3.0) -> Tuple[SampledFn, SampledFn]:
	"""f and g = f + d, where d changes sign only through zeros at nodes.

	The knots of d alternate between the values +a, 0, -a, 0, ... so f and g
	cross exactly on nodes; the kinks of f sit between them.
	"""
	f = random_piecewise(grid, rng, pieces, spacing, max_slope)
	count = pieces + 1
	gap = (grid.n - 1) // (count + 1)
	if gap < 2 * spacing:
		raise UnknownFunction(f"Grid with n={grid.n} is too coarse for {count} crossing knots")
	jitter = rng.integers(-(gap // 8), gap // 8 + 1, size=count)
	knots = gap * np.arange(1, count + 1) + jitter
	pattern = []
	sign = rng.choice((-1.0, 1.0))
	for k in range(count):
		if k % 2 == 1:
			pattern.append(0.0)
		else:
			# peak high enough for slopes of at least 1 on both sides
			reach = max(gap + gap // 4, 1) * grid.h
			pattern.append(sign * rng.uniform(1.0, 1.2) * reach)
			sign = -sign
	edges = np.concatenate([[0], knots, [grid.n - 1]])
	levels = np.concatenate([[pattern[0]], pattern, [pattern[-1]]])
	d = np.interp(np.arange(grid.n), edges, levels)
	for k, i in enumerate(knots):
		if pattern[k] == 0.0:
			d[i] = 0.0
	g = SampledFn.from_values(grid, f.values + d)
	return f, g


def random_step(grid: Grid1D, rng: np.random.Generator, jumps: int = 2, spacing: int = 10) -> SampledFn:
	"""Piecewise linear sample with genuine jumps at nodes."""
	knots = _knot_positions(grid, rng, jumps, spacing)
	values = random_piecewise(grid, rng, 3, spacing).values.copy()
	offset = 0.0
	edges = list(knots) + [grid.n]
	for start, stop in zip(edges, edges[1:]):
		offset += rng.uniform(0.5, 1.5) * rng.choice((-1.0, 1.0))
		values[start:stop] += offset
	return SampledFn.from_values(grid, values, [int(k) for k in knots])

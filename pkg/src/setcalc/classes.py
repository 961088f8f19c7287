# Sampled functions, their equivalence classes and set-valued values
#
# A class is stored through its lower (l.s.c.) and upper (u.s.c.)
# quasicontinuous representatives. Both live on one uniform grid and share a
# finite jump set; off the jump set they coincide.

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import (
	DimensionMismatch,
	GridMismatch,
	InvalidGrid,
	InvalidSample,
	OutOfDomain,
	RepresentativeInconsistent,
)

logger = logging.getLogger(__name__)

# Floor for representation tolerances (floating-point noise)
TOL_FLOOR = 1e-12

# Relative slack used when snapping points onto grid nodes
_SNAP = 1e-9


def _readonly(values) -> np.ndarray:
	arr = np.array(values, dtype=float)
	arr.setflags(write=False)
	return arr


def representation_tolerance(lip: float, h: float) -> float:
	"""Default tolerance for representative comparisons: 4*lip*h + 1e-12."""
	return 4.0 * lip * h + TOL_FLOOR


@dataclass(frozen=True)
class Grid1D:
	"""Uniform grid of n nodes on the closed interval [a, b]."""

	a: float
	b: float
	n: int

	def __post_init__(self):
		try:
			a = float(self.a)
			b = float(self.b)
		except (TypeError, ValueError):
			raise InvalidGrid(f"Grid endpoints must be real numbers, got a={self.a!r}, b={self.b!r}")
		if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
			raise InvalidGrid(f"Grid requires finite a < b, got a={a}, b={b}")
		if isinstance(self.n, bool) or int(self.n) != self.n or int(self.n) < 2:
			raise InvalidGrid(f"Grid requires an integer n >= 2, got n={self.n!r}")
		object.__setattr__(self, "a", a)
		object.__setattr__(self, "b", b)
		object.__setattr__(self, "n", int(self.n))

	@property
	def h(self) -> float:
		return (self.b - self.a) / (self.n - 1)

	@cached_property
	def nodes(self) -> np.ndarray:
		x = self.a + (self.b - self.a) * (np.arange(self.n, dtype=float) / (self.n - 1))
		x[-1] = self.b
		x.setflags(write=False)
		return x

	def locate(self, x: float) -> Tuple[int, float]:
		"""Return (i, t) with x = x_i + t*h and 0 <= t < 1.

		Points within a relative 1e-9 of a node snap onto it (t = 0).
		"""
		x = float(x)
		h = self.h
		if not math.isfinite(x) or x < self.a - _SNAP * h or x > self.b + _SNAP * h:
			raise OutOfDomain(f"Point {x} lies outside [{self.a}, {self.b}]")
		pos = (x - self.a) / h
		i = int(math.floor(pos))
		t = pos - i
		if t > 1.0 - _SNAP:
			i += 1
			t = 0.0
		elif t < _SNAP:
			t = 0.0
		if i >= self.n - 1:
			return self.n - 1, 0.0
		if i < 0:
			return 0, 0.0
		return i, t

	def nearest(self, x: float) -> int:
		i, t = self.locate(x)
		return i + 1 if t >= 0.5 else i

	def node_index(self, x: float) -> Optional[int]:
		"""Index of the node at x, or None when x is not a node."""
		i, t = self.locate(x)
		return i if t == 0.0 else None

	def same_as(self, other: "Grid1D") -> bool:
		return self == other

	def to_dict(self):
		return {"a": self.a, "b": self.b, "n": self.n}


def _continuity_mask(n: int, jumps: Sequence[int]) -> np.ndarray:
	ok = np.ones(n, dtype=bool)
	if len(jumps):
		ok[list(jumps)] = False
	return ok


def _continuous_steps(values: np.ndarray, ok: np.ndarray) -> np.ndarray:
	pair_ok = ok[:-1] & ok[1:]
	return np.abs(np.diff(values))[pair_ok]


def measure_lip(grid: Grid1D, values, jumps: Sequence[int] = ()) -> float:
	"""Largest discrete slope over adjacent continuity nodes."""
	values = np.asarray(values, dtype=float)
	steps = _continuous_steps(values, _continuity_mask(grid.n, jumps))
	if steps.size == 0:
		return 0.0
	return float(steps.max() / grid.h)


@dataclass(frozen=True, eq=False)
class SampledFn:
	"""A bounded function sampled on a grid with a declared finite jump set.

	`lip` bounds the slope on every jump-free stretch, `bound` bounds |values|.
	"""

	grid: Grid1D
	values: np.ndarray
	jumps: Tuple[int, ...] = ()
	lip: float = 0.0
	bound: float = 0.0

	def __post_init__(self):
		grid = self.grid
		if not isinstance(grid, Grid1D):
			raise InvalidSample(f"Expected a Grid1D, got {type(grid).__name__}")
		values = _readonly(self.values)
		if values.shape != (grid.n,):
			raise InvalidSample(f"Expected {grid.n} values, got shape {values.shape}")
		if not np.all(np.isfinite(values)):
			raise InvalidSample("Sample values must be finite")
		jumps = tuple(sorted({int(j) for j in self.jumps}))
		if jumps and (jumps[0] < 0 or jumps[-1] >= grid.n):
			raise InvalidSample(f"Jump indices must lie in [0, {grid.n - 1}], got {list(jumps)}")
		if len(jumps) >= grid.n:
			raise InvalidSample("At least one node must be a continuity node")
		lip = float(self.lip)
		bound = float(self.bound)
		if not (math.isfinite(lip) and lip >= 0.0):
			raise InvalidSample(f"Lipschitz bound must be finite and nonnegative, got {self.lip}")
		if not (math.isfinite(bound) and bound >= 0.0):
			raise InvalidSample(f"Value bound must be finite and nonnegative, got {self.bound}")
		peak = float(np.max(np.abs(values)))
		if peak > bound * (1.0 + TOL_FLOOR) + TOL_FLOOR:
			raise InvalidSample(f"Values reach {peak}, above the declared bound {bound}")
		steps = _continuous_steps(values, _continuity_mask(grid.n, jumps))
		tol = representation_tolerance(lip, grid.h)
		if steps.size and float(steps.max()) > lip * grid.h + tol:
			raise InvalidSample(
				f"Step {float(steps.max())} between continuity nodes exceeds lip*h + tol "
				f"= {lip * grid.h + tol} (lip={lip})"
			)
		object.__setattr__(self, "values", values)
		object.__setattr__(self, "jumps", jumps)
		object.__setattr__(self, "lip", lip)
		object.__setattr__(self, "bound", bound)

	@classmethod
	def from_values(
		cls,
		grid: Grid1D,
		values,
		jumps: Iterable[int] = (),
		lip: Optional[float] = None,
		bound: Optional[float] = None,
	) -> "SampledFn":
		"""Build a sample, measuring lip and bound when they are omitted."""
		arr = np.asarray(values, dtype=float)
		jumps = tuple(jumps)
		if arr.shape != (grid.n,):
			raise InvalidSample(f"Expected {grid.n} values, got shape {arr.shape}")
		if lip is None:
			lip = measure_lip(grid, arr, jumps)
		if bound is None:
			bound = float(np.max(np.abs(arr))) if arr.size else 0.0
		return cls(grid, arr, jumps, lip, bound)

	@classmethod
	def from_callable(cls, grid: Grid1D, fn, jumps_at: Iterable[float] = ()) -> "SampledFn":
		values = np.asarray(fn(grid.nodes), dtype=float)
		if values.shape == ():
			values = np.full(grid.n, float(values))
		jumps = [grid.nearest(x) for x in jumps_at]
		return cls.from_values(grid, values, jumps)

	@property
	def h(self) -> float:
		return self.grid.h

	@property
	def tol_rep(self) -> float:
		return representation_tolerance(self.lip, self.grid.h)

	@property
	def is_continuous(self) -> bool:
		return not self.jumps

	@cached_property
	def continuity_mask(self) -> np.ndarray:
		mask = _continuity_mask(self.grid.n, self.jumps)
		mask.setflags(write=False)
		return mask

	def with_values(self, values, lip: Optional[float] = None) -> "SampledFn":
		return SampledFn(self.grid, values, self.jumps, self.lip if lip is None else lip, self.bound)

	def _side_limit(self, i: int, step: int) -> Optional[float]:
		ok = self.continuity_mask
		n = self.grid.n
		j = i + step
		while 0 <= j < n and not ok[j]:
			j += step
		if not 0 <= j < n:
			return None
		value = float(self.values[j])
		j2 = j + step
		if j == i + step and 0 <= j2 < n and ok[j2]:
			# linear continuation of the adjacent piece
			value = 2.0 * value - float(self.values[j2])
			value = min(max(value, -self.bound), self.bound)
		return value

	@cached_property
	def _limits(self) -> Tuple[np.ndarray, np.ndarray]:
		left = np.array(self.values, dtype=float)
		right = np.array(self.values, dtype=float)
		for i in self.jumps:
			lo = self._side_limit(i, -1)
			hi = self._side_limit(i, 1)
			if lo is None:
				lo = hi
			if hi is None:
				hi = lo
			left[i] = lo
			right[i] = hi
		left.setflags(write=False)
		right.setflags(write=False)
		return left, right

	def one_sided_limits(self) -> Tuple[np.ndarray, np.ndarray]:
		"""Left and right limits at every node.

		Continuity nodes return their own value. At a jump node each side is
		read from the nearest continuity node on that side, continued linearly
		through the next node when the adjacent piece has two nodes.
		"""
		return self._limits

	def __repr__(self):
		return (
			f"SampledFn(grid={self.grid}, jumps={list(self.jumps)}, "
			f"lip={self.lip:g}, bound={self.bound:g})"
		)


def lsc_hull(f: SampledFn) -> SampledFn:
	"""Lower semicontinuous hull: min of node value and one-sided limits at jumps."""
	if not f.jumps:
		return f
	left, right = f.one_sided_limits()
	idx = list(f.jumps)
	values = np.array(f.values)
	values[idx] = np.minimum(values[idx], np.minimum(left[idx], right[idx]))
	return SampledFn(f.grid, values, f.jumps, f.lip, f.bound)


def usc_hull(f: SampledFn) -> SampledFn:
	"""Upper semicontinuous hull, dual to lsc_hull."""
	if not f.jumps:
		return f
	left, right = f.one_sided_limits()
	idx = list(f.jumps)
	values = np.array(f.values)
	values[idx] = np.maximum(values[idx], np.maximum(left[idx], right[idx]))
	return SampledFn(f.grid, values, f.jumps, f.lip, f.bound)


def is_quasicontinuous(f: SampledFn, tol: Optional[float] = None) -> bool:
	"""True iff every jump node is approached by one adjacent piece within tol."""
	if tol is None:
		tol = f.tol_rep
	left, right = f.one_sided_limits()
	for i in f.jumps:
		v = f.values[i]
		if abs(v - left[i]) > tol and abs(v - right[i]) > tol:
			return False
	return True


@dataclass(frozen=True)
class IntervalValue:
	"""Closed interval [lo, hi], the value of a scalar class at a point."""

	lo: float
	hi: float

	def __post_init__(self):
		lo = float(self.lo)
		hi = float(self.hi)
		if not lo <= hi:
			raise InvalidSample(f"Interval requires lo <= hi, got [{lo}, {hi}]")
		object.__setattr__(self, "lo", lo)
		object.__setattr__(self, "hi", hi)

	@classmethod
	def point(cls, y: float) -> "IntervalValue":
		return cls(y, y)

	@property
	def width(self) -> float:
		return self.hi - self.lo

	def is_singleton(self, tol: float = 0.0) -> bool:
		return self.width <= tol

	def contains(self, y: float, tol: float = 0.0) -> bool:
		return self.lo - tol <= y <= self.hi + tol

	def issubset(self, other: "IntervalValue", tol: float = 0.0) -> bool:
		return other.lo - tol <= self.lo and self.hi <= other.hi + tol

	def hausdorff(self, other: "IntervalValue") -> float:
		return max(abs(self.lo - other.lo), abs(self.hi - other.hi))

	def scale(self, lam: float) -> "IntervalValue":
		a, b = lam * self.lo, lam * self.hi
		return IntervalValue(min(a, b), max(a, b))

	def __add__(self, other: "IntervalValue") -> "IntervalValue":
		# Minkowski sum
		return IntervalValue(self.lo + other.lo, self.hi + other.hi)

	def __neg__(self) -> "IntervalValue":
		return IntervalValue(-self.hi, -self.lo)

	def to_list(self):
		return [self.lo, self.hi]


def _segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
	d = b - a
	len2 = float(d @ d)
	if len2 == 0.0:
		return float(np.linalg.norm(p - a))
	t = min(1.0, max(0.0, float((p - a) @ d) / len2))
	return float(np.linalg.norm(p - (a + t * d)))


def _cross(o: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
	return float((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]))


def _planar_hull(points: np.ndarray) -> np.ndarray:
	"""Counter-clockwise hull vertices; a collinear set gives its two end points."""
	try:
		hull = ConvexHull(points)
	except QhullError:
		order = np.lexsort((points[:, 1], points[:, 0]))
		return points[[order[0], order[-1]]]
	return points[hull.vertices]


def _dedupe(points: np.ndarray) -> np.ndarray:
	scale = max(1.0, float(np.max(np.abs(points)))) if points.size else 1.0
	kept = []
	for p in points:
		if all(np.max(np.abs(p - q)) > TOL_FLOOR * scale for q in kept):
			kept.append(p)
	return np.array(kept, dtype=float)


@dataclass(frozen=True, eq=False)
class ConvexValue:
	"""Convex polytope given by a minimal vertex list, the value of a vector class."""

	vertices: np.ndarray

	def __post_init__(self):
		verts = np.atleast_2d(np.array(self.vertices, dtype=float))
		if verts.size == 0:
			raise InvalidSample("A convex value needs at least one vertex")
		if not np.all(np.isfinite(verts)):
			raise InvalidSample("Convex value vertices must be finite")
		verts.setflags(write=False)
		object.__setattr__(self, "vertices", verts)

	@classmethod
	def point(cls, p) -> "ConvexValue":
		return cls(np.atleast_2d(np.asarray(p, dtype=float)))

	@classmethod
	def hull(cls, points) -> "ConvexValue":
		pts = np.atleast_2d(np.asarray(points, dtype=float))
		if pts.size == 0:
			raise InvalidSample("Cannot take the hull of no points")
		m = pts.shape[1]
		if m == 1:
			lo, hi = float(pts.min()), float(pts.max())
			return cls([[lo]] if lo == hi else [[lo], [hi]])
		pts = _dedupe(pts)
		if len(pts) <= 2:
			return cls(pts)
		if m == 2:
			return cls(_planar_hull(pts))
		raise DimensionMismatch(f"Hull of {len(pts)} points is only supported for m <= 2 (got m={m})")

	@property
	def dim(self) -> int:
		return int(self.vertices.shape[1])

	def is_singleton(self, tol: float = 0.0) -> bool:
		v = self.vertices
		return bool(np.max(np.abs(v - v[0])) <= tol)

	def support(self, xi) -> float:
		return float(np.max(self.vertices @ np.asarray(xi, dtype=float)))

	def distance(self, p) -> float:
		p = np.asarray(p, dtype=float).reshape(-1)
		if p.shape[0] != self.dim:
			raise DimensionMismatch(f"Point of dimension {p.shape[0]} against a value of dimension {self.dim}")
		v = self.vertices
		k = len(v)
		if k == 1:
			return float(np.linalg.norm(p - v[0]))
		if k == 2:
			return _segment_distance(p, v[0], v[1])
		inside = all(_cross(v[i], v[(i + 1) % k], p) >= -TOL_FLOOR for i in range(k))
		if inside:
			return 0.0
		return min(_segment_distance(p, v[i], v[(i + 1) % k]) for i in range(k))

	def contains(self, p, tol: float = 0.0) -> bool:
		return self.distance(p) <= tol + TOL_FLOOR

	def issubset(self, other: "ConvexValue", tol: float = 0.0) -> bool:
		return all(other.contains(v, tol) for v in self.vertices)

	def hausdorff(self, other: "ConvexValue") -> float:
		# the distance to a convex set is convex, so vertices attain the max
		a = max(other.distance(v) for v in self.vertices)
		b = max(self.distance(w) for w in other.vertices)
		return float(max(a, b))

	def as_interval(self) -> IntervalValue:
		if self.dim != 1:
			raise DimensionMismatch(f"Only one-dimensional values are intervals (dim={self.dim})")
		return IntervalValue(float(self.vertices.min()), float(self.vertices.max()))

	def to_list(self):
		return self.vertices.tolist()


@dataclass(frozen=True, eq=False)
class ClassPair:
	"""An equivalence class stored as its lower and upper quasicontinuous representatives."""

	lower: SampledFn
	upper: SampledFn

	def __post_init__(self):
		lower, upper = self.lower, self.upper
		if lower.grid != upper.grid:
			raise GridMismatch("Lower and upper representatives live on different grids")
		if lower.jumps != upper.jumps:
			raise RepresentativeInconsistent("Lower and upper representatives declare different jump sets")
		tol = max(lower.tol_rep, upper.tol_rep)
		if np.any(lower.values > upper.values + tol):
			raise RepresentativeInconsistent("Lower representative exceeds the upper one")
		ok = lower.continuity_mask
		if np.any(np.abs(lower.values - upper.values)[ok] > tol):
			raise RepresentativeInconsistent("Representatives differ off the jump set")
		if lower.jumps:
			if np.max(np.abs(usc_hull(lower).values - upper.values)) > tol:
				raise RepresentativeInconsistent("usc hull of the lower representative is not the upper one")
			if np.max(np.abs(lsc_hull(upper).values - lower.values)) > tol:
				raise RepresentativeInconsistent("lsc hull of the upper representative is not the lower one")

	@property
	def grid(self) -> Grid1D:
		return self.lower.grid

	@property
	def jumps(self) -> Tuple[int, ...]:
		return self.lower.jumps

	@property
	def lip(self) -> float:
		return max(self.lower.lip, self.upper.lip)

	@property
	def bound(self) -> float:
		return max(self.lower.bound, self.upper.bound)

	@property
	def tol_rep(self) -> float:
		return max(self.lower.tol_rep, self.upper.tol_rep)

	@cached_property
	def essential_jumps(self) -> Tuple[int, ...]:
		gap = self.upper.values - self.lower.values
		return tuple(int(i) for i in self.jumps if gap[i] > self.tol_rep)

	@property
	def is_continuous(self) -> bool:
		return not self.essential_jumps

	@property
	def representative(self) -> SampledFn:
		return self.lower

	def __add__(self, other):
		return class_add(self, other)

	def __neg__(self):
		return class_scale(-1.0, self)

	def __sub__(self, other):
		return class_add(self, class_scale(-1.0, other))

	def __mul__(self, other):
		if isinstance(other, ClassPair):
			return class_mul(self, other)
		return class_scale(float(other), self)

	__rmul__ = __mul__

	def __repr__(self):
		return f"ClassPair(grid={self.grid}, jumps={list(self.jumps)}, essential={list(self.essential_jumps)})"


def canonical_pair(f: SampledFn) -> ClassPair:
	"""The class of f through its lower/upper quasicontinuous representatives.

	Values supplied at jump nodes are ignored; only the one-sided limits matter.
	"""
	if not f.jumps:
		return ClassPair(f, f)
	left, right = f.one_sided_limits()
	idx = list(f.jumps)
	lo = np.array(f.values)
	hi = np.array(f.values)
	lo[idx] = np.minimum(left[idx], right[idx])
	hi[idx] = np.maximum(left[idx], right[idx])
	try:
		return ClassPair(
			SampledFn(f.grid, lo, f.jumps, f.lip, f.bound),
			SampledFn(f.grid, hi, f.jumps, f.lip, f.bound),
		)
	except InvalidSample as exc:
		raise RepresentativeInconsistent(f"Canonical representatives are invalid: {exc.message}")


def class_of(f: Union[SampledFn, ClassPair]) -> ClassPair:
	if isinstance(f, ClassPair):
		return f
	return canonical_pair(f)


def _check_same_grid(*pairs) -> Grid1D:
	grid = pairs[0].grid
	for p in pairs[1:]:
		if p.grid != grid:
			raise GridMismatch(f"Operands live on different grids: {grid} vs {p.grid}")
	return grid


def _rebuild(grid: Grid1D, values: np.ndarray, jumps, lip_hint: float, bound_hint: float) -> ClassPair:
	jumps = tuple(sorted(set(jumps)))
	lip = max(lip_hint, measure_lip(grid, values, jumps))
	bound = max(bound_hint, float(np.max(np.abs(values))))
	return canonical_pair(SampledFn(grid, values, jumps, lip, bound))


def class_add(f: ClassPair, g: ClassPair) -> ClassPair:
	grid = _check_same_grid(f, g)
	values = f.lower.values + g.lower.values
	return _rebuild(grid, values, set(f.jumps) | set(g.jumps), f.lip + g.lip, f.bound + g.bound)


def class_scale(lam: float, f: ClassPair) -> ClassPair:
	lam = float(lam)
	values = lam * f.lower.values
	return _rebuild(f.grid, values, f.jumps, abs(lam) * f.lip, abs(lam) * f.bound)


def class_mul(f: ClassPair, g: ClassPair) -> ClassPair:
	grid = _check_same_grid(f, g)
	values = f.lower.values * g.lower.values
	lip = f.lip * g.bound + g.lip * f.bound
	return _rebuild(grid, values, set(f.jumps) | set(g.jumps), lip, f.bound * g.bound)


def class_min(f: ClassPair, g: ClassPair) -> ClassPair:
	grid = _check_same_grid(f, g)
	values = np.minimum(f.lower.values, g.lower.values)
	return _rebuild(grid, values, set(f.jumps) | set(g.jumps), max(f.lip, g.lip), max(f.bound, g.bound))


def class_max(f: ClassPair, g: ClassPair) -> ClassPair:
	grid = _check_same_grid(f, g)
	values = np.maximum(f.lower.values, g.lower.values)
	return _rebuild(grid, values, set(f.jumps) | set(g.jumps), max(f.lip, g.lip), max(f.bound, g.bound))


def constant_class(grid: Grid1D, c: float) -> ClassPair:
	return canonical_pair(SampledFn.from_values(grid, np.full(grid.n, float(c))))


def zero_class(grid: Grid1D) -> ClassPair:
	return constant_class(grid, 0.0)


def class_equal(f: ClassPair, g: ClassPair, tol: Optional[float] = None) -> bool:
	_check_same_grid(f, g)
	if tol is None:
		tol = max(f.tol_rep, g.tol_rep)
	return bool(
		np.max(np.abs(f.lower.values - g.lower.values)) <= tol
		and np.max(np.abs(f.upper.values - g.upper.values)) <= tol
	)


def class_leq(f: ClassPair, g: ClassPair, tol: Optional[float] = None) -> bool:
	"""Lattice order of classes (a.e. order of representatives)."""
	_check_same_grid(f, g)
	if tol is None:
		tol = max(f.tol_rep, g.tol_rep)
	return bool(
		np.all(f.lower.values <= g.lower.values + tol)
		and np.all(f.upper.values <= g.upper.values + tol)
	)


def integral(f: Union[SampledFn, ClassPair], side: str = "lower") -> float:
	"""Trapezoid integral of a representative over [a, b]."""
	if isinstance(f, ClassPair):
		f = f.lower if side == "lower" else f.upper
	return float(np.trapezoid(f.values, dx=f.grid.h))


def integral_gap(f: ClassPair) -> Tuple[float, float]:
	"""(|integral of upper - integral of lower|, allowed bound 2*M*h*|jumps|)."""
	gap = abs(integral(f, "upper") - integral(f, "lower"))
	return gap, 2.0 * f.bound * f.grid.h * len(f.jumps) + TOL_FLOOR


def value_at(f: ClassPair, x: float) -> IntervalValue:
	"""The set-valued value [f^-(x), f^+(x)]."""
	i, t = f.grid.locate(x)
	if t == 0.0:
		return IntervalValue(f.lower.values[i], f.upper.values[i])
	left, right = f.lower.one_sided_limits()
	y = right[i] + t * (left[i + 1] - right[i])
	return IntervalValue(y, y)


@dataclass(frozen=True, eq=False)
class VectorClass:
	"""A class with values in R^m, one ClassPair per component on a shared grid."""

	components: Tuple[ClassPair, ...]

	def __post_init__(self):
		comps = tuple(self.components)
		if not comps:
			raise DimensionMismatch("A vector class needs at least one component")
		_check_same_grid(*comps)
		object.__setattr__(self, "components", comps)

	@classmethod
	def of(cls, *components: ClassPair):
		return cls(tuple(components))

	@property
	def m(self) -> int:
		return len(self.components)

	@property
	def grid(self) -> Grid1D:
		return self.components[0].grid

	@cached_property
	def jumps(self) -> Tuple[int, ...]:
		joint = set()
		for c in self.components:
			joint.update(c.jumps)
		return tuple(sorted(joint))

	@cached_property
	def joint_representatives(self) -> Tuple[SampledFn, ...]:
		# components re-declared on the joint jump set
		return tuple(
			SampledFn(self.grid, c.lower.values, self.jumps, c.lip, c.bound)
			for c in self.components
		)

	def component(self, i: int) -> ClassPair:
		return self.components[i]

	def dot(self, xi) -> ClassPair:
		"""The scalar class <F, xi>."""
		xi = np.asarray(xi, dtype=float).reshape(-1)
		if xi.shape[0] != self.m:
			raise DimensionMismatch(f"Direction of dimension {xi.shape[0]} against m={self.m}")
		total = class_scale(xi[0], self.components[0])
		for w, c in zip(xi[1:], self.components[1:]):
			total = class_add(total, class_scale(w, c))
		return total


def value_at_vec(F: VectorClass, x: float) -> ConvexValue:
	"""Convex hull of the cluster vectors of F at x."""
	i, t = F.grid.locate(x)
	reps = F.joint_representatives
	limits = [r.one_sided_limits() for r in reps]
	if t == 0.0:
		if i not in F.jumps:
			return ConvexValue.point([r.values[i] for r in reps])
		left = [lim[0][i] for lim in limits]
		right = [lim[1][i] for lim in limits]
		return ConvexValue.hull([left, right])
	point = [lim[1][i] + t * (lim[0][i + 1] - lim[1][i]) for lim in limits]
	return ConvexValue.point(point)

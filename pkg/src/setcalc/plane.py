# Two-dimensional demonstration: tensor grids, cone envelopes, quadrant gradients
#
# Kinks are restricted to axis-aligned lines, so the gradient value at a
# node is the hull of at most four quadrant gradients.

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from .classes import ConvexValue, Grid1D
from .envelope import _check_k
from .errors import GridMismatch, InvalidSample
from .gradient import kink_threshold

logger = logging.getLogger(__name__)

# Fixed-point rounds of the chamfer sweep
MAX_ROUNDS = 8

# Worst ratio of the 8-neighbour chamfer length to the Euclidean length on square cells
CHAMFER_RATIO = 1.0824

_ORACLE_CHUNK = 256


@dataclass(frozen=True)
class Grid2D:
	"""Tensor grid x-nodes by y-nodes."""

	x: Grid1D
	y: Grid1D

	@classmethod
	def square(cls, a: float, b: float, n: int) -> "Grid2D":
		g = Grid1D(a, b, n)
		return cls(g, g)

	@property
	def shape(self) -> Tuple[int, int]:
		return self.x.n, self.y.n

	@property
	def hx(self) -> float:
		return self.x.h

	@property
	def hy(self) -> float:
		return self.y.h

	def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
		return np.meshgrid(self.x.nodes, self.y.nodes, indexing="ij")

	def to_dict(self) -> Dict:
		return {"x": self.x.to_dict(), "y": self.y.to_dict()}


def _kink_indices(n: int, kinks: Iterable[int]) -> Tuple[int, ...]:
	out = tuple(sorted({int(i) for i in kinks}))
	if out and (out[0] < 0 or out[-1] >= n):
		raise InvalidSample(f"Kink line indices must lie in [0, {n - 1}], got {list(out)}")
	return out


@dataclass(frozen=True, eq=False)
class Sampled2D:
	"""Continuous samples on a tensor grid, kinks allowed along x = x_i and y = y_j lines."""

	grid: Grid2D
	values: np.ndarray
	kinks_x: Tuple[int, ...] = ()
	kinks_y: Tuple[int, ...] = ()

	def __post_init__(self):
		values = np.array(self.values, dtype=float)
		if values.shape != self.grid.shape:
			raise InvalidSample(f"Expected values of shape {self.grid.shape}, got {values.shape}")
		if not np.all(np.isfinite(values)):
			raise InvalidSample("Sample values must be finite")
		values.setflags(write=False)
		object.__setattr__(self, "values", values)
		object.__setattr__(self, "kinks_x", _kink_indices(self.grid.x.n, self.kinks_x))
		object.__setattr__(self, "kinks_y", _kink_indices(self.grid.y.n, self.kinks_y))

	@classmethod
	def from_callable(cls, grid: Grid2D, fn, kinks_x_at=(), kinks_y_at=()) -> "Sampled2D":
		X, Y = grid.mesh()
		values = np.asarray(fn(X, Y), dtype=float) * np.ones(grid.shape)
		return cls(
			grid,
			values,
			tuple(grid.x.nearest(x) for x in kinks_x_at),
			tuple(grid.y.nearest(y) for y in kinks_y_at),
		)

	@cached_property
	def lip(self) -> float:
		sx = np.abs(np.diff(self.values, axis=0)) / self.grid.hx
		sy = np.abs(np.diff(self.values, axis=1)) / self.grid.hy
		return float(max(sx.max(initial=0.0), sy.max(initial=0.0)))

	@property
	def bound(self) -> float:
		return float(np.max(np.abs(self.values)))


def _clamp_axis(values: np.ndarray, slope: float, axis: int) -> np.ndarray:
	v = np.moveaxis(values, axis, 0)
	ramp = slope * np.arange(v.shape[0], dtype=float)[:, None]
	fwd = ramp + np.minimum.accumulate(v - ramp, axis=0)
	rev = (fwd + ramp)[::-1]
	bwd = np.minimum.accumulate(rev, axis=0)[::-1] - ramp
	return np.moveaxis(bwd, 0, axis)


def _sweep_diagonals(v: np.ndarray, cost: float) -> np.ndarray:
	v = v.copy()
	nx = v.shape[0]
	for i in range(1, nx):
		v[i, 1:] = np.minimum(v[i, 1:], v[i - 1, :-1] + cost)
		v[i, :-1] = np.minimum(v[i, :-1], v[i - 1, 1:] + cost)
	for i in range(nx - 2, -1, -1):
		v[i, 1:] = np.minimum(v[i, 1:], v[i + 1, :-1] + cost)
		v[i, :-1] = np.minimum(v[i, :-1], v[i + 1, 1:] + cost)
	return v


def _chamfer_lower(values: np.ndarray, k: float, hx: float, hy: float) -> Tuple[np.ndarray, int]:
	diag = k * math.hypot(hx, hy)
	v = np.array(values, dtype=float)
	rounds = 0
	for rounds in range(1, MAX_ROUNDS + 1):
		prev = v
		v = _clamp_axis(v, k * hx, 0)
		v = _clamp_axis(v, k * hy, 1)
		v = _sweep_diagonals(v, diag)
		if np.array_equal(v, prev):
			break
	return np.clip(v, float(values.min()), values), rounds


def lip_lower_envelope_2d(f: Sampled2D, k: float) -> Sampled2D:
	"""Lower cone envelope under the 8-neighbour chamfer length.

	On square cells the result lies between the Euclidean envelopes at k and
	CHAMFER_RATIO*k.
	"""
	k = _check_k(k)
	values, rounds = _chamfer_lower(f.values, k, f.grid.hx, f.grid.hy)
	logger.debug("plane envelope", extra={"features": {"k": k, "rounds": rounds, "side": "lower"}})
	return Sampled2D(f.grid, values)


def lip_upper_envelope_2d(f: Sampled2D, k: float) -> Sampled2D:
	k = _check_k(k)
	values, rounds = _chamfer_lower(-f.values, k, f.grid.hx, f.grid.hy)
	logger.debug("plane envelope", extra={"features": {"k": k, "rounds": rounds, "side": "upper"}})
	return Sampled2D(f.grid, -values)


def envelope_oracle_2d(f: Sampled2D, k: float, side: str = "lower") -> Sampled2D:
	"""Euclidean cone envelope by brute force. Test oracle only."""
	k = _check_k(k)
	if side not in ("lower", "upper"):
		raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
	X, Y = f.grid.mesh()
	pts = np.column_stack([X.ravel(), Y.ravel()])
	v = f.values.ravel()
	out = np.empty_like(v)
	for start in range(0, len(pts), _ORACLE_CHUNK):
		rows = pts[start:start + _ORACLE_CHUNK]
		cone = k * np.sqrt(np.sum((rows[:, None, :] - pts[None, :, :]) ** 2, axis=2))
		if side == "lower":
			out[start:start + len(rows)] = np.min(v[None, :] + cone, axis=1)
		else:
			out[start:start + len(rows)] = np.max(v[None, :] - cone, axis=1)
	return Sampled2D(f.grid, out.reshape(f.grid.shape))


def _one_sided(values: np.ndarray, h: float, axis: int) -> Tuple[np.ndarray, np.ndarray]:
	v = np.moveaxis(values, axis, 0)
	step = np.diff(v, axis=0) / h
	left = np.empty_like(v)
	right = np.empty_like(v)
	left[1:] = step
	left[0] = step[0]
	right[:-1] = step
	right[-1] = step[-1]
	return np.moveaxis(left, 0, axis), np.moveaxis(right, 0, axis)


def _detect_lines(left: np.ndarray, right: np.ndarray, threshold: float, axis: int) -> Tuple[int, ...]:
	jump = np.max(np.abs(right - left), axis=1 - axis)
	jump[0] = jump[-1] = 0.0
	return tuple(int(i) for i in np.flatnonzero(jump > threshold))


@dataclass(frozen=True, eq=False)
class GradientField2D:
	"""Central and one-sided partial derivatives with the kink lines they jump across."""

	grid: Grid2D
	gx: np.ndarray
	gy: np.ndarray
	left_x: np.ndarray
	right_x: np.ndarray
	left_y: np.ndarray
	right_y: np.ndarray
	kinks_x: Tuple[int, ...]
	kinks_y: Tuple[int, ...]


def clarke_gradient_2d(f: Sampled2D) -> GradientField2D:
	grid = f.grid
	h = min(grid.hx, grid.hy)
	threshold = kink_threshold(f.lip, h)
	left_x, right_x = _one_sided(f.values, grid.hx, 0)
	left_y, right_y = _one_sided(f.values, grid.hy, 1)
	kinks_x = tuple(sorted(set(f.kinks_x) | set(_detect_lines(left_x, right_x, threshold, 0))))
	kinks_y = tuple(sorted(set(f.kinks_y) | set(_detect_lines(left_y, right_y, threshold, 1))))
	edge = 2 if min(grid.shape) >= 3 else 1
	gx, gy = np.gradient(f.values, grid.hx, grid.hy, edge_order=edge)
	return GradientField2D(grid, gx, gy, left_x, right_x, left_y, right_y, kinks_x, kinks_y)


def gradient_value_2d(field: GradientField2D, point) -> ConvexValue:
	"""Hull of the quadrant gradients at `point` (a singleton off the kink lines)."""
	px, py = (float(c) for c in point)
	grid = field.grid
	ix, tx = grid.x.locate(px)
	iy, ty = grid.y.locate(py)
	i = ix + 1 if tx >= 0.5 else ix
	j = iy + 1 if ty >= 0.5 else iy
	on_x = tx == 0.0 and ix in field.kinks_x
	on_y = ty == 0.0 and iy in field.kinks_y
	xs = (field.left_x[i, j], field.right_x[i, j]) if on_x else (field.gx[i, j],)
	ys = (field.left_y[i, j], field.right_y[i, j]) if on_y else (field.gy[i, j],)
	return ConvexValue.hull([(a, b) for a in xs for b in ys])


def check_same_grid(f: Sampled2D, g: Sampled2D) -> None:
	if f.grid != g.grid:
		raise GridMismatch(f"Plane samples live on different grids: {f.grid} vs {g.grid}")


def sup_distance(f: Sampled2D, g: Sampled2D) -> float:
	check_same_grid(f, g)
	return float(np.max(np.abs(f.values - g.values)))

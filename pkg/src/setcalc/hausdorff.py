# Hausdorff distances between function graphs
#
# Graphs are polylines in R^2. Distances are point-to-segment, evaluated in
# row chunks so memory stays bounded on fine grids.

from __future__ import annotations

import numpy as np

from .classes import ClassPair, Grid1D, SampledFn
from .errors import GridMismatch, HasJumps

# Rows per chunk in the vectorized distance kernels
_CHUNK = 256


def _point_to_segments(points: np.ndarray, seg_a: np.ndarray, seg_b: np.ndarray) -> np.ndarray:
	"""Distance from every point to its nearest segment."""
	d = seg_b - seg_a
	len2 = np.einsum("ij,ij->i", d, d)
	len2 = np.where(len2 > 0.0, len2, 1.0)
	rel = points[:, None, :] - seg_a[None, :, :]
	t = np.einsum("psk,sk->ps", rel, d) / len2[None, :]
	np.clip(t, 0.0, 1.0, out=t)
	diff = rel - t[:, :, None] * d[None, :, :]
	return np.sqrt(np.min(np.einsum("psk,psk->ps", diff, diff), axis=1))


def _directed_polyline(p: np.ndarray, q: np.ndarray) -> float:
	if len(q) == 1:
		return float(np.max(np.linalg.norm(p - q[0], axis=1)))
	seg_a, seg_b = q[:-1], q[1:]
	best = 0.0
	for start in range(0, len(p), _CHUNK):
		chunk = p[start:start + _CHUNK]
		best = max(best, float(np.max(_point_to_segments(chunk, seg_a, seg_b))))
	return best


def polyline_hausdorff(p, q) -> float:
	"""Hausdorff distance between two polylines given as vertex arrays (k, 2).

	Vertices of each polyline are matched against the segments of the other.
	"""
	p = np.asarray(p, dtype=float)
	q = np.asarray(q, dtype=float)
	return max(_directed_polyline(p, q), _directed_polyline(q, p))


def point_set_hausdorff(p, q) -> float:
	"""Brute-force Hausdorff distance between finite point sets."""
	p = np.asarray(p, dtype=float)
	q = np.asarray(q, dtype=float)

	def directed(u, v):
		best = 0.0
		for start in range(0, len(u), _CHUNK):
			chunk = u[start:start + _CHUNK]
			d2 = np.sum((chunk[:, None, :] - v[None, :, :]) ** 2, axis=2)
			best = max(best, float(np.sqrt(np.max(np.min(d2, axis=1)))))
		return best

	return max(directed(p, q), directed(q, p))


def _directed_graph(x: np.ndarray, y: np.ndarray, qx: np.ndarray, qy: np.ndarray) -> float:
	# The vertical gap bounds the distance, so only segments within that
	# horizontal reach can hold the nearest point.
	reach = np.abs(y - np.interp(x, qx, qy))
	q = np.column_stack([qx, qy])
	last_seg = len(qx) - 2
	best = 0.0
	for start in range(0, len(x), _CHUNK):
		stop = min(start + _CHUNK, len(x))
		lo = float(np.min(x[start:stop] - reach[start:stop]))
		hi = float(np.max(x[start:stop] + reach[start:stop]))
		j0 = max(0, int(np.searchsorted(qx, lo, side="right")) - 1)
		j1 = min(last_seg, int(np.searchsorted(qx, hi, side="left")))
		j0 = min(j0, j1)
		pts = np.column_stack([x[start:stop], y[start:stop]])
		d = _point_to_segments(pts, q[j0:j1 + 1], q[j0 + 1:j1 + 2])
		best = max(best, float(np.max(d)))
	return best


def _check_graph_operands(phi: SampledFn, psi: SampledFn) -> None:
	if phi.jumps or psi.jumps:
		raise HasJumps("Graph distances are defined on continuous samples only")
	if phi.grid.a != psi.grid.a or phi.grid.b != psi.grid.b:
		raise GridMismatch(
			f"Graphs must share the closed interval: [{phi.grid.a}, {phi.grid.b}] vs [{psi.grid.a}, {psi.grid.b}]"
		)


def graph_hausdorff(phi: SampledFn, psi: SampledFn) -> float:
	"""Hausdorff distance between the graphs of two continuous samples."""
	_check_graph_operands(phi, psi)
	x1, y1 = phi.grid.nodes, phi.values
	x2, y2 = psi.grid.nodes, psi.values
	if phi.grid == psi.grid and np.array_equal(y1, y2):
		return 0.0
	return max(_directed_graph(x1, y1, x2, y2), _directed_graph(x2, y2, x1, y1))


def closed_graph(f) -> np.ndarray:
	"""Vertices of the closed graph of a class, vertical segments at jumps included."""
	if isinstance(f, SampledFn):
		rep = f
	else:
		rep = f.lower
	x = rep.grid.nodes
	if not rep.jumps:
		return np.column_stack([x, rep.values])
	left, right = rep.one_sided_limits()
	jumps = set(rep.jumps)
	pts = []
	for i in range(rep.grid.n):
		if i in jumps:
			pts.append((x[i], left[i]))
			pts.append((x[i], right[i]))
		else:
			pts.append((x[i], rep.values[i]))
	return np.array(pts, dtype=float)


def closed_graph_hausdorff(f, g) -> float:
	return polyline_hausdorff(closed_graph(f), closed_graph(g))


def resample(f: SampledFn, n: int) -> SampledFn:
	"""Linear resampling of a continuous sample onto n nodes of the same interval."""
	if f.jumps:
		raise HasJumps("Only continuous samples can be resampled")
	grid = Grid1D(f.grid.a, f.grid.b, n)
	values = np.interp(grid.nodes, f.grid.nodes, f.values)
	return SampledFn(grid, values, (), f.lip, f.bound)

# Space metrics s and r for scalar and vector classes, and convergence checks

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .classes import (
	ClassPair,
	SampledFn,
	VectorClass,
	canonical_pair,
	class_of,
	value_at_vec,
)
from .envelope import check_schedule, default_schedule, lip_lower_envelope, lip_upper_envelope
from .errors import DimensionMismatch, GridMismatch, HypothesisViolated, InvalidSchedule
from .hausdorff import closed_graph_hausdorff, graph_hausdorff

logger = logging.getLogger(__name__)

KINDS = ("s", "r")

# A truncation bound is tight below this share of the value or below the floor
TRUNCATION_SHARE = 0.1
TRUNCATION_FLOOR = 1e-6


@dataclass(frozen=True)
class MetricReport:
	"""Result of a metric evaluation along a k-schedule."""

	kind: str
	value: float
	per_k: Tuple[Tuple[float, float, float], ...]
	truncation_bound: float
	directions: Optional[Tuple[Tuple[float, ...], ...]] = None
	tolerances: Dict[str, float] = field(default_factory=dict)

	def to_dict(self) -> Dict:
		out = {
			"kind": self.kind,
			"value": self.value,
			"per_k": [{"k": k, "lower": lo, "upper": up} for k, lo, up in self.per_k],
			"truncation_bound": self.truncation_bound,
			"directions": [list(d) for d in self.directions] if self.directions is not None else None,
		}
		if self.tolerances:
			out["tolerances"] = dict(self.tolerances)
		return out


def _trapezoid_abs(phi: SampledFn, psi: SampledFn) -> float:
	if phi.grid == psi.grid:
		return float(np.trapezoid(np.abs(phi.values - psi.values), dx=phi.grid.h))
	xs = np.union1d(phi.grid.nodes, psi.grid.nodes)
	diff = np.abs(np.interp(xs, phi.grid.nodes, phi.values) - np.interp(xs, psi.grid.nodes, psi.values))
	return float(np.trapezoid(diff, xs))


def delta_metric(phi: SampledFn, psi: SampledFn) -> float:
	"""Graph distance plus the integral of |phi - psi|."""
	return graph_hausdorff(phi, psi) + _trapezoid_abs(phi, psi)


def _term(kind: str):
	return graph_hausdorff if kind == "s" else delta_metric


def _band(kind: str, lo: SampledFn, up: SampledFn) -> float:
	# distance budget of anything sandwiched between lo and up
	gap = graph_hausdorff(lo, up)
	if kind == "r":
		gap += float(np.trapezoid(up.values - lo.values, dx=lo.grid.h))
	return gap


def saturation_modulus(f: ClassPair) -> float:
	"""Smallest k from which the k-envelopes of f on its grid stop changing.

	Once k*h covers the oscillation of f, no node can be undercut through
	another, so both envelopes equal the representatives.
	"""
	f = class_of(f)
	osc = float(np.max(f.upper.values) - np.min(f.lower.values))
	return osc / f.grid.h


def truncation_ok(value: float, bound: float) -> bool:
	return bound < TRUNCATION_SHARE * value or bound < TRUNCATION_FLOOR


def _envelope_terms(kind: str, f: ClassPair, g: ClassPair, k: float):
	term = _term(kind)
	fl, gl = lip_lower_envelope(f.lower, k), lip_lower_envelope(g.lower, k)
	fu, gu = lip_upper_envelope(f.upper, k), lip_upper_envelope(g.upper, k)
	return (k, term(fl, gl), term(fu, gu)), (fl, fu, gl, gu)


def _tail_bound(kind: str, per_k, last, value: float, saturated: bool) -> float:
	if saturated:
		# every larger k repeats the last row
		return 0.0
	fl, fu, gl, gu = last
	# beyond k_max the envelopes stay inside the [f_K^-, f_K^+] bands
	tail = max(per_k[-1][1], per_k[-1][2]) + _band(kind, fl, fu) + _band(kind, gl, gu)
	return max(0.0, tail - value)


def class_distance(
	kind: str,
	f: ClassPair,
	g: ClassPair,
	ks: Optional[Sequence[float]] = None,
	extend: bool = True,
) -> MetricReport:
	"""Sup over the schedule of the envelope distances (s with h, r with delta).

	With `extend`, a schedule whose truncation bound is not below 10% of the
	value (or 1e-6) is doubled until it is, or until the envelopes saturate.
	"""
	if kind not in KINDS:
		raise InvalidSchedule(f"Unknown metric kind {kind!r}, expected one of {KINDS}")
	f = class_of(f)
	g = class_of(g)
	if f.grid != g.grid:
		raise GridMismatch(f"Classes live on different grids: {f.grid} vs {g.grid}")
	ks = list(check_schedule(ks if ks is not None else default_schedule()))
	k_sat = max(saturation_modulus(f), saturation_modulus(g))
	per_k = []
	last = None
	for k in ks:
		row, last = _envelope_terms(kind, f, g, k)
		per_k.append(row)
	value = max(max(lo, up) for _, lo, up in per_k)
	bound = _tail_bound(kind, per_k, last, value, ks[-1] >= k_sat)
	requested = len(ks)
	while extend and not truncation_ok(value, bound):
		ks.append(2.0 * ks[-1])
		row, last = _envelope_terms(kind, f, g, ks[-1])
		per_k.append(row)
		value = max(value, row[1], row[2])
		bound = _tail_bound(kind, per_k, last, value, ks[-1] >= k_sat)
	if len(ks) > requested:
		logger.info(
			"schedule extended",
			extra={"features": {"kind": kind, "requested_k_max": ks[requested - 1], "k_max": ks[-1]}},
		)
	logger.debug(
		"class distance",
		extra={"features": {"kind": kind, "value": value, "truncation_bound": bound, "k_max": ks[-1]}},
	)
	return MetricReport(
		kind=kind,
		value=value,
		per_k=tuple(per_k),
		truncation_bound=bound,
		tolerances={"tol_rep": max(f.tol_rep, g.tol_rep)},
	)


def s_metric(f: ClassPair, g: ClassPair, ks: Optional[Sequence[float]] = None) -> MetricReport:
	return class_distance("s", f, g, ks)


def r_metric(f: ClassPair, g: ClassPair, ks: Optional[Sequence[float]] = None) -> MetricReport:
	return class_distance("r", f, g, ks)


def default_directions(m: int, count: int = 64, seed: int = 0) -> Tuple[Tuple[float, ...], ...]:
	"""{+1, -1} for m = 1, `count` uniform angles for m = 2, a seeded unit sample beyond."""
	if m < 1:
		raise DimensionMismatch(f"Dimension must be at least 1, got {m}")
	if m == 1:
		return ((1.0,), (-1.0,))
	if count < 1:
		raise InvalidSchedule(f"Direction count must be positive, got {count}")
	if m == 2:
		angles = 2.0 * math.pi * np.arange(count) / count
		return tuple((float(math.cos(t)), float(math.sin(t))) for t in angles)
	rng = np.random.default_rng(seed)
	sample = rng.normal(size=(count, m))
	sample /= np.linalg.norm(sample, axis=1, keepdims=True)
	return tuple(tuple(float(c) for c in row) for row in sample)


def _check_directions(dirs, m: int) -> Tuple[Tuple[float, ...], ...]:
	out = []
	for d in dirs:
		d = np.asarray(d, dtype=float).reshape(-1)
		if d.shape[0] != m:
			raise DimensionMismatch(f"Direction {d.tolist()} does not have dimension {m}")
		norm = float(np.linalg.norm(d))
		if abs(norm - 1.0) > 1e-9:
			raise InvalidSchedule(f"Direction {d.tolist()} is not a unit vector (norm {norm})")
		out.append(tuple(float(c) for c in d))
	if not out:
		raise InvalidSchedule("Direction sample is empty")
	return tuple(out)


def vector_distance(
	kind: str,
	F: VectorClass,
	G: VectorClass,
	ks: Optional[Sequence[float]] = None,
	dirs=None,
) -> MetricReport:
	if F.grid != G.grid:
		raise GridMismatch(f"Vector classes live on different grids: {F.grid} vs {G.grid}")
	if F.m != G.m:
		raise DimensionMismatch(f"Vector classes differ in dimension: {F.m} vs {G.m}")
	dirs = _check_directions(dirs if dirs is not None else default_directions(F.m), F.m)
	ks = check_schedule(ks if ks is not None else default_schedule())
	pairs = [(F.dot(xi), G.dot(xi)) for xi in dirs]
	k_sat = max(max(saturation_modulus(a), saturation_modulus(b)) for a, b in pairs)
	while True:
		# one schedule for every direction keeps the per-k rows aligned
		reports = [class_distance(kind, a, b, ks, extend=False) for a, b in pairs]
		tight = all(truncation_ok(rep.value, rep.truncation_bound) for rep in reports)
		if tight or ks[-1] >= k_sat:
			break
		ks = ks + (2.0 * ks[-1],)
	per_k = tuple(
		(rows[0][0], max(r[1] for r in rows), max(r[2] for r in rows))
		for rows in zip(*(rep.per_k for rep in reports))
	)
	return MetricReport(
		kind=kind,
		value=max(rep.value for rep in reports),
		per_k=per_k,
		truncation_bound=max(rep.truncation_bound for rep in reports),
		directions=dirs,
		tolerances=dict(reports[0].tolerances),
	)


def s_metric_vec(F: VectorClass, G: VectorClass, ks=None, dirs=None) -> MetricReport:
	return vector_distance("s", F, G, ks, dirs)


def r_metric_vec(F: VectorClass, G: VectorClass, ks=None, dirs=None) -> MetricReport:
	return vector_distance("r", F, G, ks, dirs)


def tends_to_zero(seq: Sequence[float], tol: float) -> bool:
	"""Final term within tol and the second half of the sequence non-increasing within tol."""
	seq = [float(s) for s in seq]
	if not seq:
		return False
	if seq[-1] > tol:
		return False
	tail = seq[len(seq) // 2:]
	return all(b <= a + tol for a, b in zip(tail, tail[1:]))


def limit_tolerance(pairs: Sequence[ClassPair]) -> float:
	"""Default tolerance for sequence limits on a grid: 10*h*(1 + M)."""
	h = pairs[0].grid.h
	bound = max(p.bound for p in pairs)
	return 10.0 * h * (1.0 + bound)


def _as_vector(F) -> VectorClass:
	if isinstance(F, VectorClass):
		return F
	return VectorClass.of(class_of(F))


def _as_point(p) -> np.ndarray:
	return np.atleast_1d(np.asarray(p, dtype=float))


def check_graph_limit(
	F_seq,
	F,
	x_seq: Sequence[float],
	x: float,
	eta_seq,
	eta,
	kind: str = "s",
	ks: Optional[Sequence[float]] = None,
	tol: Optional[float] = None,
) -> bool:
	"""Check that eta lies in F(x) given F_n -> F, x_n -> x, eta_n -> eta, eta_n in F_n(x_n).

	Raises HypothesisViolated when a premise fails, so vacuous passes are
	never reported as true.
	"""
	F_seq = [_as_vector(G) for G in F_seq]
	F = _as_vector(F)
	if not (len(F_seq) == len(x_seq) == len(eta_seq)) or not F_seq:
		raise HypothesisViolated("Sequences must be nonempty and of equal length")
	if tol is None:
		tol = limit_tolerance([c for G in F_seq + [F] for c in G.components])
	dists = [vector_distance(kind, G, F, ks).value for G in F_seq]
	if not tends_to_zero(dists, tol):
		raise HypothesisViolated(f"F_n does not converge to F in {kind}: distances {dists}")
	if not tends_to_zero([abs(float(xn) - float(x)) for xn in x_seq], tol):
		raise HypothesisViolated("x_n does not converge to x")
	eta = _as_point(eta)
	if not tends_to_zero([float(np.linalg.norm(_as_point(e) - eta)) for e in eta_seq], tol):
		raise HypothesisViolated("eta_n does not converge to eta")
	for n, (G, xn, en) in enumerate(zip(F_seq, x_seq, eta_seq)):
		if not value_at_vec(G, xn).contains(_as_point(en), tol):
			raise HypothesisViolated(f"eta_{n} is not in F_{n}(x_{n})")
	tol_rep = max(c.tol_rep for c in F.components)
	return value_at_vec(F, x).contains(eta, max(tol_rep, tol))


def check_statement_4_1(
	f: ClassPair,
	fn_seq: Sequence[SampledFn],
	ks: Optional[Sequence[float]] = None,
	tol: Optional[float] = None,
) -> bool:
	"""Graph convergence of continuous f_n to the closed graph of f implies s-convergence."""
	f = class_of(f)
	if not fn_seq:
		raise HypothesisViolated("The sequence is empty")
	for fn in fn_seq:
		if fn.jumps:
			raise HypothesisViolated("Sequence members must be continuous samples")
	pairs = [canonical_pair(fn) for fn in fn_seq]
	if tol is None:
		tol = limit_tolerance(pairs + [f])
	graph_gaps = [closed_graph_hausdorff(p, f) for p in pairs]
	if not tends_to_zero(graph_gaps, tol):
		raise HypothesisViolated(f"Graphs of f_n do not converge to the closed graph of f: {graph_gaps}")
	dists = [s_metric(p, f, ks).value for p in pairs]
	logger.debug("graph convergence check", extra={"features": {"final_graph_gap": graph_gaps[-1], "final_s": dists[-1]}})
	return tends_to_zero(dists, tol)

# Completion of metric lattice towers by pairs of projection sequences
#
# A tower is a nested family of levels C_1 within C_2 within ... inside one
# lattice, with projections onto each level from below and above. An element
# of the completion is the pair of projection sequences, truncated at a finite
# depth and carried with its gap record so that distances beyond the depth
# stay certified.

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .classes import ClassPair, Grid1D, SampledFn, class_of, measure_lip
from .envelope import lip_lower_envelope, lip_upper_envelope
from .errors import DepthMismatch, NotCauchy, NotInTower, PrecisionUnreachable
from .hausdorff import graph_hausdorff

logger = logging.getLogger(__name__)

DEFAULT_DEPTH = 12


class LatticeTower(ABC):
	"""Nested levels of a metric lattice with projections onto each level.

	Levels are numbered from 1. Implementations must be free of side effects.
	"""

	@abstractmethod
	def modulus(self, n: int) -> float:
		"""Parameter of level n (its Lipschitz modulus for function towers)."""

	@property
	def depth(self) -> Optional[int]:
		"""Number of levels, None when unbounded."""
		return None

	@abstractmethod
	def leq(self, a, b) -> bool:
		...

	@abstractmethod
	def rho(self, a, b) -> float:
		...

	@abstractmethod
	def level_of(self, f) -> Optional[int]:
		"""Smallest level holding f, None when no level does."""

	@abstractmethod
	def project_down(self, f, n: int):
		...

	@abstractmethod
	def project_up(self, f, n: int):
		...

	@abstractmethod
	def between(self, a, b):
		"""An element c with a <= c <= b, distinct from both when a < b."""

	@property
	def tolerance(self) -> float:
		return 1e-9

	def projection_bound(self, a, b) -> float:
		"""Declared bound on rho between the projections of a and b at any level."""
		return float("inf")

	def moduli(self, depth: int) -> Tuple[float, ...]:
		return tuple(self.modulus(n) for n in range(1, depth + 1))

	def resolve_depth(self, depth: Optional[int]) -> int:
		if depth is None:
			depth = self.depth if self.depth is not None else DEFAULT_DEPTH
		if self.depth is not None and depth > self.depth:
			raise DepthMismatch(f"The tower has {self.depth} levels, depth {depth} requested")
		if depth < 1:
			raise DepthMismatch(f"Depth must be at least 1, got {depth}")
		return depth


class LipschitzTower(LatticeTower):
	"""Continuous samples on one grid; level n holds the k_n-Lipschitz ones.

	k_n = base**(n-1) unless explicit moduli are given. Distances are graph
	Hausdorff distances and the projections are the Lipschitz envelopes.
	"""

	def __init__(self, grid: Grid1D, base: float = 2.0, moduli: Optional[Sequence[float]] = None):
		self.grid = grid
		self.base = float(base)
		self._moduli = tuple(float(k) for k in moduli) if moduli is not None else None
		if self._moduli is not None:
			if not self._moduli or any(b <= a for a, b in zip(self._moduli, self._moduli[1:])):
				raise DepthMismatch(f"Tower moduli must be a nonempty increasing list, got {moduli}")
		elif self.base <= 1.0:
			raise DepthMismatch(f"Tower base must exceed 1, got {base}")

	def __repr__(self):
		return f"{type(self).__name__}(grid={self.grid}, base={self.base:g}, moduli={self._moduli})"

	@property
	def depth(self) -> Optional[int]:
		return len(self._moduli) if self._moduli is not None else None

	@property
	def tolerance(self) -> float:
		return 10.0 * self.grid.h

	def modulus(self, n: int) -> float:
		if self._moduli is not None:
			if not 1 <= n <= len(self._moduli):
				raise DepthMismatch(f"Level {n} is outside 1..{len(self._moduli)}")
			return self._moduli[n - 1]
		return self.base ** (n - 1)

	def _check(self, f: SampledFn) -> SampledFn:
		if isinstance(f, ClassPair):
			f = f.lower
		if f.grid != self.grid:
			raise NotInTower(f"Element lives on {f.grid}, the tower on {self.grid}")
		return f

	def leq(self, a: SampledFn, b: SampledFn) -> bool:
		a, b = self._check(a), self._check(b)
		return bool(np.all(a.values <= b.values + 1e-12))

	def rho(self, a: SampledFn, b: SampledFn) -> float:
		return graph_hausdorff(self._check(a), self._check(b))

	def level_of(self, f: SampledFn) -> Optional[int]:
		f = self._check(f)
		if f.jumps:
			return None
		lip = measure_lip(self.grid, f.values)
		slack = 1e-9 * (1.0 + lip)
		n = 1
		while True:
			if self._moduli is not None and n > len(self._moduli):
				return None
			if self.modulus(n) >= lip - slack:
				return n
			n += 1

	def project_down(self, f: SampledFn, n: int) -> SampledFn:
		return lip_lower_envelope(self._check(f), self.modulus(n))

	def project_up(self, f: SampledFn, n: int) -> SampledFn:
		return lip_upper_envelope(self._check(f), self.modulus(n))

	def between(self, a: SampledFn, b: SampledFn) -> SampledFn:
		a, b = self._check(a), self._check(b)
		return SampledFn.from_values(self.grid, 0.5 * (a.values + b.values))

	def projection_bound(self, a: SampledFn, b: SampledFn) -> float:
		# envelopes are nonexpansive in the sup norm, which dominates rho
		a, b = self._check(a), self._check(b)
		return float(np.max(np.abs(a.values - b.values)))


class DiscreteTower(LipschitzTower):
	"""The Lipschitz levels under the discrete metric.

	Bounded monotone chains never settle in this metric, so it is the
	standard counterexample for the Cauchy condition.
	"""

	def rho(self, a: SampledFn, b: SampledFn) -> float:
		a, b = self._check(a), self._check(b)
		return 0.0 if np.max(np.abs(a.values - b.values)) <= 1e-12 else 1.0

	def projection_bound(self, a: SampledFn, b: SampledFn) -> float:
		return self.rho(a, b)


@dataclass(frozen=True, eq=False)
class TowerElement:
	"""Projection pairs of one element for levels 1..depth."""

	depth: int
	lowers: Tuple[SampledFn, ...]
	uppers: Tuple[SampledFn, ...]
	gap: float
	tail: Tuple[float, ...]
	moduli: Tuple[float, ...]

	def level(self, n: int) -> Tuple[SampledFn, SampledFn]:
		return self.lowers[n - 1], self.uppers[n - 1]

	def truncate(self, depth: int) -> "TowerElement":
		if depth >= self.depth:
			return self
		return TowerElement(
			depth,
			self.lowers[:depth],
			self.uppers[:depth],
			self.tail[depth - 1],
			self.tail[:depth],
			self.moduli[:depth],
		)


def _element(tower: LatticeTower, lowers, uppers) -> TowerElement:
	depth = len(lowers)
	tail = tuple(tower.rho(lo, up) for lo, up in zip(lowers, uppers))
	return TowerElement(depth, tuple(lowers), tuple(uppers), tail[-1], tail, tower.moduli(depth))


def embed(tower: LatticeTower, f: SampledFn, depth: Optional[int] = None) -> TowerElement:
	"""Image of a base element: its projections, then f itself from its own level on."""
	depth = tower.resolve_depth(depth)
	level = tower.level_of(f)
	if level is None or level > depth:
		raise NotInTower(f"Element is in no level up to depth {depth} (level {level})")
	if isinstance(f, ClassPair):
		f = f.lower
	lowers, uppers = [], []
	for n in range(1, depth + 1):
		if n >= level:
			lowers.append(f)
			uppers.append(f)
		else:
			lowers.append(tower.project_down(f, n))
			uppers.append(tower.project_up(f, n))
	return _element(tower, lowers, uppers)


def from_class(tower: LipschitzTower, pair: ClassPair, depth: Optional[int] = None) -> TowerElement:
	"""Image of a class: envelopes of its lower and upper representatives."""
	pair = class_of(pair)
	depth = tower.resolve_depth(depth)
	lowers = [tower.project_down(pair.lower, n) for n in range(1, depth + 1)]
	uppers = [tower.project_up(pair.upper, n) for n in range(1, depth + 1)]
	return _element(tower, lowers, uppers)


def check_compatible(tower: LatticeTower, x: TowerElement, tol: Optional[float] = None) -> bool:
	"""Projections of deeper levels reproduce shallower ones, and the gap record is non-increasing."""
	if tol is None:
		tol = tower.tolerance
	for j in range(1, x.depth + 1):
		lo_j, up_j = x.level(j)
		for n in range(1, j):
			lo_n, up_n = x.level(n)
			if np.max(np.abs(tower.project_down(lo_j, n).values - lo_n.values)) > tol:
				return False
			if np.max(np.abs(tower.project_up(up_j, n).values - up_n.values)) > tol:
				return False
	return all(b <= a + tol for a, b in zip(x.tail, x.tail[1:]))


def _common_depth(x: TowerElement, y: TowerElement) -> int:
	depth = min(x.depth, y.depth)
	if x.moduli[:depth] != y.moduli[:depth]:
		raise DepthMismatch("Elements were built on different level moduli")
	return depth


def rho_tilde(tower: LatticeTower, x: TowerElement, y: TowerElement) -> float:
	"""Sup over the shared levels of the lower and upper distances."""
	depth = _common_depth(x, y)
	return max(
		max(tower.rho(x.lowers[n], y.lowers[n]), tower.rho(x.uppers[n], y.uppers[n]))
		for n in range(depth)
	)


def rho_tilde_tail(tower: LatticeTower, x: TowerElement, y: TowerElement) -> float:
	"""Bound on how much levels beyond the shared depth can add to rho_tilde.

	Deeper pairs stay inside the last pair of each element, so any deeper
	distance is at most the last distance plus both last gaps.
	"""
	depth = _common_depth(x, y)
	value = rho_tilde(tower, x, y)
	last = max(
		tower.rho(x.lowers[depth - 1], y.lowers[depth - 1]),
		tower.rho(x.uppers[depth - 1], y.uppers[depth - 1]),
	)
	return max(0.0, last + x.tail[depth - 1] + y.tail[depth - 1] - value)


def cauchy_limit(tower: LatticeTower, seq: Sequence[TowerElement], tol: Optional[float] = None) -> TowerElement:
	"""Limit of a rho_tilde-Cauchy sequence at working precision.

	The second half of the sequence must be pairwise within tol; the last
	term is then the limit up to tol, and it must itself be compatible.
	"""
	if not seq:
		raise NotCauchy("The sequence is empty")
	if tol is None:
		tol = tower.tolerance
	depth = min(x.depth for x in seq)
	tail = [x.truncate(depth) for x in seq[len(seq) // 2:]]
	worst = 0.0
	for a, b in combinations(tail, 2):
		worst = max(worst, rho_tilde(tower, a, b))
	if worst > tol:
		raise NotCauchy(f"Terms of the second half are {worst} apart, above tol={tol}")
	limit = tail[-1]
	if not check_compatible(tower, limit, tol):
		raise NotCauchy("The limit term is not compatible across its levels")
	logger.debug("cauchy limit", extra={"features": {"terms": len(seq), "spread": worst, "depth": depth}})
	return limit


def density_approx(tower: LatticeTower, x: TowerElement, eps: float):
	"""A base element whose image is within eps of x, searched from the shallowest level."""
	if not eps > 0:
		raise PrecisionUnreachable(f"eps must be positive, got {eps}")
	for n in range(1, x.depth + 1):
		candidate = x.lowers[n - 1]
		image = embed(tower, candidate, x.depth)
		dist = rho_tilde(tower, image, x) + rho_tilde_tail(tower, image, x)
		if dist < eps:
			logger.debug("density approximation", extra={"features": {"level": n, "distance": dist}})
			return candidate
	raise PrecisionUnreachable(f"No level up to depth {x.depth} comes within eps={eps}")


@dataclass
class TowerCheck:
	name: str
	passed: bool
	measured: float
	tolerance: float
	detail: str = ""

	def to_dict(self) -> Dict:
		return {
			"name": self.name,
			"passed": self.passed,
			"measured": _json_float(self.measured),
			"tolerance": _json_float(self.tolerance),
			"detail": self.detail,
		}


def _json_float(value: float) -> Optional[float]:
	# unbounded tolerances and undefined measurements print as null
	value = float(value)
	return value if np.isfinite(value) else None


@dataclass
class TowerReport:
	checks: List[TowerCheck] = field(default_factory=list)
	projection_moduli: Dict[int, float] = field(default_factory=dict)

	@property
	def passed(self) -> bool:
		return all(c.passed for c in self.checks)

	def failures(self) -> List[TowerCheck]:
		return [c for c in self.checks if not c.passed]

	def to_dict(self) -> Dict:
		return {
			"passed": self.passed,
			"checks": [c.to_dict() for c in self.checks],
			"projection_moduli": {str(k): v for k, v in self.projection_moduli.items()},
		}


def _ordered_pairs(tower: LatticeTower, samples) -> List[Tuple[object, object]]:
	out = []
	for a, b in combinations(samples, 2):
		if tower.leq(a, b) and tower.rho(a, b) > 0:
			out.append((a, b))
		elif tower.leq(b, a) and tower.rho(a, b) > 0:
			out.append((b, a))
	return out


def verify_tower(
	tower: LatticeTower,
	samples: Sequence,
	chains: Sequence[Sequence] = (),
	depth: Optional[int] = None,
) -> TowerReport:
	"""Check betweenness, metric monotonicity, the Cauchy property of chains
	and estimate projection moduli on the supplied samples, checking each
	projected distance against the bound the tower declares."""
	tol = tower.tolerance
	depth = tower.resolve_depth(depth)
	report = TowerReport()
	ordered = _ordered_pairs(tower, samples)

	worst_between = 0.0
	worst_monotone = 0.0
	for a, b in ordered:
		c = tower.between(a, b)
		dab = tower.rho(a, b)
		inside = tower.leq(a, c) and tower.leq(c, b) and tower.level_of(c) is not None
		strict = tower.rho(a, c) > 0 and tower.rho(c, b) > 0
		if not (inside and strict):
			worst_between = max(worst_between, 1.0)
		worst_monotone = max(worst_monotone, tower.rho(a, c) - dab, tower.rho(c, b) - dab)
	report.checks.append(TowerCheck(
		"betweenness", worst_between == 0.0, worst_between, 0.0,
		f"{len(ordered)} ordered sample pairs",
	))
	report.checks.append(TowerCheck(
		"metric monotonicity", worst_monotone <= tol, max(worst_monotone, 0.0), tol,
	))

	for idx, chain in enumerate(chains):
		chain = list(chain)
		up = all(tower.leq(a, b) for a, b in zip(chain, chain[1:]))
		down = all(tower.leq(b, a) for a, b in zip(chain, chain[1:]))
		if not (up or down):
			report.checks.append(TowerCheck(f"cauchy chain {idx}", False, float("nan"), tol, "chain is not monotone"))
			continue
		to_last = [tower.rho(c, chain[-1]) for c in chain[:-1]]
		tail = to_last[len(to_last) // 2:]
		spread = max(tail) if tail else 0.0
		settles = bool(tail) and tail[-1] <= tol and all(b <= a + tol for a, b in zip(tail, tail[1:]))
		report.checks.append(TowerCheck(f"cauchy chain {idx}", settles or not tail, spread, tol))

	worst_excess = 0.0
	violations = []
	for n in range(1, depth + 1):
		ratio = 0.0
		for a, b in combinations(samples, 2):
			dab = tower.rho(a, b)
			if dab <= 0:
				continue
			moved = max(
				tower.rho(tower.project_down(a, n), tower.project_down(b, n)),
				tower.rho(tower.project_up(a, n), tower.project_up(b, n)),
			)
			ratio = max(ratio, moved / dab)
			excess = moved - tower.projection_bound(a, b)
			if excess > tol and n not in violations:
				violations.append(n)
			worst_excess = max(worst_excess, excess)
		report.projection_moduli[n] = ratio
	report.checks.append(TowerCheck(
		"projection continuity",
		not violations,
		worst_excess,
		tol,
		f"levels over the declared bound: {violations}" if violations else "",
	))
	logger.info(
		"tower verified",
		extra={"features": {"tower": repr(tower), "passed": report.passed, "checks": len(report.checks)}},
	)
	return report

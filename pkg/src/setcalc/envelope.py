# Lipschitz envelope projections f_k^- and f_k^+
#
# The lower envelope is the inf-convolution x -> min_y f(y) + k|x - y| on the
# grid. The two-pass slope clamp is written with cumulative minima so each
# pass is a single vectorized scan.

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .classes import ClassPair, SampledFn
from .errors import InvalidSchedule, NonpositiveK
from .hausdorff import graph_hausdorff

logger = logging.getLogger(__name__)

# Rows per chunk for the quadratic oracle
_ORACLE_CHUNK = 512


def _check_k(k: float) -> float:
	k = float(k)
	if not (math.isfinite(k) and k > 0.0):
		raise NonpositiveK(f"Lipschitz modulus must be a positive real, got {k}")
	return k


def _clamp_lower(values: np.ndarray, slope: float) -> np.ndarray:
	# forward: v_i <- min_{j<=i} v_j + slope*(i-j); backward symmetric
	ramp = slope * np.arange(values.shape[0], dtype=float)
	fwd = ramp + np.minimum.accumulate(values - ramp)
	rev = (fwd + ramp)[::-1]
	bwd = np.minimum.accumulate(rev)[::-1] - ramp
	# the envelope lies in [min f, f]; clip the rounding of the ramp offsets
	return np.clip(bwd, float(values.min()), values)


def lip_lower_envelope(f: SampledFn, k: float) -> SampledFn:
	"""Greatest k-Lipschitz minorant of f on the grid."""
	k = _check_k(k)
	values = _clamp_lower(np.asarray(f.values, dtype=float), k * f.grid.h)
	return SampledFn(f.grid, values, (), k, f.bound)


def lip_upper_envelope(f: SampledFn, k: float) -> SampledFn:
	"""Least k-Lipschitz majorant of f on the grid."""
	k = _check_k(k)
	values = -_clamp_lower(-np.asarray(f.values, dtype=float), k * f.grid.h)
	return SampledFn(f.grid, values, (), k, f.bound)


def envelope_oracle(f: SampledFn, k: float, side: str = "lower") -> SampledFn:
	"""Direct O(n^2) evaluation of the envelope. Test oracle only."""
	k = _check_k(k)
	if side not in ("lower", "upper"):
		raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
	x = f.grid.nodes
	v = np.asarray(f.values, dtype=float)
	out = np.empty_like(v)
	for start in range(0, len(x), _ORACLE_CHUNK):
		rows = x[start:start + _ORACLE_CHUNK]
		cone = k * np.abs(rows[:, None] - x[None, :])
		if side == "lower":
			out[start:start + len(rows)] = np.min(v[None, :] + cone, axis=1)
		else:
			out[start:start + len(rows)] = np.max(v[None, :] - cone, axis=1)
	return SampledFn(f.grid, out, (), k, f.bound)


def default_schedule(max_exp: int = 10) -> Tuple[float, ...]:
	"""Geometric k-schedule 1, 2, 4, ..., 2**max_exp."""
	return tuple(float(2 ** i) for i in range(max_exp + 1))


def geometric_schedule(k0: float, ratio: float, count: int) -> Tuple[float, ...]:
	if count < 1 or k0 <= 0 or ratio <= 1:
		raise InvalidSchedule(f"Geometric schedule needs k0 > 0, ratio > 1, count >= 1 (got {k0}, {ratio}, {count})")
	return tuple(float(k0 * ratio ** i) for i in range(count))


def check_schedule(ks: Iterable[float]) -> Tuple[float, ...]:
	ks = tuple(float(k) for k in ks)
	if not ks:
		raise InvalidSchedule("k-schedule is empty")
	for k in ks:
		if not (math.isfinite(k) and k > 0.0):
			raise InvalidSchedule(f"k-schedule entries must be positive reals, got {k}")
	if any(b <= a for a, b in zip(ks, ks[1:])):
		raise InvalidSchedule(f"k-schedule must be strictly increasing, got {list(ks)}")
	return ks


@dataclass(frozen=True, eq=False)
class EnvelopeFamily:
	"""Lower/upper envelopes of one class along a k-schedule, with their graph gaps."""

	source: ClassPair
	ks: Tuple[float, ...]
	lowers: Tuple[SampledFn, ...]
	uppers: Tuple[SampledFn, ...]
	gaps: Tuple[float, ...]

	def at(self, k: float) -> Tuple[SampledFn, SampledFn]:
		j = self.ks.index(float(k))
		return self.lowers[j], self.uppers[j]

	@property
	def last_gap(self) -> float:
		return self.gaps[-1]

	def to_dict(self) -> Dict:
		return {
			"grid": self.source.grid.to_dict(),
			"ks": list(self.ks),
			"lowers": [f.values.tolist() for f in self.lowers],
			"uppers": [f.values.tolist() for f in self.uppers],
			"gaps": list(self.gaps),
		}


def envelope_family(f: ClassPair, ks: Sequence[float]) -> EnvelopeFamily:
	ks = check_schedule(ks)
	lowers: List[SampledFn] = []
	uppers: List[SampledFn] = []
	gaps: List[float] = []
	for k in ks:
		lo = lip_lower_envelope(f.lower, k)
		up = lip_upper_envelope(f.upper, k)
		lowers.append(lo)
		uppers.append(up)
		gaps.append(graph_hausdorff(lo, up))
	logger.debug(
		"envelope family built",
		extra={"features": {"k_max": ks[-1], "stages": len(ks), "last_gap": gaps[-1]}},
	)
	return EnvelopeFamily(f, ks, tuple(lowers), tuple(uppers), tuple(gaps))

# Configuration loading for setcalc

import math
import os
import re
from dataclasses import dataclass, fields, replace
from typing import Optional, Tuple

from .classes import Grid1D
from .envelope import default_schedule
from .errors import BadConfig, InvalidGrid
from .gradient import SMOOTHING_KINDS, SmoothingSchedule

# Lazy load dotenv - only when config is first accessed
_dotenv_loaded = False
_custom_dotenv_path = None

# All recognized setcalc configuration keys
_SETCALC_CONFIG_KEYS = (
	# Domain grid "a,b,n"
	"SETCALC_GRID",
	# k-schedule: comma list or "geom:<max_exp>"
	"SETCALC_KS",
	# Direction count for vector metrics
	"SETCALC_DIRS",
	# Tolerance overrides (auto-scaled from lip and h when unset)
	"SETCALC_TOL_REP",
	"SETCALC_TOL_GRAD",
	# Smoothing schedule "<kind>:<w0_in_h>:<stages>"
	"SETCALC_SMOOTHING",
	# Output format: csv or json
	"SETCALC_FORMAT",
	"SETCALC_SEED",
	# Logging
	"SETCALC_LOG_LEVEL",
	"SETCALC_LOG_FORMAT",
)

OUTPUT_FORMATS = ("csv", "json")

MIN_NODES = 16


def _getenv(name, default):
	value = os.getenv(name)
	return value if value else default


def _float(text: str, what: str) -> float:
	try:
		value = float(text)
	except (TypeError, ValueError):
		raise BadConfig(f"Invalid {what}: '{text}' is not a number")
	if not math.isfinite(value):
		raise BadConfig(f"Invalid {what}: '{text}' is not finite")
	return value


def parse_grid(value: str) -> Grid1D:
	"""Parse a grid spec like '-1,1,401'.

	Args:
		value: "a,b,n" with a < b and an integer n >= 16

	Returns:
		Grid1D
	"""
	parts = [p.strip() for p in str(value).split(",")]
	if len(parts) != 3 or not re.match(r'^\d+$', parts[2]):
		raise BadConfig(f"Invalid grid format: '{value}'. Expected format: 'a,b,n' (e.g. '-1,1,401')")
	a = _float(parts[0], "grid endpoint")
	b = _float(parts[1], "grid endpoint")
	n = int(parts[2])
	if n < MIN_NODES:
		raise BadConfig(f"Invalid grid '{value}': n must be at least {MIN_NODES}")
	try:
		return Grid1D(a, b, n)
	except InvalidGrid as exc:
		raise BadConfig(f"Invalid grid '{value}': {exc.message}")


def parse_schedule(value: str) -> Tuple[float, ...]:
	"""Parse a k-schedule.

	Supports:
		- 'geom:10' -> 1, 2, 4, ..., 1024
		- '1,2,4,8' -> explicit strictly increasing positive list
	"""
	text = str(value).strip()
	match = re.match(r'^geom:(\d+)$', text)
	if match:
		return default_schedule(int(match.group(1)))
	parts = [p.strip() for p in text.split(",") if p.strip()]
	if not parts:
		raise BadConfig(f"Invalid k-schedule format: '{value}'. Expected 'geom:<max_exp>' or a comma list")
	ks = tuple(_float(p, "k-schedule entry") for p in parts)
	if any(k <= 0 for k in ks) or any(b <= a for a, b in zip(ks, ks[1:])):
		raise BadConfig(f"Invalid k-schedule '{value}': entries must be positive and strictly increasing")
	return ks


def parse_smoothing(value: str) -> Tuple[str, float, int]:
	"""Parse a smoothing spec like 'mollifier:16:5' into (kind, w0_in_h, stages)."""
	parts = [p.strip() for p in str(value).split(":")]
	if len(parts) != 3 or parts[0] not in SMOOTHING_KINDS or not re.match(r'^\d+$', parts[2]):
		raise BadConfig(
			f"Invalid smoothing format: '{value}'. Expected '<kind>:<w0_in_h>:<stages>' "
			f"with kind in {', '.join(SMOOTHING_KINDS)}"
		)
	w0 = _float(parts[1], "smoothing width")
	stages = int(parts[2])
	if w0 <= 0 or stages < 3:
		raise BadConfig(f"Invalid smoothing '{value}': width must be positive and stages at least 3")
	return parts[0], w0, stages


def _optional_tol(value: Optional[str], what: str) -> Optional[float]:
	if not value:
		return None
	tol = _float(value, what)
	if tol <= 0:
		raise BadConfig(f"Invalid {what}: '{value}' must be positive")
	return tol


def _nonnegative_int(value: str, what: str, minimum: int = 0) -> int:
	if not re.match(r'^\d+$', str(value).strip()):
		raise BadConfig(f"Invalid {what}: '{value}' is not a nonnegative integer")
	number = int(str(value).strip())
	if number < minimum:
		raise BadConfig(f"Invalid {what}: must be at least {minimum}")
	return number


@dataclass(frozen=True)
class RunConfig:
	"""Settings shared by every subcommand.

	Configuration concepts:
	- grid: the domain every catalog function is sampled on
	- ks: the k-schedule of the metrics
	- tol_rep / tol_grad: overrides, auto-scaled from lip and h when None
	"""

	grid: Grid1D
	ks: Tuple[float, ...]
	dirs: int = 64
	tol_rep: Optional[float] = None
	tol_grad: Optional[float] = None
	smoothing: Tuple[str, float, int] = ("mollifier", 16.0, 5)
	format: str = "json"
	seed: int = 0
	log_level: str = "warning"
	log_format: str = "json"

	def __post_init__(self):
		if self.grid.n < MIN_NODES:
			raise BadConfig(f"The grid needs at least {MIN_NODES} nodes, got {self.grid.n}")
		if self.dirs < 1:
			raise BadConfig(f"Direction count must be at least 1, got {self.dirs}")
		if self.seed < 0:
			raise BadConfig(f"Seed must be nonnegative, got {self.seed}")
		if self.format not in OUTPUT_FORMATS:
			raise BadConfig(f"Unknown output format '{self.format}'. Expected one of: {', '.join(OUTPUT_FORMATS)}")
		for name in ("tol_rep", "tol_grad"):
			value = getattr(self, name)
			if value is not None and not value > 0:
				raise BadConfig(f"{name} must be positive, got {value}")

	def with_overrides(self, **overrides) -> "RunConfig":
		"""Copy with every override that is not None applied."""
		known = {f.name for f in fields(self)}
		unknown = set(overrides) - known
		if unknown:
			raise BadConfig(f"Unknown configuration fields: {sorted(unknown)}")
		return replace(self, **{k: v for k, v in overrides.items() if v is not None})

	def smoothing_schedule(self) -> SmoothingSchedule:
		kind, w0, stages = self.smoothing
		return SmoothingSchedule.geometric(self.grid, w0, stages, kind)

	def to_dict(self):
		return {
			"grid": self.grid.to_dict(),
			"ks": list(self.ks),
			"dirs": self.dirs,
			"tol_rep": self.tol_rep,
			"tol_grad": self.tol_grad,
			"smoothing": {"kind": self.smoothing[0], "w0_in_h": self.smoothing[1], "stages": self.smoothing[2]},
			"format": self.format,
			"seed": self.seed,
		}


def set_config_path(path: str):
	"""Set a custom .env file path to load. Must be called before load_config()."""
	global _custom_dotenv_path, _dotenv_loaded
	_custom_dotenv_path = path
	_dotenv_loaded = False  # Reset to force reload with new path


def _load_dotenv_once():
	global _dotenv_loaded, _custom_dotenv_path
	if _dotenv_loaded:
		return
	try:
		from dotenv import load_dotenv, find_dotenv
		dotenv_path = os.getenv("SETCALC_CONFIG") or _custom_dotenv_path
		if dotenv_path:
			if not os.path.isfile(dotenv_path):
				raise BadConfig(f"Config file not found: {dotenv_path}")
			# explicit files win over the environment
			load_dotenv(dotenv_path, override=True)
		else:
			# search from cwd, not from the source file location
			dotenv_path = find_dotenv(usecwd=True)
			if dotenv_path:
				load_dotenv(dotenv_path)
	except ModuleNotFoundError:
		pass
	_dotenv_loaded = True


def load_config() -> RunConfig:
	"""Return a RunConfig with all settings loaded."""
	_load_dotenv_once()
	return RunConfig(
		grid=parse_grid(_getenv("SETCALC_GRID", "-1,1,401")),
		ks=parse_schedule(_getenv("SETCALC_KS", "geom:10")),
		dirs=_nonnegative_int(_getenv("SETCALC_DIRS", "64"), "direction count", minimum=1),
		tol_rep=_optional_tol(os.getenv("SETCALC_TOL_REP"), "SETCALC_TOL_REP"),
		tol_grad=_optional_tol(os.getenv("SETCALC_TOL_GRAD"), "SETCALC_TOL_GRAD"),
		smoothing=parse_smoothing(_getenv("SETCALC_SMOOTHING", "mollifier:16:5")),
		format=_getenv("SETCALC_FORMAT", "json").strip().lower(),
		seed=_nonnegative_int(_getenv("SETCALC_SEED", "0"), "seed"),
		log_level=_getenv("SETCALC_LOG_LEVEL", "warning"),
		log_format=_getenv("SETCALC_LOG_FORMAT", "json").strip().lower(),
	)

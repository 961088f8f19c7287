# Formatting utilities for setcalc output

import math

from .classes import ConvexValue, IntervalValue


def format_float(value: float) -> str:
	"""
	Format a float in its shortest round-trip form.

	Args:
		value: Any finite or non-finite float

	Returns:
		Integral values as integer text ("0", "-1"), negative zero as "0",
		everything else as repr(), which float() parses back bit-exactly.
		Files that must round-trip use format_exact.
	"""
	value = float(value)
	if not math.isfinite(value):
		return repr(value)
	if value == 0.0:
		return "0"
	if value.is_integer() and abs(value) < 2 ** 53:
		return str(int(value))
	return repr(value)


def format_exact(value: float) -> str:
	"""format_float, except that negative zero keeps its sign as "-0"."""
	value = float(value)
	if value == 0.0 and math.copysign(1.0, value) < 0.0:
		return "-0"
	return format_float(value)


def format_interval(value) -> str:
	"""
	Format a set-valued value for text output.

	Args:
		value: IntervalValue, or ConvexValue (one-dimensional values print as intervals)

	Returns:
		"{y}" for a singleton, "[lo, hi]" for an interval, a vertex list otherwise
	"""
	if isinstance(value, ConvexValue):
		if value.dim == 1:
			value = value.as_interval()
		elif len(value.vertices) == 1:
			return "{(" + ", ".join(format_float(c) for c in value.vertices[0]) + ")}"
		else:
			verts = ", ".join("(" + ", ".join(format_float(c) for c in v) + ")" for v in value.vertices)
			return "co{" + verts + "}"
	if isinstance(value, IntervalValue):
		if value.lo == value.hi:
			return "{" + format_float(value.lo) + "}"
		return f"[{format_float(value.lo)}, {format_float(value.hi)}]"
	raise TypeError(f"Cannot format {type(value).__name__} as a value")

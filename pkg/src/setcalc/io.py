# Readers and writers for samples, classes, gradient fields and tower elements
#
# Floats are written in shortest round-trip form so every file reads back
# bit-exactly.

from __future__ import annotations

import csv
import io
import json
import re
from typing import Dict, List, Sequence, TextIO, Tuple

import numpy as np

from .classes import ClassPair, Grid1D, SampledFn, VectorClass
from .completion import TowerElement
from .errors import InvalidSample
from .formatting import format_exact, format_float

_GRID_LINE = re.compile(
	r"^#\s*grid\s+a=(?P<a>\S+)\s+b=(?P<b>\S+)\s+n=(?P<n>\d+)\s+lip=(?P<lip>\S+)\s+bound=(?P<bound>\S+)\s*$"
)

FUNCTION_HEADER = ("index", "x", "value", "is_jump")


def write_function_csv(f: SampledFn, stream: TextIO) -> None:
	g = f.grid
	stream.write(
		f"# grid a={format_exact(g.a)} b={format_exact(g.b)} n={g.n} "
		f"lip={format_exact(f.lip)} bound={format_exact(f.bound)}\n"
	)
	writer = csv.writer(stream, lineterminator="\n")
	writer.writerow(FUNCTION_HEADER)
	jumps = set(f.jumps)
	for i, (x, v) in enumerate(zip(g.nodes, f.values)):
		writer.writerow((i, format_exact(x), format_exact(v), int(i in jumps)))


def function_to_csv(f: SampledFn) -> str:
	buf = io.StringIO()
	write_function_csv(f, buf)
	return buf.getvalue()


def read_function_csv(text: str) -> SampledFn:
	lines = text.splitlines()
	if not lines:
		raise InvalidSample("Empty function file")
	m = _GRID_LINE.match(lines[0])
	if not m:
		raise InvalidSample(f"Missing or malformed grid line: '{lines[0]}'")
	grid = Grid1D(float(m.group("a")), float(m.group("b")), int(m.group("n")))
	rows = list(csv.reader(lines[1:]))
	if not rows or tuple(rows[0]) != FUNCTION_HEADER:
		raise InvalidSample(f"Expected header {','.join(FUNCTION_HEADER)}")
	body = rows[1:]
	if len(body) != grid.n:
		raise InvalidSample(f"Expected {grid.n} rows, got {len(body)}")
	values = np.empty(grid.n)
	jumps = []
	for row in body:
		try:
			i, _, value, is_jump = row
			i = int(i)
			values[i] = float(value)
		except (ValueError, IndexError):
			raise InvalidSample(f"Malformed row: {row}")
		if is_jump.strip() == "1":
			jumps.append(i)
	return SampledFn(grid, values, jumps, float(m.group("lip")), float(m.group("bound")))


def class_to_dict(pair: ClassPair) -> Dict:
	return {
		"grid": pair.grid.to_dict(),
		"lower": pair.lower.values.tolist(),
		"upper": pair.upper.values.tolist(),
		"jumps": list(pair.jumps),
		"lip": pair.lip,
		"bound": pair.bound,
	}


def class_from_dict(doc: Dict) -> ClassPair:
	try:
		grid = Grid1D(doc["grid"]["a"], doc["grid"]["b"], doc["grid"]["n"])
		jumps = doc["jumps"]
		lip, bound = doc.get("lip"), doc.get("bound")
		lower = SampledFn.from_values(grid, doc["lower"], jumps, lip, bound)
		upper = SampledFn.from_values(grid, doc["upper"], jumps, lip, bound)
	except (KeyError, TypeError) as exc:
		raise InvalidSample(f"Malformed class document: {exc}")
	return ClassPair(lower, upper)


def field_to_dict(F: VectorClass) -> Dict:
	return {
		"m": F.m,
		"grid": F.grid.to_dict(),
		"jumps": list(F.jumps),
		"components": [class_to_dict(c) for c in F.components],
	}


def gradient_plot_rows(F: VectorClass, component: int = 0) -> List[Tuple[str, str, str]]:
	"""(x, lower, upper) per node; jump nodes carry the vertical segment."""
	c = F.component(component)
	return [
		(format_float(x), format_float(lo), format_float(up))
		for x, lo, up in zip(c.grid.nodes, c.lower.values, c.upper.values)
	]


def write_plot_csv(
	rows: Sequence[Sequence[str]],
	header: Sequence[str],
	stream: TextIO,
	comments: Sequence[str] = (),
) -> None:
	"""Plot table with optional leading "# key=value" comment lines."""
	for line in comments:
		stream.write(f"# {line}\n")
	writer = csv.writer(stream, lineterminator="\n")
	writer.writerow(header)
	writer.writerows(rows)


def plot_csv(rows: Sequence[Sequence[str]], header: Sequence[str], comments: Sequence[str] = ()) -> str:
	buf = io.StringIO()
	write_plot_csv(rows, header, buf, comments)
	return buf.getvalue()


def envelope_rows(f: ClassPair, lower: SampledFn, upper: SampledFn) -> List[Tuple[str, ...]]:
	return [
		(format_float(x), format_float(lo), format_float(up), format_float(el), format_float(eu))
		for x, lo, up, el, eu in zip(f.grid.nodes, f.lower.values, f.upper.values, lower.values, upper.values)
	]


def tower_to_json(x: TowerElement) -> Tuple[Dict, Dict[str, List[float]]]:
	"""Element document plus a bundle of function payloads it refers to.

	Levels that share one function object share one payload.
	"""
	bundle: Dict[str, List[float]] = {}
	refs: Dict[int, str] = {}

	def ref(fn: SampledFn) -> str:
		key = refs.get(id(fn))
		if key is None:
			key = f"f{len(refs)}"
			refs[id(fn)] = key
			bundle[key] = fn.values.tolist()
		return key

	doc = {
		"depth": x.depth,
		"pairs": [
			{"level": n + 1, "lower_ref": ref(lo), "upper_ref": ref(up)}
			for n, (lo, up) in enumerate(zip(x.lowers, x.uppers))
		],
		"gap": x.gap,
		"tail": list(x.tail),
		"moduli": list(x.moduli),
	}
	return doc, bundle


def tower_from_json(doc: Dict, bundle: Dict[str, List[float]], grid: Grid1D) -> TowerElement:
	try:
		moduli = tuple(float(k) for k in doc["moduli"])
		lowers, uppers = [], []
		cache: Dict[str, SampledFn] = {}
		for pair in doc["pairs"]:
			for key, out in ((pair["lower_ref"], lowers), (pair["upper_ref"], uppers)):
				if key not in cache:
					cache[key] = SampledFn.from_values(grid, bundle[key])
				out.append(cache[key])
		return TowerElement(
			int(doc["depth"]), tuple(lowers), tuple(uppers), float(doc["gap"]),
			tuple(float(t) for t in doc["tail"]), moduli,
		)
	except (KeyError, IndexError, TypeError) as exc:
		raise InvalidSample(f"Malformed tower document: {exc}")


def json_text(obj) -> str:
	# NaN and infinities are not JSON
	return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def write_text(path: str, text: str) -> None:
	with open(path, "w", encoding="utf-8", newline="") as fh:
		fh.write(text)

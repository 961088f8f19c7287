# Algebra expressions over catalog functions
#
#   expr    := name | op "(" args ")"
#   add(e, e)  scale(lambda, e)  mul(e, e)  min(e, e)  max(e, e)  compose(phi, e)
#
# Names are catalog entries ("abs", "const:2", "mollified:abs:4"); phi is one
# of identity, square, log, exp.

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple, Union

import numpy as np

from . import catalog
from .classes import ClassPair, Grid1D, class_add, class_max, class_min, class_mul, class_scale
from .errors import ExpressionError, RangeMismatch
from .gradient import (
	GradientField,
	SmoothFn,
	clarke_gradient,
	compose,
	grad_add,
	grad_chain,
	grad_minmax,
	grad_product,
	grad_scale,
	smooth_from_callable,
)

_TOKEN = re.compile(r"\s*(?:(?P<punct>[(),])|(?P<atom>[A-Za-z0-9_.:+\-]+))")

# Nodes of the outer-function grid built over the range of f
PHI_NODES = 4001


@dataclass(frozen=True)
class Outer:
	name: str
	fn: Callable[[np.ndarray], np.ndarray]
	dfn: Callable[[np.ndarray], np.ndarray]
	positive_only: bool = False


OUTER: Dict[str, Outer] = {
	"identity": Outer("identity", lambda t: np.array(t, dtype=float), lambda t: np.ones_like(t)),
	"square": Outer("square", lambda t: t * t, lambda t: 2.0 * t),
	"log": Outer("log", np.log, lambda t: 1.0 / t, positive_only=True),
	"exp": Outer("exp", np.exp, np.exp),
}


@dataclass(frozen=True)
class Ref:
	name: str


@dataclass(frozen=True)
class Binary:
	op: str
	left: "Expr"
	right: "Expr"


@dataclass(frozen=True)
class Scale:
	lam: float
	arg: "Expr"


@dataclass(frozen=True)
class Compose:
	phi: str
	arg: "Expr"


Expr = Union[Ref, Binary, Scale, Compose]

_BINARY = ("add", "mul", "min", "max")


def _tokenize(text: str) -> List[str]:
	tokens = []
	pos = 0
	text = text.strip()
	while pos < len(text):
		m = _TOKEN.match(text, pos)
		if not m or m.end() == pos:
			raise ExpressionError(f"Unexpected character at position {pos} in '{text}'")
		tokens.append(m.group("punct") or m.group("atom"))
		pos = m.end()
		while pos < len(text) and text[pos].isspace():
			pos += 1
	return tokens


class _Parser:
	def __init__(self, text: str):
		self.text = text
		self.tokens = _tokenize(text)
		self.pos = 0

	def _peek(self):
		return self.tokens[self.pos] if self.pos < len(self.tokens) else None

	def _take(self, expected=None) -> str:
		tok = self._peek()
		if tok is None:
			raise ExpressionError(f"Unexpected end of expression '{self.text}'")
		if expected is not None and tok != expected:
			raise ExpressionError(f"Expected '{expected}' but found '{tok}' in '{self.text}'")
		self.pos += 1
		return tok

	def parse(self) -> Expr:
		node = self._expr()
		if self._peek() is not None:
			raise ExpressionError(f"Trailing input '{self._peek()}' in '{self.text}'")
		return node

	def _expr(self) -> Expr:
		head = self._take()
		if head in "(),":
			raise ExpressionError(f"Unexpected '{head}' in '{self.text}'")
		if self._peek() != "(":
			return Ref(head)
		self._take("(")
		if head in _BINARY:
			left = self._expr()
			self._take(",")
			right = self._expr()
			node: Expr = Binary(head, left, right)
		elif head == "scale":
			lam_text = self._take()
			try:
				lam = float(lam_text)
			except ValueError:
				raise ExpressionError(f"scale expects a number, got '{lam_text}'")
			self._take(",")
			node = Scale(lam, self._expr())
		elif head == "compose":
			phi = self._take()
			if phi not in OUTER:
				raise ExpressionError(f"Unknown outer function '{phi}'. Expected one of: {', '.join(OUTER)}")
			self._take(",")
			node = Compose(phi, self._expr())
		else:
			raise ExpressionError(f"Unknown operation '{head}'")
		self._take(")")
		return node


def parse(text: str) -> Expr:
	return _Parser(text).parse()


def outer_fn(phi: str, f: ClassPair) -> SmoothFn:
	"""Outer function sampled over a padded range of f."""
	outer = OUTER[phi]
	lo = float(f.lower.values.min())
	hi = float(f.upper.values.max())
	pad = max(1e-3 * (hi - lo), 1e-6) if hi > lo else 1.0
	if outer.positive_only:
		if lo <= 0:
			raise RangeMismatch(f"'{phi}' needs a positive argument, the range reaches {lo}")
		pad = min(pad, 0.5 * lo)
	grid = Grid1D(lo - pad, hi + pad, PHI_NODES)
	return smooth_from_callable(grid, outer.fn, outer.dfn)


def evaluate(node: Expr, grid: Grid1D) -> ClassPair:
	if isinstance(node, Ref):
		return catalog.build(node.name, grid)
	if isinstance(node, Scale):
		return class_scale(node.lam, evaluate(node.arg, grid))
	if isinstance(node, Compose):
		f = evaluate(node.arg, grid)
		return compose(outer_fn(node.phi, f), f)
	left, right = evaluate(node.left, grid), evaluate(node.right, grid)
	if node.op == "add":
		return class_add(left, right)
	if node.op == "mul":
		return class_mul(left, right)
	if node.op == "min":
		return class_min(left, right)
	return class_max(left, right)


def gradient(node: Expr, grid: Grid1D) -> Tuple[ClassPair, GradientField]:
	"""Class of the expression and its gradient by the calculus rules.

	Leaves use the Clarke gradient of the sampled catalog function.
	"""
	if isinstance(node, Ref):
		f = catalog.build(node.name, grid)
		return f, clarke_gradient(f)
	if isinstance(node, Scale):
		f, df = gradient(node.arg, grid)
		return class_scale(node.lam, f), grad_scale(node.lam, df)
	if isinstance(node, Compose):
		f, df = gradient(node.arg, grid)
		phi = outer_fn(node.phi, f)
		return compose(phi, f), grad_chain(phi, f, df)
	f, df = gradient(node.left, grid)
	g, dg = gradient(node.right, grid)
	if node.op == "add":
		return class_add(f, g), grad_add(df, dg)
	if node.op == "mul":
		return class_mul(f, g), grad_product(f, g, df, dg)
	if node.op == "min":
		return class_min(f, g), grad_minmax(f, g, df, dg, "min")
	return class_max(f, g), grad_minmax(f, g, df, dg, "max")


def to_text(node: Expr) -> str:
	if isinstance(node, Ref):
		return node.name
	if isinstance(node, Scale):
		return f"scale({node.lam:g},{to_text(node.arg)})"
	if isinstance(node, Compose):
		return f"compose({node.phi},{to_text(node.arg)})"
	return f"{node.op}({to_text(node.left)},{to_text(node.right)})"

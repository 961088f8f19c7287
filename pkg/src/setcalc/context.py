# Context management for run_id and area

import contextvars
import uuid
from contextlib import contextmanager
from typing import Optional

_run_id_var = contextvars.ContextVar("run_id", default=None)
_area_var = contextvars.ContextVar("area", default=None)


@contextmanager
def operation(
	run_id: Optional[str] = None,
	area: Optional[str] = None,
):
	"""Context manager to set run_id and area (subcommand or verify suite) for log context.
	"""
	token_run = None
	token_area = None
	if run_id is None:
		run_id = str(uuid.uuid4())
	try:
		token_run = _run_id_var.set(run_id)
		if area is not None:
			token_area = _area_var.set(area)
		yield run_id
	finally:
		if token_run:
			_run_id_var.reset(token_run)
		if token_area:
			_area_var.reset(token_area)

def get_area() -> Optional[str]:
	return _area_var.get()

def get_run_id() -> Optional[str]:
	return _run_id_var.get()

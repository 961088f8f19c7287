# Level normalization helpers.

import logging
from typing import Optional

from .errors import BadConfig

_LEVELS = {
	"debug": logging.DEBUG,
	"info": logging.INFO,
	"warning": logging.WARNING,
	"warn": logging.WARNING,
	"error": logging.ERROR,
	"critical": logging.CRITICAL,
}


def normalize_level(level: Optional[str]) -> Optional[str]:
	if level is None:
		return None
	if not isinstance(level, str):
		level = str(level)
	level = level.strip().lower()
	return level or None


def to_logging_level(level: Optional[str], default: int = logging.WARNING) -> int:
	"""Map a level name onto a logging level number."""
	name = normalize_level(level)
	if name is None:
		return default
	if name not in _LEVELS:
		raise BadConfig(f"Unknown log level '{level}'. Expected one of: debug, info, warning, error, critical")
	return _LEVELS[name]

# SetcalcHandler implementation
#
# A Python logging handler that writes log records as structured documents
# (JSON lines or one-line text) to a stream.

import json
import logging
import sys
from datetime import datetime, timezone
from typing import Any, Dict, Mapping, Optional, Sequence, TextIO, Tuple

from .context import get_area, get_run_id
from .errors import BadConfig
from .levels import normalize_level, to_logging_level

_FEATURE_VALUE_TYPES = (str, int, float, bool, type(None))

LOG_FORMATS = ("json", "text")


def _coerce_feature_value(value: Any) -> Any:
	if isinstance(value, _FEATURE_VALUE_TYPES):
		return value
	# numpy scalars and the like
	try:
		return float(value)
	except (TypeError, ValueError):
		return str(value)


def _normalize_features(value: Any) -> Optional[Dict[str, Any]]:
	if value is None:
		return None
	features: Dict[str, Any] = {}
	items: Sequence[Tuple[Any, Any]]
	if isinstance(value, Mapping):
		items = list(value.items())
	elif isinstance(value, (list, tuple, set)):
		items = list(value)
	else:
		return None
	for item in items:
		if not isinstance(item, (list, tuple)) or len(item) != 2:
			continue
		key, val = item
		if key is None:
			continue
		key_text = str(key).strip()
		if not key_text:
			continue
		features[key_text] = _coerce_feature_value(val)
	return features or None


def _extract_features(record: logging.LogRecord) -> Optional[Dict[str, Any]]:
	return _normalize_features(getattr(record, "features", None))


class SetcalcHandler(logging.Handler):
	"""Logging handler that writes structured records to a stream.

	Usage:
		from setcalc.handler import SetcalcHandler

		handler = SetcalcHandler(level=logging.INFO, fmt="json")
		logging.getLogger("setcalc").addHandler(handler)
	"""

	def __init__(
		self,
		level: int = logging.DEBUG,
		fmt: str = "json",
		stream: Optional[TextIO] = None,
	):
		"""Initialize the SetcalcHandler.

		Args:
			level: Minimum log level to handle
			fmt: "json" for JSON lines, "text" for one readable line per record
			stream: Target stream (stderr when None, resolved at emit time)
		"""
		super().__init__(level)
		if fmt not in LOG_FORMATS:
			raise BadConfig(f"Unknown log format '{fmt}'. Expected one of: {', '.join(LOG_FORMATS)}")
		self.fmt = fmt
		self.stream = stream

	def emit(self, record: logging.LogRecord) -> None:
		try:
			doc = self.format_record(record)
			if self.fmt == "json":
				line = json.dumps(doc, sort_keys=True, default=str)
			else:
				line = self.format_text(doc)
			stream = self.stream if self.stream is not None else sys.stderr
			stream.write(line + "\n")
			stream.flush()
		except Exception:
			self.handleError(record)

	def format_record(self, record: logging.LogRecord) -> Dict[str, Any]:
		"""Format a log record into a structured document.

		- Top-level: timestamp, level, logger, message, area, run_id
		- Optional: features, exception
		"""
		timestamp = None
		if getattr(record, "created", None) is not None:
			timestamp = datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat().replace("+00:00", "Z")

		doc: Dict[str, Any] = {
			"timestamp": timestamp,
			"level": normalize_level(record.levelname),
			"logger": record.name,
			"message": record.getMessage(),
			"area": getattr(record, "area", None) or get_area(),
		}

		run_id = getattr(record, "run_id", None) or get_run_id()
		if run_id:
			doc["run_id"] = run_id

		features = _extract_features(record)
		if features:
			doc["features"] = features

		doc["funcname"] = record.funcName
		doc["lineno"] = record.lineno

		if record.exc_info and not record.exc_text:
			record.exc_text = logging.Formatter().formatException(record.exc_info)
		if record.exc_text:
			doc["exception"] = record.exc_text

		return doc

	@staticmethod
	def format_text(doc: Dict[str, Any]) -> str:
		parts = [doc.get("timestamp") or "-", (doc.get("level") or "-").upper(), doc["logger"]]
		if doc.get("area"):
			parts.append(f"[{doc['area']}]")
		parts.append(doc["message"])
		features = doc.get("features")
		if features:
			parts.append(" ".join(f"{k}={v}" for k, v in sorted(features.items())))
		return " ".join(parts)


def configure_logging(level: Optional[str] = "warning", fmt: str = "json", stream: Optional[TextIO] = None) -> SetcalcHandler:
	"""Install a single SetcalcHandler on the package logger.

	Calling again replaces the previous handler rather than stacking another.
	"""
	logger = logging.getLogger("setcalc")
	for existing in list(logger.handlers):
		if isinstance(existing, SetcalcHandler):
			logger.removeHandler(existing)
	handler = SetcalcHandler(level=to_logging_level(level), fmt=fmt, stream=stream)
	logger.addHandler(handler)
	logger.setLevel(handler.level)
	logger.propagate = False
	return handler

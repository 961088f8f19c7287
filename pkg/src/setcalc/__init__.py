# setcalc package

from setcalc.classes import (
	ClassPair,
	ConvexValue,
	Grid1D,
	IntervalValue,
	SampledFn,
	VectorClass,
	canonical_pair,
	value_at,
)
from setcalc.envelope import envelope_family, lip_lower_envelope, lip_upper_envelope
from setcalc.errors import SetcalcError
from setcalc.gradient import GradientField, clarke_gradient, closure_gradient
from setcalc.metric import MetricReport, r_metric, s_metric

__version__ = "0.1.0"

__all__ = [
	"ClassPair",
	"ConvexValue",
	"GradientField",
	"Grid1D",
	"IntervalValue",
	"MetricReport",
	"SampledFn",
	"SetcalcError",
	"VectorClass",
	"canonical_pair",
	"clarke_gradient",
	"closure_gradient",
	"envelope_family",
	"lip_lower_envelope",
	"lip_upper_envelope",
	"r_metric",
	"s_metric",
	"value_at",
]

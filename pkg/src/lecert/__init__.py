"""Exact certification of equisingularity for families of line singularities."""

__version__ = "0.1.0"

from .parse import ParseError, parse_family
from .poly import ComplexPoint, EvaluationError, PolyFamily

__all__ = [
    "ComplexPoint",
    "EvaluationError",
    "ParseError",
    "PolyFamily",
    "parse_family",
    "__version__",
]

"""Exact arithmetic and digit statistics for tau-adic width-w non-adjacent forms."""

from .digitset import DigitSet, build_digit_set
from .naf import NafWord, expand, value, weight
from .ring import FieldElement, IQOrder, RingElement, make_order

__all__ = [
    "DigitSet",
    "FieldElement",
    "IQOrder",
    "NafWord",
    "RingElement",
    "build_digit_set",
    "expand",
    "make_order",
    "value",
    "weight",
]
__version__ = "0.1.0"

"""Scalar attribute values and comparison predicates over them."""

from datetime import datetime
from enum import Enum
from typing import Any, Dict, Union

from .temporal import format_timestamp

AttributeValue = Union[bool, int, float, str, datetime]
Attributes = Dict[str, AttributeValue]

# Category used for an attribute that is absent on an observation.
MISSING = "⊥"


class Comparison(str, Enum):
    """Comparison operators usable in attribute predicates."""
    EQ = "="
    NE = "!="
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="

    @classmethod
    def parse(cls, text: str) -> "Comparison":
        aliases = {"≠": "!=", "≤": "<=", "≥": ">=", "==": "="}
        return cls(aliases.get(text, text))

    def apply(self, left: Any, right: Any) -> bool:
        """Evaluate ``left <op> right``; incomparable values never match."""
        if left is None:
            return False
        if isinstance(left, bool) != isinstance(right, bool):
            return False if self is not Comparison.NE else True
        if self is Comparison.EQ:
            return left == right
        if self is Comparison.NE:
            return left != right
        try:
            if self is Comparison.LT:
                return left < right
            if self is Comparison.LE:
                return left <= right
            if self is Comparison.GT:
                return left > right
            return left >= right
        except TypeError:
            return False


def is_scalar(value: Any) -> bool:
    return isinstance(value, (bool, int, float, str, datetime))


def render_scalar(value: Any) -> str:
    """Stable text form of an attribute value, used for partitions and tables."""
    if value is None:
        return MISSING
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, datetime):
        return format_timestamp(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)

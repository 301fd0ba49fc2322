"""Exact rational scalars and their textual form."""

from __future__ import annotations

import re
from fractions import Fraction

from .exceptions import InputValidationError

type Rational = Fraction
type RationalLike = Fraction | int | str

_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/\d+)?")


def to_rational(value: RationalLike) -> Fraction:
    """Convert an int, Fraction or "num"/"num/den" string to a reduced Fraction.

    Floats and bools are rejected: every scalar must be exact.
    """
    if isinstance(value, bool):
        msg = f"Boolean is not a rational value: {value!r}"
        raise InputValidationError(msg)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.fullmatch(text):
            msg = f"Invalid rational literal: {value!r} (expected 'num' or 'num/den')"
            raise InputValidationError(msg)
        try:
            return Fraction(text)
        except ZeroDivisionError as e:
            msg = f"Zero denominator in rational literal: {value!r}"
            raise InputValidationError(msg) from e
    msg = f"Unsupported rational value of type {type(value).__name__}: {value!r}"
    raise InputValidationError(msg)


def format_rational(value: Fraction) -> str:
    """Format as "num" or "num/den"."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"

"""Exact rational parsing/formatting helpers.

File formats carry rationals as decimal-free fraction strings ("3", "-1/2").
Parsing is strict: decimal points and exponents are rejected so no rounding
can sneak in at an I/O boundary.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import InvalidInputError

_FRACTION_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*([1-9]\d*))?\s*$")


def parse_fraction(text: str | int | Fraction) -> Fraction:
    """Parse "p" or "p/q" into an exact Fraction; reject decimal notation."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    match = _FRACTION_RE.match(str(text))
    if match is None:
        raise InvalidInputError(f"not a fraction string: {text!r}")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) else 1
    return Fraction(num, den)


def format_fraction(value: Fraction | int) -> str:
    """Render an exact rational as "p" or "p/q"."""
    frac = Fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{frac.numerator}/{frac.denominator}"


def parse_fraction_vector(items) -> tuple[Fraction, ...]:
    return tuple(parse_fraction(item) for item in items)


def format_fraction_vector(values) -> list[str]:
    return [format_fraction(v) for v in values]

"""Parsing and formatting helpers for exact rationals."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational


def to_fraction(x) -> Fraction:
    """Convert ints, Fractions, and ``"p/q"`` or decimal strings exactly.

    Floats are accepted only when they are integral or dyadic-exact; use strings
    for data such as ``0.1``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def fmt_number(x, digits: int = 6) -> str:
    """Exact rationals as ``p/q``; floats to ``digits`` significant digits."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return f"{float(x):.{digits}g}"

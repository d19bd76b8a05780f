"""Exact rational scalars and their wire format.

Every coefficient in the engine is a ``fractions.Fraction``: arbitrary
precision, always in lowest terms with positive denominator, so arithmetic
never rounds and string round-trips are lossless.
"""

from __future__ import annotations

from fractions import Fraction

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_scalar(text: str) -> Fraction:
    """Parse "p/q" or "p" into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational scalar: {text!r}") from exc


def format_scalar(value: Fraction) -> str:
    """Render as "p/q", or "p" when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def factorial_inverse(n: int) -> Fraction:
    """1/n! as an exact rational."""
    acc = 1
    for k in range(2, n + 1):
        acc *= k
    return Fraction(1, acc)

"""Exact rational helpers shared by the DoF modules."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

__all__ = ["Q", "as_rational", "as_vector", "fmt", "parse_rational_list"]

Q = Fraction


def as_rational(value) -> Fraction:
    """Convert ``value`` to a Fraction without a binary-float detour.

    Strings such as ``"0.6"`` or ``"3/5"`` are parsed exactly.  Floats go
    through their shortest ``repr`` so that ``0.6`` becomes ``3/5`` rather
    than the nearest dyadic rational.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    # numpy scalars and the like
    return Fraction(repr(float(value)))


def as_vector(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_rational(v) for v in values)


def fmt(q: Fraction) -> str:
    """Serialize as an exact ``"p/q"`` string (denominator always present)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational_list(text: str) -> tuple[Fraction, ...]:
    """Parse a comma separated list like ``"0.6,0.3"`` or ``"3/5, 1/3"``."""
    parts = [p for p in (s.strip() for s in text.split(",")) if p]
    if not parts:
        raise ValueError(f"empty value list: {text!r}")
    return tuple(Fraction(p) for p in parts)


def fmt_decimal(values: Sequence[Fraction], digits: int = 6) -> str:
    """Human-readable rendering used in table output only."""
    return "(" + ", ".join(f"{float(v):.{digits}g}" for v in values) + ")"

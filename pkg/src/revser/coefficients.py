"""Exact rational scalars, the coefficient field for every kernel value.

Backed by :class:`fractions.Fraction`, which keeps values in lowest terms
with a positive denominator.  The canonical text form is ``p/q`` in lowest
terms, or just ``p`` when the denominator is one; parsing accepts exactly
that shape (plus an optional leading sign on the numerator).
"""

from __future__ import annotations

import re
from fractions import Fraction

FieldElement = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

_SCALAR_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def from_integer(k: int) -> Fraction:
    return Fraction(k)


def ratio(p: int, q: int) -> Fraction:
    """p/q in lowest terms; q must be nonzero."""
    if q == 0:
        raise ZeroDivisionError("zero denominator")
    return Fraction(p, q)


def add(a: Fraction, b: Fraction) -> Fraction:
    return a + b


def sub(a: Fraction, b: Fraction) -> Fraction:
    return a - b


def mul(a: Fraction, b: Fraction) -> Fraction:
    return a * b


def neg(a: Fraction) -> Fraction:
    return -a


def invert(a: Fraction) -> Fraction:
    """Multiplicative inverse; zero has none."""
    if not a:
        raise ZeroDivisionError("zero has no multiplicative inverse")
    return 1 / a


def is_zero(a: Fraction) -> bool:
    return not a


def parse_scalar(text: str) -> Fraction:
    """Parse the canonical text form.  Raises ValueError on anything else."""
    text = text.strip()
    if not _SCALAR_RE.match(text):
        raise ValueError(f"not a rational scalar: {text!r}")
    den = text.partition("/")[2]
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in scalar: {text!r}")
    return Fraction(text)


def format_scalar(a: Fraction) -> str:
    """Canonical text form: ``p/q`` in lowest terms, ``p`` when integral."""
    return str(a)

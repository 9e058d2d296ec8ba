"""Exact rational scalars and their canonical text form."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from revser.coefficients import (
    ONE,
    ZERO,
    format_scalar,
    from_integer,
    invert,
    is_zero,
    parse_scalar,
    ratio,
)

rationals = st.fractions(
    min_value=Fraction(-10**6), max_value=Fraction(10**6), max_denominator=10**4
)


class TestParsing:
    @pytest.mark.parametrize(
        "text,value",
        [
            ("3", Fraction(3)),
            ("-3", Fraction(-3)),
            ("+3", Fraction(3)),
            ("0", Fraction(0)),
            ("-0", Fraction(0)),
            ("4/6", Fraction(2, 3)),
            ("-10/4", Fraction(-5, 2)),
            ("  7/2 ", Fraction(7, 2)),
            ("007", Fraction(7)),
        ],
    )
    def test_accepts_canonical_and_reducible(self, text, value):
        assert parse_scalar(text) == value

    @pytest.mark.parametrize(
        "text",
        ["", "a", "1.5", "1e3", "1/-2", "--1", "1//2", "/2", "3/", "1 / 2", "0x10"],
    )
    def test_rejects_noncanonical(self, text):
        with pytest.raises(ValueError):
            parse_scalar(text)

    @pytest.mark.parametrize("text", ["1/0", "3/00", "-7/000"])
    def test_rejects_zero_denominator_as_value_error(self, text):
        with pytest.raises(ValueError):
            parse_scalar(text)

    @given(rationals)
    def test_round_trip(self, q):
        assert parse_scalar(format_scalar(q)) == q


class TestFormatting:
    def test_integers_drop_denominator(self):
        assert format_scalar(Fraction(5)) == "5"
        assert format_scalar(Fraction(-4, 2)) == "-2"

    def test_lowest_terms(self):
        assert format_scalar(Fraction(4, 6)) == "2/3"
        assert format_scalar(Fraction(3, -9)) == "-1/3"

    @given(rationals)
    def test_invariants(self, q):
        # lowest terms, positive denominator, sign on the numerator
        assert math.gcd(abs(q.numerator), q.denominator) == 1
        assert q.denominator > 0
        text = format_scalar(q)
        assert not text.startswith("+")
        assert ("/" in text) == (q.denominator != 1)


class TestFieldOps:
    def test_constants(self):
        assert is_zero(ZERO) and not is_zero(ONE)
        assert from_integer(7) == Fraction(7)

    def test_ratio(self):
        assert ratio(4, 6) == Fraction(2, 3)
        with pytest.raises(ZeroDivisionError):
            ratio(1, 0)

    def test_invert(self):
        assert invert(Fraction(2, 3)) == Fraction(3, 2)
        with pytest.raises(ZeroDivisionError):
            invert(ZERO)

    @given(rationals, rationals)
    def test_field_axioms_sample(self, a, b):
        assert a + b == b + a
        assert a * b == b * a
        assert a + ZERO == a
        assert a * ONE == a
        assert a + (-a) == ZERO
        if b:
            assert (a / b) * b == a

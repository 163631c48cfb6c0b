from fractions import Fraction

import pytest
from hypothesis import given

from toeplitzq.scalar import I, ONE, ZERO, Scalar, format_scalar, parse_scalar

from conftest import scalars


@pytest.mark.parametrize(
    "text, value",
    [
        ("3", Scalar(3)),
        ("-1/2", Scalar(Fraction(-1, 2))),
        ("i", I),
        ("-i", -I),
        ("1/2 + 3/4 i", Scalar(Fraction(1, 2), Fraction(3, 4))),
        ("1/2+3/4*i", Scalar(Fraction(1, 2), Fraction(3, 4))),
        ("2-i", Scalar(2, -1)),
        ("-3i", Scalar(0, -3)),
    ],
)
def test_parse(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1/0", "1//2", "i i", "2+"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_scalar(text)


def test_format_forms():
    assert format_scalar(Scalar(Fraction(1, 2), Fraction(3, 4))) == "1/2+3/4i"
    assert format_scalar(Scalar(2, -1)) == "2-i"
    assert format_scalar(-I) == "-i"
    assert format_scalar(ZERO) == "0"


@given(scalars)
def test_format_parse_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(scalars, scalars, scalars)
def test_field_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b).conj() == a.conj() * b.conj()
    assert a * a.conj() == Scalar(a.abs2())
    if b:
        assert (a / b) * b == a


def test_mixed_equality_and_hash():
    assert Scalar(2) == 2 and Scalar(Fraction(1, 2)) == Fraction(1, 2)
    assert hash(Scalar(2)) == hash(2)
    assert I * I == -ONE
    assert I**-1 == -I
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


@given(scalars, scalars)
def test_conjugation_is_involutive_automorphism(a, b):
    assert a.conj().conj() == a
    assert (a + b).conj() == a.conj() + b.conj()
    assert (a * b).conj() == a.conj() * b.conj()

"""Exact Gaussian rationals a + b*i with a, b in Q."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

Number = Union[int, Fraction, "Scalar"]


class Scalar:
    """An element of Q(i). Immutable; components are reduced Fractions."""

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re: int | Fraction | str = 0, im: int | Fraction | str = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def coerce(x: Number) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Scalar")

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(self.re) if not self.im else hash((self.re, self.im))
            object.__setattr__(self, "_hash", h)
        return h

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def __pos__(self) -> "Scalar":
        return self

    def __add__(self, other: Number) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            return Scalar(self.re + other, self.im)
        if not isinstance(other, Scalar):
            return NotImplemented
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            return Scalar(self.re - other, self.im)
        if not isinstance(other, Scalar):
            return NotImplemented
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other: Number) -> "Scalar":
        return Scalar.coerce(other) - self

    def __mul__(self, other: Number) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            return Scalar(self.re * other, self.im * other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.im and not other.im:
            return Scalar(self.re * other.re)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("Scalar division by zero")
        if not self.im:
            return Scalar(1 / self.re)
        n = self.abs2()
        return Scalar(self.re / n, -self.im / n)

    def __truediv__(self, other: Number) -> "Scalar":
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other: Number) -> "Scalar":
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self) -> str:
        return f"Scalar('{self}')"

    def __str__(self) -> str:
        return format_scalar(self)


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def _frac_str(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def format_scalar(s: Scalar) -> str:
    """Canonical text form: ``a/b``, ``c/di`` or ``a/b+c/di``."""
    if not s.im:
        return _frac_str(s.re)
    if s.im == 1:
        im = "i"
    elif s.im == -1:
        im = "-i"
    else:
        im = _frac_str(s.im) + "i"
    if not s.re:
        return im
    sign = "" if im.startswith("-") else "+"
    return f"{_frac_str(s.re)}{sign}{im}"


_RAT = re.compile(r"[+-]?[0-9]+(?:/[0-9]+)?")


def _parse_rational(text: str, whole: str) -> Fraction:
    if not _RAT.fullmatch(text):
        raise ValueError(f"malformed scalar {whole!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {whole!r}") from None


def parse_scalar(text: str) -> Scalar:
    """Parse ``a/b``, ``a/b + c/d i``, ``-i``, ``1/2-3i`` and similar forms."""
    s = "".join(text.split()).replace("*i", "i")
    if not s:
        raise ValueError("empty scalar")
    if not s.endswith("i"):
        return Scalar(_parse_rational(s, text))
    body = s[:-1]
    cut = max(body.rfind("+"), body.rfind("-"))
    real, imag = (body[:cut], body[cut:]) if cut > 0 else ("", body)
    if imag in ("", "+", "-"):
        imag += "1"
    re_part = _parse_rational(real, text) if real else Fraction(0)
    return Scalar(re_part, _parse_rational(imag, text))

"""Exact arithmetic in the real quadratic field Q(sqrt2)."""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

SQRT2_FLOAT = math.sqrt(2.0)

Rational = Union[int, Fraction]

_SERIAL_RE = re.compile(
    r"^\s*([+-]?\d+)(?:/(\d+))?\s*([+-])\s*(\d+)(?:/(\d+))?\s*\*\s*sqrt2\s*$"
)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


class AlgebraicScalar:
    """The number ``p + q*sqrt(2)`` with rational ``p`` and ``q``.

    Instances are immutable and hashable. Equality is exact, and so is
    ordering, since the sign of ``p + q*sqrt2`` can be decided by comparing
    squares.
    """

    __slots__ = ("_p", "_q")

    def __init__(self, p: Rational | str = 0, q: Rational | str = 0) -> None:
        self._p = _frac(p)
        self._q = _frac(q)

    @property
    def p(self) -> Fraction:
        return self._p

    @property
    def q(self) -> Fraction:
        return self._q

    @classmethod
    def coerce(cls, x) -> AlgebraicScalar:
        if isinstance(x, AlgebraicScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x, 0)
        raise TypeError(f"cannot coerce {type(x).__name__} to AlgebraicScalar")

    # arithmetic

    def __add__(self, other):
        try:
            o = AlgebraicScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return AlgebraicScalar(self._p + o._p, self._q + o._q)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = AlgebraicScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return AlgebraicScalar(self._p - o._p, self._q - o._q)

    def __rsub__(self, other):
        try:
            o = AlgebraicScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __neg__(self) -> AlgebraicScalar:
        return AlgebraicScalar(-self._p, -self._q)

    def __abs__(self) -> AlgebraicScalar:
        return -self if self.sign() < 0 else self

    def __pos__(self) -> AlgebraicScalar:
        return self

    def __mul__(self, other):
        try:
            o = AlgebraicScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if not (self._p or self._q) or not (o._p or o._q):
            return ZERO
        return AlgebraicScalar(
            self._p * o._p + 2 * self._q * o._q,
            self._p * o._q + self._q * o._p,
        )

    __rmul__ = __mul__

    def conjugate(self) -> AlgebraicScalar:
        """Galois conjugate ``p - q*sqrt2`` (not complex conjugation)."""
        return AlgebraicScalar(self._p, -self._q)

    def field_norm(self) -> Fraction:
        """``p**2 - 2*q**2``; zero only for the zero element."""
        return self._p * self._p - 2 * self._q * self._q

    def inverse(self) -> AlgebraicScalar:
        n = self.field_norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return AlgebraicScalar(self._p / n, -self._q / n)

    def __truediv__(self, other):
        try:
            o = AlgebraicScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = AlgebraicScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    # comparison

    def sign(self) -> int:
        p, q = self._p, self._q
        if p >= 0 and q >= 0:
            return 0 if (p == 0 and q == 0) else 1
        if p <= 0 and q <= 0:
            return -1
        # opposite signs: compare p**2 with 2 q**2
        d = p * p - 2 * q * q
        if p > 0:
            return 1 if d > 0 else -1
        return -1 if d > 0 else 1

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgebraicScalar):
            return self._p == other._p and self._q == other._q
        if isinstance(other, (int, Fraction)):
            return self._q == 0 and self._p == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._q == 0:
            return hash(self._p)
        return hash((self._p, self._q))

    def __lt__(self, other):
        try:
            return (self - other).sign() < 0
        except TypeError:
            return NotImplemented

    def __le__(self, other):
        try:
            return (self - other).sign() <= 0
        except TypeError:
            return NotImplemented

    def __gt__(self, other):
        try:
            return (self - other).sign() > 0
        except TypeError:
            return NotImplemented

    def __ge__(self, other):
        try:
            return (self - other).sign() >= 0
        except TypeError:
            return NotImplemented

    def __bool__(self) -> bool:
        return bool(self._p) or bool(self._q)

    def is_rational(self) -> bool:
        return self._q == 0

    def __float__(self) -> float:
        return float(self._p) + float(self._q) * SQRT2_FLOAT

    # text forms

    def to_string(self) -> str:
        """Canonical serialization ``p/d1+q/d2*sqrt2`` with reduced fractions."""
        p, q = self._p, self._q
        sign = "-" if q < 0 else "+"
        return (
            f"{p.numerator}/{p.denominator}"
            f"{sign}{abs(q.numerator)}/{q.denominator}*sqrt2"
        )

    @classmethod
    def parse(cls, text: str) -> AlgebraicScalar:
        """Inverse of :meth:`to_string`; also accepts plain rationals like ``-1/2``."""
        m = _SERIAL_RE.match(text)
        if m:
            pn, pd, qs, qn, qd = m.groups()
            p = Fraction(int(pn), int(pd or 1))
            q = Fraction(int(qn), int(qd or 1))
            return cls(p, q if qs == "+" else -q)
        try:
            return cls(Fraction(text.strip()), 0)
        except ValueError:
            raise ValueError(f"not a Q(sqrt2) literal: {text!r}") from None

    def __repr__(self) -> str:
        return f"AlgebraicScalar({self._p!s}, {self._q!s})"

    def __str__(self) -> str:
        p, q = self._p, self._q
        if q == 0:
            return str(p)
        if q.denominator == 1:
            qs = "√2" if abs(q) == 1 else f"{abs(q.numerator)}√2"
        else:
            num = "√2" if abs(q.numerator) == 1 else f"{abs(q.numerator)}√2"
            qs = f"{num}/{q.denominator}"
        if p == 0:
            return ("-" if q < 0 else "") + qs
        return f"{p}{'-' if q < 0 else '+'}{qs}"


ZERO = AlgebraicScalar(0, 0)
ONE = AlgebraicScalar(1, 0)
SQRT2 = AlgebraicScalar(0, 1)
INV_SQRT2 = AlgebraicScalar(0, Fraction(1, 2))
HALF = AlgebraicScalar(Fraction(1, 2), 0)


def scalar(x) -> AlgebraicScalar:
    """Build a scalar from an int, Fraction, string literal or scalar."""
    if isinstance(x, str):
        return AlgebraicScalar.parse(x)
    return AlgebraicScalar.coerce(x)


def scalar_arith(a: AlgebraicScalar, b: AlgebraicScalar, kind: str) -> AlgebraicScalar:
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        if not b:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return a / b
    raise ValueError(f"unknown arithmetic kind {kind!r}")

"""Exact arithmetic in real quadratic fields.

A :class:`QuadraticScalar` stores ``(p + q*sqrt(d)) / den`` with integer
``p, q, den`` and a square-free radicand ``d``.  Rationals have ``q == 0`` and
``d == 0``.  Arithmetic between two irrational values needs a common radicand;
ordering works across fields.
"""

from __future__ import annotations

import math
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from numbers import Rational


class UnsupportedFieldError(ValueError):
    """Raised when two irrational values live in different quadratic fields."""


class Sign(IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


@lru_cache(maxsize=4096)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` square-free."""
    if n < 0:
        raise ValueError("negative radicand")
    if n in (0, 1):
        return 1, n
    s, d = 1, 1
    m = n
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    d *= m
    return s, d


def _surd_sign(p: int, q: int, d: int) -> int:
    # sign of p + q*sqrt(d), d square-free (> 1) or q == 0
    if q == 0:
        return (p > 0) - (p < 0)
    if p == 0:
        return (q > 0) - (q < 0)
    if (p > 0) == (q > 0):
        return 1 if p > 0 else -1
    if p * p > q * q * d:
        return 1 if p > 0 else -1
    return 1 if q > 0 else -1


class QuadraticScalar:
    """An element ``rational_part + surd_coefficient * sqrt(radicand)``."""

    __slots__ = ("_p", "_q", "_den", "_d", "_hash")

    def __init__(self, rational_part=0, surd_coefficient=0, radicand: int = 0):
        r = Fraction(rational_part)
        s = Fraction(surd_coefficient)
        if s and radicand <= 0:
            raise ValueError("a non-zero surd coefficient needs a positive radicand")
        den = r.denominator * s.denominator // math.gcd(r.denominator, s.denominator)
        self._set(r.numerator * (den // r.denominator),
                  s.numerator * (den // s.denominator), den, radicand)

    def _set(self, p: int, q: int, den: int, d: int) -> None:
        if q == 0:
            d = 0
        elif d in (0, 1):
            p, q, d = p + q * d, 0, 0
        else:
            s, d = squarefree_split(d)
            if d == 1:
                p, q, d = p + q * s, 0, 0
            else:
                q *= s
        if den < 0:
            p, q, den = -p, -q, -den
        g = math.gcd(math.gcd(p, q), den)
        if g > 1:
            p //= g
            q //= g
            den //= g
        self._p, self._q, self._den, self._d = p, q, den, d
        self._hash = None

    @classmethod
    def _raw(cls, p: int, q: int, den: int, d: int) -> "QuadraticScalar":
        obj = cls.__new__(cls)
        obj._set(p, q, den, d)
        return obj

    @classmethod
    def from_triple(cls, num: int, den: int, surd_num: int = 0, surd_den: int = 1,
                    radicand: int = 0) -> "QuadraticScalar":
        return cls(Fraction(num, den), Fraction(surd_num, surd_den), radicand)

    @classmethod
    def sqrt_of(cls, value) -> "QuadraticScalar":
        """Exact square root of a non-negative rational."""
        v = as_scalar(value)
        if not v.is_rational:
            raise UnsupportedFieldError("square root of an irrational quadratic value")
        r = v.as_fraction()
        if r < 0:
            raise ValueError("square root of a negative number")
        n = r.numerator * r.denominator
        s, d = squarefree_split(n)
        return cls(0, Fraction(s, r.denominator), d) if d > 1 else cls(Fraction(s, r.denominator))

    # -- accessors -----------------------------------------------------
    @property
    def rational_part(self) -> Fraction:
        return Fraction(self._p, self._den)

    @property
    def surd_coefficient(self) -> Fraction:
        return Fraction(self._q, self._den)

    @property
    def radicand(self) -> int:
        return self._d

    @property
    def is_rational(self) -> bool:
        return self._q == 0

    def as_fraction(self) -> Fraction:
        if self._q:
            raise ValueError(f"{self} is irrational")
        return Fraction(self._p, self._den)

    def conjugate(self) -> "QuadraticScalar":
        return QuadraticScalar._raw(self._p, -self._q, self._den, self._d)

    def norm(self) -> Fraction:
        return Fraction(self._p * self._p - self._q * self._q * self._d, self._den * self._den)

    # -- arithmetic ------------------------------------------------------
    def _field(self, other: "QuadraticScalar") -> int:
        if self._d == other._d or other._q == 0:
            return self._d
        if self._q == 0:
            return other._d
        raise UnsupportedFieldError(f"radicands {self._d} and {other._d} differ")

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        d = self._field(o)
        return QuadraticScalar._raw(self._p * o._den + o._p * self._den,
                                    self._q * o._den + o._q * self._den,
                                    self._den * o._den, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticScalar._raw(-self._p, -self._q, self._den, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        d = self._field(o)
        return QuadraticScalar._raw(self._p * o._p + self._q * o._q * d,
                                    self._p * o._q + self._q * o._p,
                                    self._den * o._den, d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticScalar":
        n = self._p * self._p - self._q * self._q * self._d
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        # den/(p + q r) = den (p - q r) / n
        return QuadraticScalar._raw(self._den * self._p, -self._den * self._q, n, self._d)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        out = ONE
        for _ in range(abs(n)):
            out = out * base
        return out

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- order -------------------------------------------------------------
    def sign(self) -> Sign:
        return Sign(_surd_sign(self._p, self._q, self._d))

    def _cmp(self, other) -> int:
        o = _coerce(other)
        if o is None:
            raise TypeError(f"cannot compare QuadraticScalar with {type(other).__name__}")
        if self._q and o._q and self._d != o._d:
            # different fields: order is still decidable
            from .multiquad import MultiSurd
            return MultiSurd.of(self)._cmp(o)
        d = self._field(o)
        return _surd_sign(self._p * o._den - o._p * self._den,
                          self._q * o._den - o._q * self._den, d)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return (self._p, self._q, self._den, self._d) == (o._p, o._q, o._den, o._d)

    def __hash__(self):
        if self._hash is None:
            if self._q == 0:
                self._hash = hash(Fraction(self._p, self._den))
            else:
                self._hash = hash((self._p, self._q, self._den, self._d))
        return self._hash

    def __bool__(self):
        return self._p != 0 or self._q != 0

    def floor(self) -> int:
        if self._q == 0:
            return self._p // self._den
        t = math.isqrt(self._q * self._q * self._d)
        # t < |q| sqrt(d) < t + 1 since d is square-free
        s = t if self._q > 0 else -t - 1
        return (self._p + s) // self._den

    def frac(self) -> "QuadraticScalar":
        """The representative of ``self`` modulo 1 in ``[0, 1)``."""
        return self - self.floor()

    def __float__(self):
        return (self._p + self._q * math.sqrt(self._d)) / self._den

    def to_triple(self) -> list:
        """Serialization as ``[[num, den], [surd_num, surd_den], radicand]``."""
        r, s = self.rational_part, self.surd_coefficient
        return [[r.numerator, r.denominator], [s.numerator, s.denominator], self._d]

    @classmethod
    def from_json(cls, data) -> "QuadraticScalar":
        if isinstance(data, (int, str)):
            return cls(Fraction(data))
        if len(data) == 2 and all(isinstance(x, int) for x in data):
            return cls(Fraction(data[0], data[1]))
        (rn, rd), (sn, sd), d = data
        return cls(Fraction(rn, rd), Fraction(sn, sd), d)

    def __repr__(self):
        return f"QuadraticScalar({self})"

    def __str__(self):
        r, s = self.rational_part, self.surd_coefficient
        if not s:
            return str(r)
        surd = f"sqrt({self._d})" if abs(s) == 1 else f"{abs(s)}*sqrt({self._d})"
        if not r:
            return surd if s > 0 else f"-{surd}"
        return f"{r} {'+' if s > 0 else '-'} {surd}"


def _coerce(x):
    if isinstance(x, QuadraticScalar):
        return x
    if isinstance(x, int):
        return QuadraticScalar._raw(x, 0, 1, 0)
    if isinstance(x, Rational):
        return QuadraticScalar._raw(x.numerator, 0, x.denominator, 0)
    return None


def as_scalar(x) -> QuadraticScalar:
    """Convert ints, Fractions and rational strings to :class:`QuadraticScalar`."""
    if isinstance(x, str):
        return QuadraticScalar(Fraction(x))
    o = _coerce(x)
    if o is None:
        raise TypeError(f"cannot convert {x!r} to an exact scalar")
    return o


def compare(a, b) -> Sign:
    """Exact sign of ``a - b`` for values sharing a field.

    The order operators on :class:`QuadraticScalar` also handle two different
    radicands; this function keeps the single-field contract and raises.
    """
    a, b = as_scalar(a), as_scalar(b)
    a._field(b)
    return Sign(a._cmp(b))


ZERO = QuadraticScalar._raw(0, 0, 1, 0)
ONE = QuadraticScalar._raw(1, 0, 1, 0)


def golden_ratio() -> QuadraticScalar:
    return QuadraticScalar(Fraction(1, 2), Fraction(1, 2), 5)


def golden_angle() -> QuadraticScalar:
    """``(sqrt(5) - 1) / 2``, the fractional part of the golden ratio."""
    return QuadraticScalar(Fraction(-1, 2), Fraction(1, 2), 5)

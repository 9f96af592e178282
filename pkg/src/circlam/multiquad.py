"""Exact sums of rational multiples of square roots.

Used where values from different quadratic fields must be ordered or
subtracted, e.g. gap lengths between fixed points of unrelated group
elements.  The sign is decided by splitting off one prime at a time:
``x = u + v*sqrt(p)`` and comparing ``u^2`` with ``p*v^2``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .scalar import QuadraticScalar, squarefree_split


@lru_cache(maxsize=4096)
def _primes(n: int) -> tuple:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


class MultiSurd:
    """``sum c_m * sqrt(m)`` over square-free ``m`` (``m = 1`` is the rational part)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def of(cls, x) -> "MultiSurd":
        if isinstance(x, MultiSurd):
            return x
        if isinstance(x, QuadraticScalar):
            t = {1: x.rational_part}
            if not x.is_rational:
                t[x.radicand] = x.surd_coefficient
            return cls(t)
        if isinstance(x, (int, Rational)):
            return cls({1: Fraction(x)})
        raise TypeError(f"cannot convert {x!r}")

    def __add__(self, other):
        o = MultiSurd.of(other)
        t = dict(self.terms)
        for m, c in o.terms.items():
            t[m] = t.get(m, 0) + c
        return MultiSurd(t)

    __radd__ = __add__

    def __neg__(self):
        return MultiSurd({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-MultiSurd.of(other))

    def __rsub__(self, other):
        return MultiSurd.of(other) - self

    def __mul__(self, other):
        o = MultiSurd.of(other)
        t: dict = {}
        for m, c in self.terms.items():
            for n, e in o.terms.items():
                g = math.gcd(m, n)
                k = (m // g) * (n // g)
                t[k] = t.get(k, 0) + c * e * g
        return MultiSurd(t)

    __rmul__ = __mul__

    def sign(self) -> int:
        return _sign(tuple(sorted(self.terms.items())))

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        try:
            return (self - other).terms == {}
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __float__(self):
        return float(sum(float(c) * math.sqrt(m) for m, c in self.terms.items()))

    def to_scalar(self) -> QuadraticScalar:
        """Back to a single-field value; raises if more than one surd remains."""
        rad = [m for m in self.terms if m != 1]
        if len(rad) > 1:
            raise ValueError("value spans several quadratic fields")
        r = self.terms.get(1, Fraction(0))
        if not rad:
            return QuadraticScalar(r)
        return QuadraticScalar(r, self.terms[rad[0]], rad[0])

    def to_json(self):
        try:
            return self.to_scalar().to_triple()
        except ValueError:
            return {"terms": [[m, [c.numerator, c.denominator]] for m, c in sorted(self.terms.items())]}

    def __repr__(self):
        return "MultiSurd(" + " + ".join(f"{c}*sqrt({m})" for m, c in sorted(self.terms.items())) + ")"


@lru_cache(maxsize=65536)
def _sign(items: tuple) -> int:
    terms = dict(items)
    if not terms:
        return 0
    primes = set()
    for m in terms:
        primes.update(_primes(m))
    if not primes:
        c = terms.get(1, 0)
        return (c > 0) - (c < 0)
    p = max(primes)
    u: dict = {}
    v: dict = {}
    for m, c in terms.items():
        if m % p == 0:
            v[m // p] = c
        else:
            u[m] = c
    su = _sign(tuple(sorted(u.items())))
    sv = _sign(tuple(sorted(v.items())))
    if su == 0 or su == sv:
        return sv if su == 0 else su
    if sv == 0:
        return su
    U, V = MultiSurd(u), MultiSurd(v)
    d = (U * U - V * V * p).sign()
    # |u| > |v| sqrt(p) iff d > 0
    return su if d > 0 else sv if d < 0 else 0


def sqrt_sum_sign(x) -> int:
    return MultiSurd.of(x).sign()


__all__ = ["MultiSurd", "sqrt_sum_sign", "squarefree_split"]

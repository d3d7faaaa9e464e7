"""Exact arithmetic in the quadratic field K = Q(sqrt 2).

A :class:`ScalarK` stores ``(p + q*sqrt2) / d`` with integers ``p, q`` and a
positive ``d`` such that ``gcd(p, q, d) == 1``.  That normal form makes
equality and hashing structural, and keeps the hot paths on plain Python
integers (no :class:`fractions.Fraction` objects are created per operation).
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational


class ScalarError(ArithmeticError):
    """Raised on field-level failures such as division by zero."""


def _norm(p: int, q: int, d: int) -> "ScalarK":
    if d < 0:
        p, q, d = -p, -q, -d
    g = 1 if d == 1 else gcd(p, q, d)
    if g != 1:
        p //= g
        q //= g
        d //= g
    obj = object.__new__(ScalarK)
    obj._p = p
    obj._q = q
    obj._d = d
    return obj


def _raw(p: int, q: int, d: int) -> "ScalarK":
    obj = object.__new__(ScalarK)
    obj._p = p
    obj._q = q
    obj._d = d
    return obj


class ScalarK:
    """An element ``a + b*sqrt2`` of K with rational ``a`` and ``b``."""

    __slots__ = ("_p", "_q", "_d")

    def __new__(cls, a=0, b=0):
        if isinstance(a, ScalarK) and b == 0:
            return a
        fa = Fraction(a)
        fb = Fraction(b)
        d = fa.denominator * fb.denominator // gcd(fa.denominator, fb.denominator)
        return _norm(fa.numerator * (d // fa.denominator),
                     fb.numerator * (d // fb.denominator), d)

    # -- construction -----------------------------------------------------

    @classmethod
    def coerce(cls, x) -> "ScalarK":
        if isinstance(x, ScalarK):
            return x
        if isinstance(x, int):
            return _raw(x, 0, 1)
        if isinstance(x, (Fraction, Rational)):
            return _norm(x.numerator, 0, x.denominator)
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot interpret {x!r} as an element of Q(sqrt2)")

    # -- components -------------------------------------------------------

    @property
    def a(self) -> Fraction:
        """Rational part."""
        return Fraction(self._p, self._d)

    @property
    def b(self) -> Fraction:
        """Coefficient of sqrt 2."""
        return Fraction(self._q, self._d)

    def is_rational(self) -> bool:
        return self._q == 0

    def is_zero(self) -> bool:
        return self._p == 0 and self._q == 0

    def __bool__(self) -> bool:
        return self._p != 0 or self._q != 0

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ScalarK):
            try:
                other = ScalarK.coerce(other)
            except TypeError:
                return NotImplemented
        d1, d2 = self._d, other._d
        if d1 == d2:
            return _norm(self._p + other._p, self._q + other._q, d1)
        return _norm(self._p * d2 + other._p * d1, self._q * d2 + other._q * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return _raw(-self._p, -self._q, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, ScalarK):
            try:
                other = ScalarK.coerce(other)
            except TypeError:
                return NotImplemented
        d1, d2 = self._d, other._d
        if d1 == d2:
            return _norm(self._p - other._p, self._q - other._q, d1)
        return _norm(self._p * d2 - other._p * d1, self._q * d2 - other._q * d1, d1 * d2)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if not isinstance(other, ScalarK):
            try:
                other = ScalarK.coerce(other)
            except TypeError:
                return NotImplemented
        p1, q1, p2, q2 = self._p, self._q, other._p, other._q
        if q1 == 0 and q2 == 0:
            return _norm(p1 * p2, 0, self._d * other._d)
        return _norm(p1 * p2 + 2 * q1 * q2, p1 * q2 + q1 * p2, self._d * other._d)

    __rmul__ = __mul__

    def conjugate(self) -> "ScalarK":
        """Galois conjugate ``a - b*sqrt2``."""
        return _raw(self._p, -self._q, self._d)

    def norm(self) -> Fraction:
        """Field norm ``a**2 - 2*b**2``."""
        return Fraction(self._p * self._p - 2 * self._q * self._q, self._d * self._d)

    def inverse(self) -> "ScalarK":
        p, q, d = self._p, self._q, self._d
        n = p * p - 2 * q * q
        if n == 0:
            raise ScalarError("division by zero in Q(sqrt2)")
        # 1/((p + q r)/d) = d (p - q r) / (p^2 - 2 q^2)
        return _norm(d * p, -d * q, n)

    def __truediv__(self, other):
        if not isinstance(other, ScalarK):
            try:
                other = ScalarK.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return ScalarK.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, ScalarK):
            return self._p == other._p and self._q == other._q and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self._q == 0 and Fraction(self._p, self._d) == other
        return NotImplemented

    def __hash__(self):
        if self._q == 0:
            # must agree with int/Fraction hashing since equality does
            return hash(self._p) if self._d == 1 else hash(Fraction(self._p, self._d))
        return hash((self._p, self._q, self._d))

    def sign(self) -> int:
        """Sign under the real embedding sqrt2 -> +1.414..."""
        p, q = self._p, self._q
        if p >= 0 and q >= 0:
            return 0 if (p == 0 and q == 0) else 1
        if p <= 0 and q <= 0:
            return -1
        # opposite signs: compare p^2 with 2 q^2
        if p * p > 2 * q * q:
            return 1 if p > 0 else -1
        return 1 if q > 0 else -1

    def __float__(self) -> float:
        return (self._p + self._q * 2 ** 0.5) / self._d

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"ScalarK({format_scalar(self)!r})"


ZERO = _raw(0, 0, 1)
ONE = _raw(1, 0, 1)
SQRT2 = _raw(0, 1, 1)


def K(x=0, b=0) -> ScalarK:
    """Shorthand constructor: ``K(3, 1)`` is ``3 + sqrt2``; strings are parsed."""
    if isinstance(x, str) and b == 0:
        return parse_scalar(x)
    return ScalarK(x, b)


def _is_half_integer(r) -> bool:
    return Fraction(r).denominator in (1, 2)


def half_power(s, r) -> ScalarK:
    """Return ``s**(2r)``, i.e. ``(s**2)**r`` for half-integer ``r``.

    ``s`` plays the role of a chosen square root of ``lambda = s**2``; for
    ``r`` in ``1/2 + Z`` this is ``lambda**(r - 1/2) * s``.
    """
    r = Fraction(r)
    if not _is_half_integer(r):
        raise ValueError(f"exponent {r} is not a half-integer")
    s = ScalarK.coerce(s)
    if s.is_zero():
        if r < 0:
            raise ScalarError("negative power of zero")
        return ONE if r == 0 else ZERO
    return s ** int(2 * r)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt_in_field(x) -> ScalarK | None:
    """A square root of ``x`` inside K, or ``None`` when none exists.

    The root returned is the one that is non-negative under the real
    embedding; the other root is its negative.
    """
    x = ScalarK.coerce(x)
    if x.is_zero():
        return ZERO
    a, b = x.a, x.b
    candidates = []
    if b == 0:
        r = _rational_sqrt(a)
        if r is not None:
            candidates.append(ScalarK(r, 0))
        r = _rational_sqrt(a / 2)
        if r is not None:
            candidates.append(ScalarK(0, r))
    else:
        # (u + v sqrt2)^2 = a + b sqrt2  =>  u^2 + 2 v^2 = a, 2 u v = b
        disc = _rational_sqrt(a * a - 2 * b * b)
        if disc is not None:
            for u2 in ((a + disc) / 2, (a - disc) / 2):
                u = _rational_sqrt(u2)
                if u:
                    candidates.append(ScalarK(u, b / (2 * u)))
    for c in candidates:
        if c * c == x:
            return c if c.sign() >= 0 else -c
    return None


# -- text form ------------------------------------------------------------

def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_scalar(x: ScalarK) -> str:
    """Canonical text: ``p/q`` or ``p/q+r/s*w2`` (``w2`` stands for sqrt 2)."""
    a, b = x.a, x.b
    if b == 0:
        return format_rational(a)
    sign = "+" if b > 0 else "-"
    return f"{format_rational(a)}{sign}{format_rational(abs(b))}*w2"


_RAT = r"-?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(rf"^\s*({_RAT})\s*(?:([+-])\s*(\d+(?:/\d+)?)\s*\*\s*w2)?\s*$")
_PURE_RE = re.compile(rf"^\s*({_RAT})\s*\*\s*w2\s*$")


def parse_rational(text: str) -> Fraction:
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ScalarError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def parse_scalar(text: str) -> ScalarK:
    """Parse the canonical text form produced by :func:`format_scalar`.

    A pure multiple of sqrt 2 may also be written without the rational
    part, as in ``1/2*w2``.
    """
    pure = _PURE_RE.match(text)
    if pure:
        return ScalarK(0, parse_rational(pure.group(1)))
    m = _SCALAR_RE.match(text)
    if not m:
        raise ValueError(f"not a Q(sqrt2) literal: {text!r}")
    a = parse_rational(m.group(1))
    b = Fraction(0)
    if m.group(2):
        b = parse_rational(m.group(3))
        if m.group(2) == "-":
            b = -b
    return ScalarK(a, b)

"""Closed intervals with exact rational endpoints.

Arithmetic on endpoints is exact.  Transcendental functions are enclosed by
evaluating them in mpmath's interval context and converting the (already
outward-rounded) binary endpoints to Fractions, so every result contains the
true value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath
from mpmath import iv, libmp

DEFAULT_PREC = 96  # bits, relative width ~1e-28, well under the 1e-15 default tolerance


def to_fraction(x) -> Fraction:
    """Exact conversion of int / Fraction / float / mpf to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, mpmath.mpf):
        man, exp = x.man_exp
        return Fraction(int(man)) * (Fraction(2) ** int(exp))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


class _prec:
    """Temporarily set the working precision of mpmath's interval context."""

    def __init__(self, bits: int):
        self.bits = bits

    def __enter__(self):
        self.saved = iv.prec
        iv.prec = self.bits

    def __exit__(self, *exc):
        iv.prec = self.saved


def _iv_of(fr: Fraction):
    # outward-rounded interval around an exact rational
    return iv.mpf(fr.numerator) / iv.mpf(fr.denominator)


def _raw_to_fraction(raw) -> Fraction:
    p, q = libmp.to_rational(raw)
    return Fraction(int(p), int(q))


def _from_iv(v) -> "RationalInterval":
    lo, hi = v._mpi_
    return RationalInterval(_raw_to_fraction(lo), _raw_to_fraction(hi))


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = to_fraction(self.lo), to_fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    # construction ---------------------------------------------------------
    @classmethod
    def point(cls, x) -> "RationalInterval":
        x = to_fraction(x)
        return cls(x, x)

    @classmethod
    def coerce(cls, x) -> "RationalInterval":
        return x if isinstance(x, RationalInterval) else cls.point(x)

    @classmethod
    def hull(cls, *items) -> "RationalInterval":
        items = [cls.coerce(v) for v in items]
        return cls(min(v.lo for v in items), max(v.hi for v in items))

    # queries --------------------------------------------------------------
    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, RationalInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, float):
            x = Fraction(x)
        return self.lo <= x <= self.hi

    def intersects(self, other) -> bool:
        other = RationalInterval.coerce(other)
        return self.lo <= other.hi and other.lo <= self.hi

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"[{float(self.lo):.12g}, {float(self.hi):.12g}]"

    # arithmetic -----------------------------------------------------------
    def __add__(self, o):
        o = RationalInterval.coerce(o)
        return RationalInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, o):
        return self + (-RationalInterval.coerce(o))

    def __rsub__(self, o):
        return RationalInterval.coerce(o) - self

    def __mul__(self, o):
        o = RationalInterval.coerce(o)
        if self.lo == self.hi and o.lo == o.hi:
            v = self.lo * o.lo
            return RationalInterval(v, v)
        c = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RationalInterval(min(c), max(c))

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = RationalInterval.coerce(o)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains 0")
        return self * RationalInterval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, o):
        return RationalInterval.coerce(o) / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        if k % 2 == 1 or self.lo >= 0:
            return RationalInterval(min(self.lo ** k, self.hi ** k), max(self.lo ** k, self.hi ** k))
        if self.hi <= 0:
            return RationalInterval(self.hi ** k, self.lo ** k)
        return RationalInterval(0, max(self.lo ** k, self.hi ** k))

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RationalInterval(0, max(-self.lo, self.hi))

    def max0(self):
        """Pointwise max(x, 0)."""
        return RationalInterval(max(self.lo, 0), max(self.hi, 0))

    # comparisons that are decided only when certain -----------------------
    def certainly_lt(self, o) -> bool:
        return self.hi < RationalInterval.coerce(o).lo

    def certainly_le(self, o) -> bool:
        return self.hi <= RationalInterval.coerce(o).lo

    def certainly_gt(self, o) -> bool:
        return self.lo > RationalInterval.coerce(o).hi

    # transcendental enclosures --------------------------------------------
    def _apply(self, fn, prec: int):
        with _prec(prec):
            return _from_iv(fn(_iv_of(self.lo) if self.lo == self.hi else iv.mpf([_iv_of(self.lo).a, _iv_of(self.hi).b])))

    def log(self, prec: int = DEFAULT_PREC):
        if self.lo <= 0:
            raise ValueError("log of non-positive interval")
        return self._apply(iv.log, prec)

    def exp(self, prec: int = DEFAULT_PREC):
        return self._apply(iv.exp, prec)

    def sqrt(self, prec: int = DEFAULT_PREC):
        if self.lo < 0:
            raise ValueError("sqrt of negative interval")
        return self._apply(iv.sqrt, prec)

    def sin(self, prec: int = DEFAULT_PREC):
        return self._apply(iv.sin, prec)


RI = RationalInterval


def ri_log(x, prec: int = DEFAULT_PREC) -> RationalInterval:
    return RationalInterval.coerce(x).log(prec)


def ri_exp(x, prec: int = DEFAULT_PREC) -> RationalInterval:
    return RationalInterval.coerce(x).exp(prec)


def ri_sqrt(x, prec: int = DEFAULT_PREC) -> RationalInterval:
    return RationalInterval.coerce(x).sqrt(prec)


def ri_pi(prec: int = DEFAULT_PREC) -> RationalInterval:
    with _prec(prec):
        return _from_iv(iv.pi)


def ri_e(prec: int = DEFAULT_PREC) -> RationalInterval:
    with _prec(prec):
        return _from_iv(iv.e)


def ri_sum(items) -> RationalInterval:
    lo = Fraction(0)
    hi = Fraction(0)
    for v in items:
        v = RationalInterval.coerce(v)
        lo += v.lo
        hi += v.hi
    return RationalInterval(lo, hi)


def ri_min(a, b) -> RationalInterval:
    a, b = RationalInterval.coerce(a), RationalInterval.coerce(b)
    return RationalInterval(min(a.lo, b.lo), min(a.hi, b.hi))


def ri_max(a, b) -> RationalInterval:
    a, b = RationalInterval.coerce(a), RationalInterval.coerce(b)
    return RationalInterval(max(a.lo, b.lo), max(a.hi, b.hi))

"""Rigorous analytic estimates: Stirling, prime counting bounds and the
effective oscillatory prime-sum bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .interval import RationalInterval, ri_log, ri_pi, ri_sqrt, to_fraction
from .primes import PrimeTable, sieve_primes

RI = RationalInterval

PRIME_SUM_MIN_Y = 1423
PI_LOWER_MIN_X = 599
PI_UPPER_CONST = Fraction(12762, 10000)
E_SQRT_COEFF = Fraction(95, 100)
E_LINEAR_COEFF = Fraction(383, 10**11)


def factorial_log_bounds(N: int) -> RationalInterval:
    """Enclosure of log N! from Stirling with error in [0, 1/(12N)]."""
    if N < 1:
        raise ValueError("N >= 1 required")
    base = N * ri_log(N) - N + ri_log(2 * ri_pi() * N) / 2
    return RI(base.lo, base.hi + Fraction(1, 12 * N))


def error_majorant(x) -> RationalInterval:
    """E(x) = 0.95 sqrt(x) + 3.83e-9 x as an enclosure."""
    x = RI.coerce(x)
    return E_SQRT_COEFF * x.sqrt() + E_LINEAR_COEFF * x


def error_majorant_upper(x) -> Fraction:
    return error_majorant(x).hi


def pi_bounds(x, table: PrimeTable | None = None) -> RationalInterval:
    """Interval containing pi(x) for real x > 1.

    Lower: x/log x + x/log^2 x for x >= 599; below that an exact count
    (from the sieve, falling back to 0 if no table covers x).
    Upper: x/log x + 1.2762 x / log^2 x.
    """
    x = to_fraction(x)
    if x <= 1:
        raise ValueError("pi_bounds needs x > 1")
    lg = ri_log(x)
    upper = (x / lg + PI_UPPER_CONST * x / (lg * lg)).hi
    if x >= PI_LOWER_MIN_X:
        lower = (x / lg + x / (lg * lg)).lo
    else:
        if table is None and x <= 10**7:
            table = sieve_primes(max(int(x), 2))
        lower = Fraction(table.pi(x)) if table is not None and table.limit >= x else Fraction(0)
        upper = max(upper, lower)
    return RI(lower, upper)


# ---------------------------------------------------------------------------
# step functions described by monotone pieces


@dataclass(frozen=True)
class Piece:
    """Monotone piece on the half-open interval (left, right].

    ``start`` is the limit of b at left+, ``end`` the value at right;
    ``integral`` encloses the integral of b over the piece.
    """

    left: Fraction
    right: Fraction
    start: RationalInterval
    end: RationalInterval
    integral: RationalInterval


@dataclass
class StepFunctionDescriptor:
    pieces: list[Piece] = field(default_factory=list)
    nonnegative: bool = True

    @classmethod
    def constant(cls, y, x, value) -> "StepFunctionDescriptor":
        y, x = to_fraction(y), to_fraction(x)
        v = RI.coerce(value)
        return cls([Piece(y, x, v, v, v * (x - y))], nonnegative=v.lo >= 0)

    @property
    def y(self) -> Fraction:
        return self.pieces[0].left

    @property
    def x(self) -> Fraction:
        return self.pieces[-1].right

    def integral(self) -> RationalInterval:
        lo = hi = Fraction(0)
        for pc in self.pieces:
            lo += pc.integral.lo
            hi += pc.integral.hi
        return RI(lo, hi)

    def total_variation(self) -> Fraction:
        """Upper bound for the total variation on (y, x]."""
        tv = Fraction(0)
        prev_end = None
        for pc in self.pieces:
            if prev_end is not None:
                tv += abs(pc.start - prev_end).hi
            tv += abs(pc.end - pc.start).hi
            prev_end = pc.end
        return tv

    def tv_star(self) -> Fraction:
        """Augmented variation |b(y+)| + |b(x)| + TV(b)."""
        return abs(self.pieces[0].start).hi + abs(self.pieces[-1].end).hi + self.total_variation()


def prime_sum_bounds(y, x, b: StepFunctionDescriptor, weight: str = "unit", direction: str = "upper") -> Fraction:
    """One-sided bound for sum_{y<p<=x} b(p) (weight 'unit') or
    sum b(p) log p (weight 'logp'), valid for 1423 <= y <= x and b >= 0."""
    y, x = to_fraction(y), to_fraction(x)
    if y < PRIME_SUM_MIN_Y:
        raise ValueError("prime_sum_bounds needs y >= 1423; sieve exactly below")
    if y > x:
        raise ValueError("need y <= x")
    if direction not in ("upper", "lower"):
        raise ValueError("direction must be 'upper' or 'lower'")
    if not b.nonnegative:
        raise ValueError("b must be non-negative")
    if not b.pieces:
        return Fraction(0)
    integ = b.integral()
    if integ.hi == 0 and b.tv_star() == 0:
        return Fraction(0)
    tv = b.tv_star()
    E = error_majorant(x)
    damp = 1 - 2 / ri_sqrt(y)  # lower bound of 1 - 2/sqrt(t) on (y, x]
    if weight == "logp":
        if direction == "upper":
            return (integ + tv * E).hi
        return (damp * integ - tv * E).lo
    if weight != "unit":
        raise ValueError("weight must be 'unit' or 'logp'")
    if direction == "upper":
        return (integ / ri_log(y) + tv * E / ri_log(y)).hi
    return (damp * integ / ri_log(x) - tv * E / ri_log(x)).lo


def prime_count_upper(y, x) -> Fraction:
    """pi(x) - pi(y) <= (x-y)/(2 log y) + (x-y)/(2 log x) + 2E(x)/log y."""
    y, x = to_fraction(y), to_fraction(x)
    if y < PRIME_SUM_MIN_Y:
        raise ValueError("needs y >= 1423")
    ly, lx = ri_log(y), ri_log(x)
    return ((x - y) / (2 * ly) + (x - y) / (2 * lx) + 2 * error_majorant(x) / ly).hi


def prime_count_lower(y, x) -> Fraction:
    """pi(x) - pi(y) >= (1 - 2/sqrt y)(x-y)/log((x+y)/2) - 2E(x)/log y."""
    y, x = to_fraction(y), to_fraction(x)
    if y < PRIME_SUM_MIN_Y:
        raise ValueError("needs y >= 1423")
    return ((1 - 2 / ri_sqrt(y)) * (x - y) / ri_log((x + y) / 2) - 2 * error_majorant(x) / ri_log(y)).lo

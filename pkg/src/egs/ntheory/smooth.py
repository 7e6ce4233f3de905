"""3-smooth approximation, the kappa_L gap bounds and 3-rough counting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .interval import RationalInterval, to_fraction


@dataclass(frozen=True)
class SmoothDecomposition:
    value: int
    n: int  # exponent of 2
    m: int  # exponent of 3
    anchor_a: int = 0  # exponent of 12 split off in anchored mode


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _plain_ceiling(x: Fraction) -> tuple[int, int, int]:
    best = None
    m = 0
    p3 = 1
    while True:
        c = _ceil_frac(x / p3)
        n = max(0, (c - 1).bit_length())
        v = (1 << n) * p3
        if best is None or v < best[0]:
            best = (v, n, m)
        if p3 >= x:
            break
        m += 1
        p3 *= 3
    return best


def smooth_ceiling(x, anchor_L=None) -> SmoothDecomposition:
    """Least number 2^n 3^m that is >= x.

    With ``anchor_L`` the anchored variant 12^a * ceil(x / 12^a) is returned,
    where a is the largest integer with 12^a <= x / L.
    """
    x = to_fraction(x)
    if x < 1:
        raise ValueError("smooth_ceiling needs x >= 1")
    if anchor_L is None:
        v, n, m = _plain_ceiling(x)
        return SmoothDecomposition(v, n, m, 0)
    L = to_fraction(anchor_L)
    if not (1 <= L <= x):
        raise ValueError("anchored smooth_ceiling needs 1 <= L <= x")
    a = 0
    while 12 ** (a + 1) <= x / L:
        a += 1
    v, n, m = _plain_ceiling(x / 12**a)
    return SmoothDecomposition(v * 12**a, n + 2 * a, m + a, a)


def smooth_numbers_upto(limit: int) -> list[int]:
    """Sorted list of all 2^n 3^m <= limit."""
    out = []
    p3 = 1
    while p3 <= limit:
        v = p3
        while v <= limit:
            out.append(v)
            v *= 2
        p3 *= 3
    out.sort()
    return out


# Gap rows (n1, m1, n2, m2): for x >= min(2^(n1+n2), 3^(m1+m2)) / 6 the next
# 3-smooth number is within a factor max(3^m1 / 2^n1, 2^n2 / 3^m2).
KAPPA_ROWS: tuple[tuple[int, int, int, int], ...] = (
    (1, 1, 1, 0),
    (1, 1, 2, 1),
    (3, 2, 2, 1),
    (3, 2, 5, 3),
    (3, 2, 8, 5),
    (11, 7, 8, 5),
    (19, 12, 8, 5),
    (19, 12, 27, 17),
    (19, 12, 46, 29),
)


@dataclass(frozen=True)
class KappaRow:
    n1: int
    m1: int
    n2: int
    m2: int

    @property
    def threshold(self) -> Fraction:
        return Fraction(min(2 ** (self.n1 + self.n2), 3 ** (self.m1 + self.m2)), 6)

    @property
    def ratio(self) -> Fraction:
        return max(Fraction(3**self.m1, 2**self.n1), Fraction(2**self.n2, 3**self.m2))


def kappa_rows() -> list[KappaRow]:
    return [KappaRow(*r) for r in KAPPA_ROWS]


def kappa_ratio(L) -> Fraction:
    """Best certified bound on exp(kappa_L) from the gap rows."""
    L = to_fraction(L)
    usable = [r for r in kappa_rows() if r.threshold <= L]
    if not usable:
        avail = ", ".join(str(r.threshold) for r in kappa_rows())
        raise ValueError(f"L={L} below every table row; available thresholds: {avail}")
    return min(r.ratio for r in usable)


def kappa_bound(L, mode: str = "table", scan_limit=None) -> RationalInterval:
    """Enclosure of a bound on kappa_L.

    ``table``: certified upper bound log(ratio) from the best applicable row.
    ``scan``: empirical sup of log(ceil23(x)/x) over x in [L, scan_limit],
    which is only a lower bound on kappa_L.
    """
    if mode == "table":
        return RationalInterval.point(kappa_ratio(L)).log()
    if mode != "scan":
        raise ValueError("mode must be 'table' or 'scan'")
    L = to_fraction(L)
    hi = int(scan_limit if scan_limit is not None else 10**6)
    # sup over x in [L, hi] of s(x)/x is approached as x -> (previous smooth)+
    smooth = smooth_numbers_upto(3 * hi + 3)
    best = Fraction(1)
    prev = None
    for s in smooth:
        if prev is not None and s >= L and prev <= hi:
            left = max(Fraction(prev), L)
            if left == prev and prev >= L:
                # x slightly above prev: ratio tends to s/prev (not attained)
                cand = Fraction(s, prev)
            else:
                cand = s / left
            best = max(best, cand)
        prev = s
        if s > hi:
            break
    return RationalInterval.point(best).log()


def rough_count(a, b) -> int:
    """Number of integers k in (a, b] with gcd(k, 6) = 1."""
    a, b = math.floor(to_fraction(a)), math.floor(to_fraction(b))
    if b < a:
        raise ValueError("need a <= b")

    def upto(x: int) -> int:
        q, r = divmod(x, 6)
        return 2 * q + (1 if r >= 1 else 0) + (1 if r >= 5 else 0)

    return upto(b) - upto(a)


def smooth_gap_ok(x, value: int) -> bool:
    """True when no 3-smooth number lies in [x, value)."""
    x = to_fraction(x)
    for s in smooth_numbers_upto(value):
        if x <= s < value:
            return False
    return True

"""Exact check of the small-prime inequality used in the asymptotic regime.

S(K') = sum_{n <= K'} (3/n) 1_{(n,6)=1} - 1/n must stay >= 0.4 for every K'.
It is checked exactly for K' <= 100; for larger K' the terms are grouped in
blocks n = 6a-1 .. 6a+4, and every prefix of such a block has positive sum
(the last two terms are negative, so the prefix minimum is the full block
or one of the first four prefixes).  Hence S(K') >= S(100) >= 0.4 once
blocks with 6a - 1 >= 101 are positive.  Combined with
sum_n (1/(n - 0.2) - 1/n) < 0.4, this gives the version with 1/(n - 0.2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

KB_GRID = 100
KB_THRESHOLD = Fraction(2, 5)
SHIFT = Fraction(1, 5)


def kb_term(n: int) -> Fraction:
    return (Fraction(3, n) if n % 2 and n % 3 else Fraction(0)) - Fraction(1, n)


def kb_shifted_term(n: int) -> Fraction:
    return (Fraction(3, n) if n % 2 and n % 3 else Fraction(0)) - 1 / (n - SHIFT)


def kb_series(K_max: int, shifted: bool = False) -> list[Fraction]:
    """Partial sums S(1..K_max), exact."""
    term = kb_shifted_term if shifted else kb_term
    out, s = [], Fraction(0)
    for n in range(1, K_max + 1):
        s += term(n)
        out.append(s)
    return out


def block_prefix_sums(a: int) -> list[Fraction]:
    s, out = Fraction(0), []
    for n in range(6 * a - 1, 6 * a + 5):
        s += kb_term(n)
        out.append(s)
    return out


def shift_series_bound(M: int = 10**4) -> tuple[Fraction, Fraction]:
    """Enclosure of sum_{n>=1} (1/(n - 0.2) - 1/n) = digamma(1) - digamma(0.8).

    Partial sum to M plus the telescoping tail bound
    0.2/((n - 0.2)(n - 1.2)) = 0.2 (1/(n - 1.2) - 1/(n - 0.2)), summing to 0.2/(M - 0.2).
    """
    s = sum((1 / (n - SHIFT) - Fraction(1, n) for n in range(1, M + 1)), Fraction(0))
    return s, s + SHIFT / (M + 1 - Fraction(6, 5))


@dataclass
class KBReport:
    passed: bool
    grid_min: Fraction
    grid_argmin: int
    blocks_checked: int
    shift_sum: tuple
    digamma_float: float
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


def kb_check(K_max: int = 6 * 10**4) -> KBReport:
    """Exact grid check for K' <= 100 and prefix positivity of blocks 2 <= a <= K_max/6.

    Blocks a >= 17 start at n = 101, so together with the grid they give
    S(K') >= 0.4 for every K' <= 6 (K_max // 6) + 4.
    """
    if K_max < 1:
        raise ValueError("K_max must be at least 1")
    failures = []
    S = kb_series(KB_GRID)
    k = min(range(KB_GRID), key=lambda i: S[i])
    for i, v in enumerate(S, 1):
        if v < KB_THRESHOLD:
            failures.append(f"S({i}) = {float(v):.6f} < 0.4")
    checked = 0
    for a in range(2, K_max // 6 + 1):
        if min(block_prefix_sums(a)) <= 0:
            failures.append(f"block a={a} has a non-positive prefix sum")
            if len(failures) > 20:
                break
        checked += 1
    if K_max // 6 < (KB_GRID + 2) // 6:
        failures.append("blocks up to n = 101 are needed to extend the grid")
    lo, hi = shift_series_bound()
    if not hi < KB_THRESHOLD:
        failures.append("shifted series bound is not below 0.4")
    dg = float(mpmath.digamma(1) - mpmath.digamma(mpmath.mpf(4) / 5))
    return KBReport(not failures, S[k], k + 1, checked, (lo, hi), dg, failures)

"""Explicit initial multiset for small N, used to test the ledger bounds.

The multiset consists of the 3-rough integers in (t, t(1 + sigma)], each A
times.  Its excess per N and the exact values of A_p and B_p are measured
directly from their definitions; for large N only the ledger is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..ntheory.interval import RationalInterval, ri_log, ri_sum
from ..ntheory.primes import ResourceLimitError, factorize, sieve_primes
from .params import RepairParams

MATERIALIZE_LIMIT = 10**7


@dataclass
class Measured:
    N: int
    t: Fraction
    excess_per_N: RationalInterval
    A: dict = field(default_factory=dict)  # p -> Fraction
    B: dict = field(default_factory=dict)


def initial_multiset(N: int, t: Fraction, A: int, sigma: Fraction) -> list[tuple[int, int]]:
    """(element, multiplicity) for the 3-rough n in (t, t(1 + sigma)]."""
    lo, hi = math.floor(t), math.floor(t * (1 + sigma))
    return [(n, A) for n in range(lo + 1, hi + 1) if n % 2 and n % 3]


def measure(P: RepairParams, N: int | None = None) -> Measured:
    """Exact A_p, B_p and the initial excess at one N (N <= 10^7)."""
    N = P.N_lo if N is None else N
    if N > MATERIALIZE_LIMIT:
        raise ResourceLimitError(f"materializing needs N <= {MATERIALIZE_LIMIT}")
    t = P.ratio * N
    K = P.K
    table = sieve_primes(max(N, 2))
    elems = initial_multiset(N, t, P.A, P.sigma)
    lt = ri_log(t)
    excess = ri_sum((ri_log(n) - lt) * c for n, c in elems) / N
    big = t / K
    A_cnt: dict[int, Fraction] = {}
    for n, c in elems:
        f = factorize(n)
        for p in f:
            if p > big:
                m = n // p
                for q, e in factorize(m).items():
                    A_cnt[q] = A_cnt.get(q, Fraction(0)) + Fraction(e * c, N)
                break
    B_cnt: dict[int, Fraction] = {}
    for m in range(1, K + 1):
        lo = t / m
        hi = None if m == 1 else t / (m - 1)
        # primes p with lo <= p < hi and p <= N (larger p contribute 0)
        start = math.ceil(lo)
        stop = N if hi is None else min(N, math.ceil(hi) - 1)
        if stop < start:
            continue
        ps = table.primes_in(start - 1, stop)
        s = sum(N // int(p) for p in ps)
        for q, e in factorize(m).items():
            B_cnt[q] = B_cnt.get(q, Fraction(0)) + Fraction(e * s, N)
    return Measured(N, t, excess, A_cnt, B_cnt)

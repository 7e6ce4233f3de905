"""Downsets of naturals, the classes A_{d,D} and their densities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..ntheory.primes import ResourceLimitError, factorize, sieve_primes

# a_count switches from a period table to a direct sieve above this period
PERIOD_LIMIT = 10**6
DIRECT_LIMIT = 5 * 10**7


class DownsetError(ValueError):
    """Raised when a set violates one of the downset axioms."""


def largest_prime_factor(d: int) -> int:
    """P_+(d), with P_+(1) = 1."""
    return max(factorize(d)) if d > 1 else 1


def _prev_primes(limit: int) -> list[int]:
    return [int(p) for p in sieve_primes(max(limit, 2)).primes_in(1, limit)] if limit >= 2 else []


def check_downset(D) -> frozenset[int]:
    """Validate the three axioms and return D as a frozenset."""
    S = frozenset(int(d) for d in D)
    if any(d < 1 for d in S):
        raise DownsetError(f"element {min(S)} is not a natural number")
    if 1 not in S:
        raise DownsetError("1 is missing")
    for d in sorted(S):
        f = factorize(d)
        for p in f:
            if d // p not in S:
                raise DownsetError(f"{d} is present but its divisor {d // p} is not")
            for q in _prev_primes(p - 1):
                if (d // p) * q not in S:
                    raise DownsetError(f"{d} = {p}*{d // p} is present but {q}*{d // p} is not")
    return S


@dataclass(frozen=True)
class Downset:
    """A validated downset; construction raises DownsetError on violations."""

    elements: frozenset

    def __init__(self, elements):
        object.__setattr__(self, "elements", check_downset(elements))

    def __iter__(self):
        return iter(sorted(self.elements))

    def __len__(self):
        return len(self.elements)

    def __contains__(self, d):
        return d in self.elements

    @property
    def primes(self) -> list[int]:
        return sorted(d for d in self.elements if d > 1 and factorize(d) == {d: 1})

    def defining_primes(self, d: int) -> tuple[int, ...]:
        """Primes p with p < P_+(d) or p*d in D; A_{d,D} avoids exactly these."""
        if d not in self.elements:
            raise KeyError(d)
        top = largest_prime_factor(d)
        return tuple(p for p in _prev_primes(max(top - 1, max(self.elements) // d))
                     if p < top or p * d in self.elements)


@dataclass
class DensityTable:
    downset: Downset
    sigma: dict = field(default_factory=dict)  # d -> Fraction
    defining: dict = field(default_factory=dict)  # d -> tuple of primes

    def identity_sum(self) -> Fraction:
        return sum((s / d for d, s in self.sigma.items()), Fraction(0))


@lru_cache(maxsize=64)
def _analyze(S: frozenset) -> DensityTable:
    D = Downset(S)
    table = DensityTable(D)
    # defining sets are prefixes of the primes, so sigma is a prefix product
    top = max(S)
    plist = _prev_primes(top)
    prefix = [Fraction(1)]
    for p in plist:
        prefix.append(prefix[-1] * Fraction(p - 1, p))
    for d in D:
        P = D.defining_primes(d)
        if P != tuple(plist[: len(P)]):
            raise AssertionError(f"defining primes of {d} are not a prime prefix")
        table.defining[d] = P
        table.sigma[d] = prefix[len(P)]
    if table.identity_sum() != 1:
        raise AssertionError("density identity sum_d sigma_d / d = 1 failed")
    return table


def downset_analyze(D) -> DensityTable:
    """Validate D and compute every density sigma_{d,D} exactly."""
    return _analyze(frozenset(int(d) for d in (D.elements if isinstance(D, Downset) else D)))


def _period_table(primes: tuple[int, ...]) -> np.ndarray:
    """Prefix counts c[x] = #{1 <= n <= x coprime to primes}, x in [0, P]."""
    P = math.prod(primes)
    keep = np.ones(P + 1, dtype=bool)
    keep[0] = False
    for p in primes:
        keep[::p] = False
    return np.cumsum(keep)


@lru_cache(maxsize=256)
def _cached_period(primes: tuple[int, ...]) -> np.ndarray:
    return _period_table(primes)


def rough_count_upto(primes: tuple[int, ...], x) -> int:
    """#{1 <= n <= x : n has no prime factor in primes}."""
    X = math.floor(Fraction(x)) if not isinstance(x, int) else x
    if X <= 0:
        return 0
    if not primes:
        return X
    P = math.prod(primes)
    if P <= PERIOD_LIMIT:
        c = _cached_period(tuple(primes))
        q, r = divmod(X, P)
        return int(q * c[P] + c[r])
    if X > DIRECT_LIMIT:
        raise ResourceLimitError(f"rough count up to {X} with period {P} exceeds the direct limit")
    keep = np.ones(X + 1, dtype=bool)
    keep[0] = False
    for p in primes:
        if p > X:
            break
        keep[::p] = False
    return int(keep.sum())


def rough_count_array(primes: tuple[int, ...], X: np.ndarray) -> np.ndarray:
    """Vectorized rough_count_upto for an int64 array of nonnegative bounds."""
    X = np.asarray(X, dtype=np.int64)
    if not primes:
        return X.copy()
    P = math.prod(primes)
    if P > PERIOD_LIMIT:
        raise ResourceLimitError("vectorized rough counts need a small period")
    c = _cached_period(tuple(primes)).astype(np.int64)
    q, r = np.divmod(X, P)
    return q * c[P] + c[r]


def a_count(d: int, D, x) -> int:
    """|A_{d,D} intersected with [1, x]| by exact counting."""
    table = downset_analyze(D)
    if d not in table.sigma:
        raise KeyError(f"{d} is not in the downset")
    return rough_count_upto(table.defining[d], x)


def rough_deviation_sup(primes: tuple[int, ...]) -> Fraction:
    """sup over real x >= 0 of |#{n <= x coprime to primes} - x * prod(1 - 1/p)|.

    The deviation is periodic with period prod(primes); on each step it is
    extremal at an element m (value k - m*s) or just below it (k - 1 - m*s).
    """
    P = math.prod(primes)
    s = math.prod((Fraction(p - 1, p) for p in primes), start=Fraction(1))
    best = Fraction(0)
    k = 0
    for m in range(1, P + 1):
        if all(m % p for p in primes):
            k += 1
            best = max(best, abs(k - m * s), abs(k - 1 - m * s))
    return best

"""Segmented prime sieve, prime counting and factorial valuations."""

from __future__ import annotations

import math
import os
from bisect import bisect_right

import numpy as np

from .._accel import kernel

DEFAULT_SIEVE_CEILING = 10**8
SEGMENT = 1 << 22


class ResourceLimitError(RuntimeError):
    """A requested size exceeds the configured ceiling."""


def sieve_ceiling() -> int:
    raw = os.environ.get("EGS_SIEVE_LIMIT")
    return int(float(raw)) if raw else DEFAULT_SIEVE_CEILING


@kernel
def _mark_segment(lo, hi, base_primes, out):
    # out[i] == 1  <=>  lo + i is prime (lo >= 2)
    n = hi - lo
    for i in range(n):
        out[i] = 1
    for k in range(base_primes.shape[0]):
        p = base_primes[k]
        if p * p >= hi:
            break
        start = ((lo + p - 1) // p) * p
        if start < p * p:
            start = p * p
        for j in range(start - lo, n, p):
            out[j] = 0


def _small_primes(n: int) -> np.ndarray:
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


class PrimeTable:
    """All primes up to ``limit`` with O(log) prime counting.

    Immutable after construction and safe to share between threads.
    """

    def __init__(self, limit: int):
        limit = int(limit)
        if limit < 2:
            raise ValueError("sieve limit must be at least 2")
        if limit > sieve_ceiling():
            raise ResourceLimitError(
                f"sieve limit {limit} exceeds ceiling {sieve_ceiling()} (set EGS_SIEVE_LIMIT to raise it)"
            )
        self.limit = limit
        base = _small_primes(math.isqrt(limit) + 1)
        chunks = [base[base <= limit]]
        lo = int(base[-1]) + 1 if base.size else 2
        buf = np.empty(SEGMENT, dtype=np.uint8)
        while lo <= limit:
            hi = min(lo + SEGMENT, limit + 1)
            _mark_segment(lo, hi, base, buf)
            chunks.append(np.flatnonzero(buf[: hi - lo]).astype(np.int64) + lo)
            lo = hi
        self.primes = np.concatenate(chunks)
        self.primes.setflags(write=False)
        self._list = None

    def __len__(self) -> int:
        return int(self.primes.shape[0])

    def pi(self, x) -> int:
        """Number of primes <= x (x real, x <= limit)."""
        if x < 2:
            return 0
        xi = math.floor(x)
        if xi > self.limit:
            raise ValueError(f"pi({xi}) beyond sieve limit {self.limit}")
        return int(np.searchsorted(self.primes, xi, side="right"))

    def pi_array(self, xs) -> np.ndarray:
        xs = np.floor(np.asarray(xs)).astype(np.int64)
        return np.searchsorted(self.primes, xs, side="right")

    def primes_in(self, lo, hi) -> np.ndarray:
        """Primes p with lo < p <= hi."""
        return self.primes[self.pi(lo) : self.pi(hi)]

    def is_prime(self, n: int) -> bool:
        if n < 2 or n > self.limit:
            if n > self.limit:
                raise ValueError("beyond sieve limit")
            return False
        i = self.pi(n)
        return i > 0 and int(self.primes[i - 1]) == n

    def as_list(self) -> list[int]:
        if self._list is None:
            self._list = self.primes.tolist()
        return self._list


_CACHE: dict[int, PrimeTable] = {}


def sieve_primes(limit: int) -> PrimeTable:
    """Cached PrimeTable covering at least ``limit``."""
    for lim, table in _CACHE.items():
        if lim >= limit:
            return table
    table = PrimeTable(limit)
    _CACHE.clear()
    _CACHE[table.limit] = table
    return table


def is_prime_trial(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@kernel
def _spf_fill(n, spf):
    for i in range(2, n + 1):
        if spf[i] == 0:
            spf[i] = i
            if i * i <= n:
                for j in range(i * i, n + 1, i):
                    if spf[j] == 0:
                        spf[j] = i


def smallest_factor_table(n: int) -> np.ndarray:
    """spf[k] = smallest prime factor of k for 2 <= k <= n."""
    spf = np.zeros(n + 1, dtype=np.int64)
    _spf_fill(n, spf)
    return spf


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization (small n)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def valuation(n: int, p: int) -> int:
    k = 0
    while n % p == 0 and n:
        n //= p
        k += 1
    return k


def legendre_valuation(N: int, p: int) -> int:
    """nu_p(N!) = sum_j floor(N / p^j)."""
    total = 0
    q = p
    while q <= N:
        total += N // q
        q *= p
    return total


def digit_sum(N: int, p: int) -> int:
    s = 0
    while N:
        s += N % p
        N //= p
    return s


def legendre_by_digits(N: int, p: int) -> int:
    """nu_p(N!) = (N - s_p(N)) / (p - 1)."""
    return (N - digit_sum(N, p)) // (p - 1)


@kernel
def _factorial_valuations(N, primes, out):
    for i in range(primes.shape[0]):
        p = primes[i]
        s = 0
        q = p
        while q <= N:
            s += N // q
            if q > N // p:
                break
            q *= p
        out[i] = s


def factorial_valuations(N: int, primes: np.ndarray) -> np.ndarray:
    """Vector of nu_p(N!) for each p in ``primes``."""
    primes = np.asarray(primes, dtype=np.int64)
    out = np.zeros(primes.shape[0], dtype=np.int64)
    _factorial_valuations(N, primes, out)
    return out


class FactorialValuation:
    """nu_p(N!) for all primes p <= N."""

    def __init__(self, N: int, table: PrimeTable | None = None):
        self.N = N
        table = table or sieve_primes(max(N, 2))
        self.primes = table.primes[: table.pi(N)]
        self.values = factorial_valuations(N, self.primes)
        self._index = {int(p): i for i, p in enumerate(self.primes.tolist())} if N < 10**6 else None

    def valuation(self, p: int) -> int:
        if p > self.N:
            return 0
        if self._index is not None:
            i = self._index.get(p)
            return 0 if i is None else int(self.values[i])
        i = bisect_right(self.primes, p) - 1
        if i < 0 or int(self.primes[i]) != p:
            return 0
        return int(self.values[i])

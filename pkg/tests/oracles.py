"""Slow, independent reference implementations used only by the tests."""

from __future__ import annotations

import math
from functools import lru_cache


def trial_primes(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if all(p % q for q in range(2, math.isqrt(p) + 1))]


def factor(n: int) -> dict[int, int]:
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def factorial_exponents(N: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for n in range(2, N + 1):
        for p, e in factor(n).items():
            out[p] = out.get(p, 0) + e
    return out


def minimal_admissible(N: int, t: int) -> list[int]:
    """Divisors j >= t of N! with no proper divisor >= t, by direct scan.

    Such j = p m with p its least prime and m < t, so j <= (t - 1) N.
    """
    caps = factorial_exponents(N)
    out = []
    for j in range(t, max(t, (t - 1) * N) + 1):
        f = factor(j)
        if any(caps.get(p, 0) < e for p, e in f.items()):
            continue
        if all(d < t for d in range(2, j) if j % d == 0):
            out.append(j)
    return out


def brute_M(N: int, t: int) -> int:
    """Largest t-admissible subfactorization of N! (t >= 2) by exhaustive search."""
    if t < 2:
        raise ValueError("t >= 2 (factors equal to 1 are free)")
    caps = factorial_exponents(N)
    primes = sorted(caps)
    cols = [tuple(factor(j).get(p, 0) for p in primes) for j in minimal_admissible(N, t)]

    @lru_cache(maxsize=None)
    def best(i: int, cap: tuple) -> int:
        if i == len(cols):
            return 0
        c = cols[i]
        res = best(i + 1, cap)
        k = 1
        while True:
            rest = tuple(a - k * b for a, b in zip(cap, c))
            if min(rest) < 0:
                break
            res = max(res, k + best(i + 1, rest))
            k += 1
        return res

    return best(0, tuple(caps[p] for p in primes))


def brute_t(N: int) -> int:
    """t(N) from the brute-force M oracle."""
    if N <= 3:
        return 1
    t = 2
    while t + 1 <= N and brute_M(N, t + 1) >= N:
        t += 1
    return t if brute_M(N, 2) >= N else 1


def rough_brute(a: int, b: int) -> int:
    return sum(1 for k in range(a + 1, b + 1) if math.gcd(k, 6) == 1)


def smooth_upto(n: int) -> list[int]:
    return sorted(2**i * 3**j for i in range(n.bit_length() + 1) for j in range(40) if 2**i * 3**j <= n)

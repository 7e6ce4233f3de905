import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from egs.ntheory import (
    RI,
    ResourceLimitError,
    error_majorant,
    factorial_log_bounds,
    factorize,
    kappa_bound,
    legendre_by_digits,
    legendre_valuation,
    pi_bounds,
    prime_count_lower,
    prime_count_upper,
    ri_log,
    rough_count,
    sieve_primes,
    smooth_ceiling,
)
from egs.ntheory.primes import PrimeTable
from oracles import factor, rough_brute, smooth_upto, trial_primes


def test_sieve_small_examples():
    T = sieve_primes(10)
    assert T.primes_in(1, 10).tolist() == [2, 3, 5, 7]
    assert T.pi(10) == 4


def test_sieve_matches_trial_division():
    T = sieve_primes(10**4)
    assert T.primes_in(1, 10**4).tolist() == trial_primes(10**4)
    assert T.pi(10**4) == 1229
    assert T.pi(599) == 109


def test_sieve_ceiling(monkeypatch):
    monkeypatch.setenv("EGS_SIEVE_LIMIT", "1000")
    with pytest.raises(ResourceLimitError):
        PrimeTable(5000)


def test_legendre_examples():
    assert legendre_valuation(9, 3) == 4
    assert legendre_valuation(10, 2) == 8
    assert legendre_valuation(9, 11) == 0


@given(st.integers(1, 10**6), st.sampled_from([2, 3, 5, 7, 11, 13, 101, 997]))
def test_legendre_two_routes(N, p):
    assert legendre_valuation(N, p) == legendre_by_digits(N, p)


@given(st.integers(1, 400), st.sampled_from([2, 3, 5, 7, 11]))
def test_legendre_against_product(N, p):
    assert legendre_valuation(N, p) == sum(factor(n).get(p, 0) for n in range(2, N + 1))


@given(st.integers(2, 10**7))
def test_factorize_product(n):
    f = factorize(n)
    assert math.prod(p**e for p, e in f.items()) == n
    assert f == factor(n)


def test_factorial_log_bounds_examples():
    assert factorial_log_bounds(1).contains(0)
    assert factorial_log_bounds(9).contains(Fraction(12801827480081469611, 10**18))
    exact = math.fsum(math.log(n) for n in range(1, 10**5 + 1))
    b = factorial_log_bounds(10**5)
    assert float(b.lo) - 1e-6 <= exact <= float(b.hi) + 1e-6


@given(st.integers(10, 10**6))
@settings(max_examples=50)
def test_factorial_log_bounds_width(N):
    assert factorial_log_bounds(N).width <= Fraction(1, 12 * N) + Fraction(1, 10**12)


def test_rough_count_examples():
    assert rough_count(0, 6) == 2
    assert rough_count(0, 12) == 4
    assert rough_count(10, 100) == 30


def test_rough_count_exhaustive_small():
    # every pair a <= b <= 300 (the wider random check below reaches 10^4)
    pref = [0]
    for k in range(1, 301):
        pref.append(pref[-1] + (math.gcd(k, 6) == 1))
    for a in range(301):
        for b in range(a, 301):
            assert rough_count(a, b) == pref[b] - pref[a]


@given(st.integers(0, 10**4), st.integers(0, 10**4))
def test_rough_count_random_and_deviation(a, b):
    a, b = min(a, b), max(a, b)
    c = rough_count(a, b)
    assert c == rough_brute(a, b)
    assert abs(c - Fraction(b - a, 3)) <= Fraction(4, 3)


@given(st.fractions(Fraction(0), Fraction(10**4)), st.fractions(Fraction(0), Fraction(10**4)))
def test_rough_deviation_real_endpoints(a, b):
    a, b = min(a, b), max(a, b)
    assert abs(rough_count(a, b) - (b - a) / 3) <= Fraction(4, 3)


def test_rough_deviation_full_period():
    # |#{k <= x : (k,6)=1} - x/3| <= 2/3 over one period, hence 4/3 on intervals
    from egs.rearrange import rough_deviation_sup

    assert rough_deviation_sup((2, 3)) <= Fraction(2, 3)
    worst = Fraction(0)
    k = 0
    for m in range(1, 7):
        for x in (Fraction(m) - Fraction(1, 10**9), Fraction(m)):
            cnt = sum(1 for j in range(1, math.floor(x) + 1) if math.gcd(j, 6) == 1)
            worst = max(worst, abs(cnt - x / 3))
    assert worst <= rough_deviation_sup((2, 3))


def test_smooth_ceiling_examples():
    assert smooth_ceiling(5).value == 6
    assert smooth_ceiling(10).value == 12
    assert smooth_ceiling(12).value == 12
    s = smooth_ceiling(100, anchor_L=Fraction(9, 2))
    smooth = smooth_upto(400)
    a = s.anchor_a
    assert 12**a <= Fraction(100) / Fraction(9, 2) < 12 ** (a + 1)
    assert s.value == 12**a * min(v for v in smooth if v * 12**a >= 100)


@given(st.fractions(Fraction(1), Fraction(10**9), max_denominator=1000))
@settings(max_examples=300)
def test_smooth_ceiling_gap(x):
    s = smooth_ceiling(x)
    assert s.value == 2**s.n * 3**s.m
    assert s.value >= x
    assert not [v for v in smooth_upto(s.value - 1) if v >= x]


def test_smooth_ceiling_exhaustive_integers():
    smooth = smooth_upto(3 * 10**4)
    j = 0
    for x in range(1, 10**4 + 1):
        while smooth[j] < x:
            j += 1
        assert smooth_ceiling(x).value == smooth[j]


@given(st.fractions(Fraction(9, 2), Fraction(10**8), max_denominator=100), st.sampled_from([Fraction(9, 2), Fraction(81, 2)]))
@settings(max_examples=200)
def test_kappa_bounds_gap(x, L):
    assume(x >= L)
    s = smooth_ceiling(x)
    assert ri_log(Fraction(s.value) / x).hi <= kappa_bound(L).hi
    a = smooth_ceiling(x, anchor_L=L)
    assert x <= a.value
    assert ri_log(Fraction(a.value) / x).hi <= kappa_bound(L).hi


def test_kappa_table_values():
    assert kappa_bound(Fraction(9, 2)).contains(ri_log(Fraction(4, 3)).mid)
    assert abs(float(kappa_bound(Fraction(81, 2)).hi) - math.log(32 / 27)) < 1e-12
    scan = kappa_bound(Fraction(9, 2), mode="scan", scan_limit=10**6)
    assert abs(float(scan.hi) - math.log(4 / 3)) < 1e-12
    with pytest.raises(ValueError):
        kappa_bound(Fraction(1, 4))


def test_pi_bounds_examples():
    assert pi_bounds(10**4).contains(1229)
    assert pi_bounds(10**6).contains(78498)
    b = pi_bounds(2)
    assert b.lo == 1 and b.hi >= 1


def test_pi_bounds_containment_up_to_1e7(table):
    rng = random.Random(7)
    xs = sorted(set([rng.randrange(2, 10**7) for _ in range(1500)] + list(range(2, 3000, 7)) + [599, 600, 10**7]))
    for x in xs:
        b = pi_bounds(x)
        assert b.lo <= table.pi(x) <= b.hi, x
    # non-integer arguments
    for _ in range(200):
        x = Fraction(rng.randrange(2 * 10**3, 10**9), 100)
        assert pi_bounds(x).contains(table.pi(math.floor(x)))


def test_prime_count_interval_bounds(table):
    assert prime_count_lower(10**4, 10**6) <= 77119 <= prime_count_upper(10**4, 10**6)
    rng = random.Random(3)
    for _ in range(200):
        y = rng.randrange(1423, 5 * 10**6)
        x = rng.randrange(y, 10**7)
        true = table.pi(x) - table.pi(y)
        assert prime_count_lower(y, x) <= true <= prime_count_upper(y, x)
    with pytest.raises(ValueError):
        prime_count_upper(100, 1000)


def test_error_majorant_monotone():
    xs = [10**k for k in range(2, 16)] + [3 * 10**k for k in range(2, 15)]
    xs.sort()
    vals = [error_majorant(x) for x in xs]
    for (x0, v0), (x1, v1) in zip(zip(xs, vals), zip(xs[1:], vals[1:])):
        assert v0.hi <= v1.lo
        assert (v1 / x1).hi <= (v0 / x0).lo


@given(st.fractions(Fraction(1, 100), Fraction(10**6)), st.fractions(Fraction(1, 100), Fraction(10**6)))
@settings(max_examples=100)
def test_interval_log_enclosure(a, b):
    la, lb = ri_log(a), ri_log(b)
    assert la.lo <= Fraction(math.log(a)) + Fraction(1, 10**9) and la.hi >= Fraction(math.log(a)) - Fraction(1, 10**9)
    s = la + lb
    assert s.lo <= ri_log(a * b).hi and ri_log(a * b).lo <= s.hi
    assert la.width < Fraction(1, 10**12)


def test_interval_arith_contains_products():
    x = RI(Fraction(-1), Fraction(2))
    y = RI(Fraction(3), Fraction(5))
    p = x * y
    for a in (Fraction(-1), Fraction(0), Fraction(2)):
        for b in (Fraction(3), Fraction(4), Fraction(5)):
            assert p.contains(a * b)

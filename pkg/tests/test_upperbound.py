import math
from fractions import Fraction

import mpmath
from hypothesis import given, settings, strategies as st

from egs.greedy import greedy_count
from egs.linprog import t_exact
from egs.ntheory import sieve_primes
from egs.ntheory.interval import ri_e
from egs.upperbound import (
    asymptotic_offset,
    asymptotic_reference,
    best_upper,
    f_alpha,
    tne_csv,
    tne_scan,
    trivial_upper,
    upper_crit_test,
)


def test_f_alpha_examples():
    assert f_alpha(1, Fraction(1, 2)).lo == f_alpha(1, Fraction(1, 2)).hi == 0
    v = f_alpha(ri_e(), 1)
    assert v.lo <= 1 <= v.hi and v.hi - v.lo < Fraction(1, 10**20)
    with mpmath.workdps(50):
        x = mpmath.mpf(3) / 10
        ref = mpmath.floor(1 / x) * mpmath.log(mpmath.ceil(1 / (3 * x)) * 3 * x)
        v = f_alpha(3, Fraction(3, 10))
        assert mpmath.mpf(v.lo.numerator) / v.lo.denominator <= ref <= mpmath.mpf(v.hi.numerator) / v.hi.denominator
        assert float(v.hi - v.lo) < 1e-15


@settings(max_examples=300, deadline=None)
@given(st.fractions(min_value=Fraction(1, 20), max_value=5, max_denominator=50),
       st.fractions(min_value=Fraction(1, 200), max_value=3, max_denominator=1000))
def test_f_alpha_envelope(alpha, x):
    v = f_alpha(alpha, x)
    assert 0 <= v.lo <= v.hi
    env = math.log1p(float(alpha * x)) / float(x)
    assert float(v.lo) <= env * (1 + 1e-12)
    assert env <= float(alpha) * (1 + 1e-12)


def test_upper_crit_examples():
    table = sieve_primes(10**5)
    assert upper_crit_test(10**5, 33669, table=table)
    assert not upper_crit_test(10**5, 33668, table=table)
    assert upper_crit_test(5000, math.ceil(5000 / math.e))
    # the criterion is too weak to be needed at (9, 4) but the definition still evaluates true
    assert upper_crit_test(9, 4)


def test_best_upper_values():
    assert best_upper(10**5) == 33668
    assert best_upper(10**6) == 342505 + 62


def test_best_upper_small():
    assert best_upper(80) < 80 / math.e + 1
    table = sieve_primes(400)
    for N in list(range(80, 161, 5)) + [200, 300, 400]:
        assert best_upper(N, table) >= t_exact(N, table=table)[0], N
        assert best_upper(N, table) <= trivial_upper(N)


def test_crit_true_implies_no_greedy_certificate():
    table = sieve_primes(10**4)
    for N in range(500, 10**4 + 1, 500):
        b = best_upper(N, table)
        for t in (b + 1, b + 2, b + 10):
            if upper_crit_test(N, t, table=table):
                assert greedy_count(N, t, table=table) < N


def test_analytic_mode_agrees():
    N = 10**6
    table = sieve_primes(N)
    hits = 0
    for t in range(342600, 360000, 1500):
        a = upper_crit_test(N, t, mode="analytic", table=table)
        e = upper_crit_test(N, t, table=table)
        if a:
            hits += 1
            assert e
    assert hits > 0


def test_tne_scan():
    rows = tne_scan(80, 5000)
    assert len(rows) == 4921
    assert all(r.passed_full and r.passed_tail for r in rows)
    first = rows[0]
    assert first.N == 80 and first.lhs_full > first.rhs
    last = rows[-1]
    assert last.N == 5000 and last.lhs_tail - last.rhs > 1
    csv_text = tne_csv(rows[:3])
    assert csv_text.splitlines()[0].startswith("N,")
    assert len(csv_text.splitlines()) == 4


def test_asymptotic_reference():
    for N in (10, 100, 10**5, 10**9):
        a, b, c = asymptotic_reference(N)
        assert a >= b >= c
    # third curve sits close to the exact column at these sizes
    assert abs(asymptotic_offset(10**5, 33642) + 69) <= 1
    assert abs(asymptotic_offset(10**6, 342505) + 619) <= 1

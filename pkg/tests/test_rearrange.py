import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from egs.ntheory import factorize
from egs.rearrange import (
    QUARTER_C,
    QUARTER_EPS,
    QUARTER_THRESHOLD,
    Downset,
    DownsetError,
    WeightTable,
    a_count,
    bundled_table,
    downset_analyze,
    format_weight_table,
    parse_weight_table,
    quarter_certificate_check,
    rough_count_upto,
    rough_deviation_sup,
    t23_bruteforce,
    t23_decide,
    t23_dp,
    t23_exact,
    verify_asym_crit,
    verify_finite_crit,
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def _addable(S, n):
    for p in factorize(n):
        if n // p not in S:
            return False
        if any(q < p and (n // p) * q not in S for q in SMALL_PRIMES):
            return False
    return True


def random_downset(rng, size):
    S = {1}
    while len(S) < size:
        cands = sorted({d * p for d in S for p in SMALL_PRIMES if d * p not in S and d * p <= 400})
        cands = [n for n in cands if _addable(S, n)]
        if not cands:
            break
        S.add(rng.choice(cands))
    return S


def test_downset_examples():
    t = downset_analyze({1, 2, 4})
    assert t.sigma == {1: Fraction(1, 2), 2: Fraction(1, 2), 4: Fraction(1)}
    t = downset_analyze({1, 2, 3, 4})
    assert t.sigma == {1: Fraction(1, 3), 2: Fraction(1, 2), 3: Fraction(1, 2), 4: Fraction(1)}
    with pytest.raises(DownsetError, match="3"):
        Downset({1, 3})
    with pytest.raises(DownsetError):
        Downset({1, 4})


def test_random_downsets_identity():
    rng = random.Random(7)
    for _ in range(100):
        S = random_downset(rng, rng.randrange(1, 31))
        t = downset_analyze(S)
        assert t.identity_sum() == 1


def test_a_count_examples():
    D = {1, 2, 3, 4}
    assert a_count(1, D, 12) == 4
    for x in (1, 7, Fraction(25, 2), 1000):
        assert a_count(4, D, x) == math.floor(x)
    assert rough_count_upto((2, 3, 5, 7), 210) == 48
    sup = rough_deviation_sup((2, 3, 5, 7))
    assert sup <= Fraction(53, 35)
    s = Fraction(48, 210)
    for x in range(0, 211):
        assert abs(rough_count_upto((2, 3, 5, 7), x) - s * x) <= Fraction(53, 35)


def test_a_count_deviation_random_x():
    # full-period sup is enumerated, so only periods up to 2*3*5*7*11*13 are used
    rng = random.Random(11)
    checked = 0
    for _ in range(5):
        S = random_downset(rng, 20)
        t = downset_analyze(S)
        small = [d for d in sorted(S) if math.prod(t.defining[d]) <= 30030]
        sups = {}
        for _ in range(200):
            d = rng.choice(small)
            x = Fraction(rng.randrange(0, 10**6), rng.randrange(1, 50))
            P = t.defining[d]
            if P not in sups:
                sups[P] = rough_deviation_sup(P)
            assert abs(a_count(d, S, x) - t.sigma[d] * x) <= sups[P]
            checked += 1
    assert checked == 1000


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=10**4), st.randoms(use_true_random=False))
def test_partition_identity(N, rnd):
    S = random_downset(rnd, rnd.randrange(1, 25))
    assert sum(a_count(d, S, Fraction(N, d)) for d in S) == N


def test_asym_three_sixteenths():
    D = (1, 2, 4)
    W = WeightTable({}, ("pow2", 0, Fraction(3, 8)))
    assert W.weight(1) == Fraction(3, 8) and W.weight(4) == Fraction(3, 32)
    assert verify_asym_crit(D, Fraction(3, 16) - Fraction(1, 1000), W)
    assert not verify_asym_crit(D, Fraction(1, 4), W)


def test_asym_one_third():
    W = bundled_table("one_third")
    assert verify_asym_crit(W.downset, W.alpha, W)


def test_finite_two_sevenths():
    W = bundled_table("two_sevenths")
    assert W.alpha == Fraction(2, 7)
    assert verify_finite_crit(W.downset, W.alpha, 8 * 10**6, W)
    assert verify_finite_crit(W.downset, W.alpha, 9 * 10**6, W)
    assert not verify_finite_crit(W.downset, W.alpha, 10**3, W)
    assert not verify_finite_crit(W.downset, W.alpha, 8 * 10**6, WeightTable({}, ("none",)))


def test_weight_table_roundtrip():
    W = bundled_table("two_sevenths")
    back = parse_weight_table(format_weight_table(W))
    assert back.explicit == W.explicit and back.tail == W.tail
    assert back.downset == W.downset and back.alpha == W.alpha


def test_t23_26244():
    assert t23_exact(26244) == 6561
    for N in (26245, 26300, 27000, 28123, 30000):
        assert not t23_decide(N, math.ceil(N / 4)).feasible


def test_t23_quarter_ratio_regime():
    # above N/4 + 1 happens below the 26244 threshold, for instance N = 39
    assert t23_exact(39) == t23_bruteforce(39) == 11
    for N in (26244, 26400, 27500, 29000, 30000):
        assert t23_exact(N) <= N / 4 + 1


def test_t23_bruteforce_small():
    for N in range(1, 21):
        assert t23_exact(N) == t23_bruteforce(N), N


def test_t23_dp_cross_check():
    rng = random.Random(3)
    for N in list(range(20, 200, 9)) + [500, 997]:
        v = t23_exact(N)
        for t in {v, v + 1, rng.randrange(1, N)}:
            assert t23_decide(N, t).feasible == t23_dp(N, t), (N, t)


def test_quarter_certificate():
    rep = quarter_certificate_check()
    assert rep.passed
    assert rep.eps == QUARTER_EPS == Fraction(218038591, 4458050224128)
    assert rep.C == QUARTER_C == Fraction(1559, 24)
    assert rep.threshold == QUARTER_THRESHOLD == 1328148
    assert not quarter_certificate_check(Fraction(1, 32), Fraction(3, 32), {1: Fraction(1, 32)}).passed

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from egs.certify import certificate_text, verify_subfactorization
from egs.greedy import (
    ChainGapError,
    GreedyConfig,
    exact_t_small,
    fast_greedy,
    greedy_count,
    greedy_subfactorization,
    hint_chain,
    read_hints,
    search_t,
    t1_exhaustive,
    write_hints,
)
from egs.linprog import t_exact
from egs.ntheory import sieve_primes

# t(N) for N <= 14 as quoted with the sequence definition
PREFIX = [1, 1, 1, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 4]


def test_nine():
    res = greedy_subfactorization(9, 3)
    assert res.count == 9
    assert sorted(res.certificate.expand()) == sorted([7, 5, 3, 3, 3, 3, 4, 4, 4])


def test_prefix_and_exact_agreement():
    for N in range(1, 80):
        g = exact_t_small(N)[0] if N > 1 else 1
        if N <= len(PREFIX):
            assert g == PREFIX[N - 1]
        assert g == t_exact(N)[0], N


@pytest.mark.parametrize("N", [1000, 5000, 20000])
def test_certificates_verify(N):
    T = sieve_primes(N)
    for t in (N // 4 + 1, N // 3, N // 3 + 5, N // 2 - 1):
        res = greedy_subfactorization(N, t, table=T)
        rep = verify_subfactorization(res.certificate, T, need_count=False)
        assert rep.accepted and rep.count == res.count


def test_fast_variant():
    N = 10**5
    res = fast_greedy(N, 33184)
    assert res.count >= N
    assert verify_subfactorization(res.certificate).accepted
    over = fast_greedy(N, 34000)
    assert over.count < N


@pytest.mark.parametrize("N", [100000, 137911, 250000, 414233, 600000, 999999])
def test_fast_and_standard_agree_at_third(N):
    t = -(-N // 3)
    assert (greedy_count(N, t) >= N) == (fast_greedy(N, t, certificate=False).count >= N)


def test_greedy_count_is_not_monotone():
    # the count can rise with t (N = 300: 295 factors at t = 96, 296 at t = 97)
    T = sieve_primes(300)
    assert greedy_count(300, 96, T) == 295
    assert greedy_count(300, 97, T) == 296


def test_greedy_count_below_exact_M():
    from egs.linprog import ip_exact

    for N in (20, 40, 60, 90):
        for t in range(2, N // 2 + 1, 3):
            assert greedy_count(N, t) <= ip_exact(N, t).lower


def test_t1_values():
    assert t1_exhaustive(10**5, threads=2) == 33572
    assert t1_exhaustive(44716) >= -(-44716 // 3)
    assert 3 * t1_exhaustive(67424) < 67424
    T = sieve_primes(100)
    best = max(t for t in range(2, 100) if greedy_count(100, t, T) >= 100)
    assert t1_exhaustive(100) == best


def test_t1_thread_independent():
    assert t1_exhaustive(20000, threads=1) == t1_exhaustive(20000, threads=4)


def test_search():
    r = search_t(10**5)
    assert 10**5 // 4 <= r.t <= 33572
    assert verify_subfactorization(r.certificate).accepted
    r = search_t(10**6)
    assert 3 * r.t >= 10**6 and verify_subfactorization(r.certificate).accepted
    assert search_t(100, strategy="bisection").t <= t1_exhaustive(100)
    with pytest.raises(ValueError):
        search_t(9)


def test_deterministic_bytes():
    a = certificate_text(greedy_subfactorization(30000, 10000, GreedyConfig(threads=1)).certificate)
    b = certificate_text(greedy_subfactorization(30000, 10000, GreedyConfig(threads=4)).certificate)
    assert a == b


def test_hint_chain(tmp_path):
    chain = hint_chain(67425, 200000, "generate")
    assert all(3 * t > N for N, t in chain)
    p = tmp_path / "hints.txt"
    write_hints(chain, p)
    assert hint_chain(67425, 200000, "verify", hints=read_hints(p)) == chain
    if len(chain) > 2:
        with pytest.raises(ChainGapError):
            hint_chain(67425, 200000, "verify", hints=chain[:1] + chain[2:])


@given(st.integers(10, 3000), st.data())
@settings(max_examples=40, deadline=None)
def test_every_certificate_verifies(N, data):
    t = data.draw(st.integers(2, N))
    res = greedy_subfactorization(N, t)
    rep = verify_subfactorization(res.certificate, need_count=False)
    assert rep.accepted and rep.count == res.count

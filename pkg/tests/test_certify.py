import io
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from egs.certify import (
    Certificate,
    CertificateFormatError,
    DualCertificate,
    certificate_from_multiset,
    certificate_io,
    certificate_text,
    read_certificate,
    verify_dual,
    verify_subfactorization,
    write_certificate,
)
from egs.greedy import greedy_subfactorization
from egs.linprog import lp_upper_value
from egs.ntheory import sieve_primes


def test_nine_examples():
    rep = verify_subfactorization(certificate_from_multiset(9, 3, [7, 5, 3, 3, 3, 3, 4, 4, 4]))
    assert rep.accepted and rep.count == 9
    rep = verify_subfactorization(certificate_from_multiset(9, 3, [3, 3, 3, 3, 4, 4, 5, 7, 8]))
    assert rep.accepted and rep.count == 9 and all(v == 0 for v in rep.surplus.values())


def test_nine_at_four_rejected():
    # every 9-element multiset of divisors of 9! that are >= 4 over-uses a prime
    rng = random.Random(1)
    divisors = [d for d in range(4, 400) if 362880 % d == 0]
    for _ in range(300):
        rep = verify_subfactorization(certificate_from_multiset(9, 4, rng.choices(divisors, k=9)))
        assert not rep.accepted


def test_structural_rejections():
    assert not verify_subfactorization(Certificate(9, 3, [(1, 2)], []), need_count=False).accepted
    bad_block = Certificate(100, 40, [], [(1, 37, 31, 1)])
    assert not verify_subfactorization(bad_block, need_count=False).accepted
    low_block = Certificate(100, 40, [], [(1, 37, 41, 1)])
    assert not verify_subfactorization(low_block, need_count=False).accepted


def test_block_count():
    T = sieve_primes(43631)
    c = Certificate(43631, 14544, [], [(1, 14544, 43631, 1)])
    assert c.count(T) == T.pi(43631) - T.pi(14543)


def test_roundtrip_and_grammar(tmp_path):
    c = certificate_from_multiset(9, 3, [7, 5, 3, 3, 3, 3, 4, 4, 4])
    p = tmp_path / "c.cert"
    certificate_io(str(p), "write", c)
    back = certificate_io(str(p))
    assert back == c
    assert certificate_text(back) == p.read_text()
    d = DualCertificate(9, 4, {2: Fraction(1, 3), 3: Fraction(1, 3)}, Fraction(5, 2))
    buf = io.StringIO()
    write_certificate(d, buf)
    assert read_certificate(io.StringIO(buf.getvalue())) == d
    assert "." not in buf.getvalue().split("\n", 1)[1]


@pytest.mark.parametrize("text", [
    "EGS-CERT v2\nN 9\nt 3\n",
    "EGS-CERT v1\nN 9\nt 3\nF 1 2.5\n",
    "EGS-CERT v1\nN 9\nt 3\nQ 1 2\n",
    "EGS-DUAL v1\nN 9\nt 4\nW 3 1/3\nW 2 1/3\n",
])
def test_parse_errors(text):
    with pytest.raises(CertificateFormatError):
        read_certificate(io.StringIO(text))


def test_dual_examples():
    T = sieve_primes(100)
    zero = DualCertificate(20, 5, {p: Fraction(0) for p in T.primes_in(1, 20).tolist()})
    assert not verify_dual(zero).accepted
    sol = lp_upper_value(9, 4)
    rep = verify_dual(sol.dual_certificate)
    assert rep.accepted and rep.value < 9
    nonmono = DualCertificate(9, 4, {2: Fraction(1), 3: Fraction(1, 2), 5: Fraction(1), 7: Fraction(1)})
    assert not verify_dual(nonmono).accepted


def _oracle_accepts(cert) -> bool:
    from oracles import factor, factorial_exponents

    caps = factorial_exponents(cert.N)
    used: dict = {}
    count = 0
    for mult, f in cert.factors:
        if f < cert.t:
            return False
        count += mult
        for p, e in factor(f).items():
            used[p] = used.get(p, 0) + mult * e
    return count >= cert.N and all(caps.get(p, 0) >= e for p, e in used.items())


def test_single_digit_mutations_match_oracle():
    """Every one-digit change to the factor data of a tight factorization of 9!
    is accepted exactly when an independent recount accepts it."""
    text = certificate_text(certificate_from_multiset(9, 3, [3, 3, 3, 3, 4, 4, 5, 7, 8]))
    lines = text.splitlines()
    rejected = 0
    for i, line in enumerate(lines):
        if not line.startswith("F "):
            continue
        for j, ch in enumerate(line):
            if not ch.isdigit():
                continue
            for d in "0123456789":
                if d == ch:
                    continue
                mutated = lines.copy()
                mutated[i] = line[:j] + d + line[j + 1:]
                try:
                    cert = read_certificate(io.StringIO("\n".join(mutated) + "\n"))
                except CertificateFormatError:
                    rejected += 1
                    continue
                ok = verify_subfactorization(cert).accepted
                assert ok == _oracle_accepts(cert), mutated[i]
                rejected += not ok
    assert rejected > 0


def test_mutation_of_greedy_certificate():
    res = greedy_subfactorization(2000, 620)
    text = certificate_text(res.certificate)
    assert verify_subfactorization(read_certificate(io.StringIO(text))).accepted
    # raising a multiplicity by the 2-surplus + 1 always over-uses the prime 2
    lines = text.splitlines()
    surplus2 = verify_subfactorization(res.certificate).surplus[2]
    i = next(k for k, l in enumerate(lines) if l.startswith("F ") and int(l.split()[2]) % 2 == 0)
    _, mult, f = lines[i].split()
    lines[i] = f"F {int(mult) + surplus2 + 1} {f}"
    assert not verify_subfactorization(read_certificate(io.StringIO("\n".join(lines) + "\n"))).accepted


@given(st.integers(20, 400), st.data())
@settings(max_examples=40, deadline=None)
def test_admissibility_monotone(N, data):
    t = data.draw(st.integers(2, N // 2))
    cert = greedy_subfactorization(N, t).certificate
    rep = verify_subfactorization(cert, need_count=False)
    assert rep.accepted
    t2 = data.draw(st.integers(1, t))
    lower = Certificate(N, t2, cert.factors, cert.blocks)
    assert verify_subfactorization(lower, need_count=False).accepted

import io
import json
import math
from fractions import Fraction

import pytest

from egs.certify import Certificate
from egs.greedy import greedy_subfactorization
from egs.repair import (
    DEFAULT_INTERVALS,
    RepairConditionError,
    accounting,
    block_prefix_sums,
    build_params,
    kb_check,
    kb_series,
    ledger,
    measure,
    read_intervals,
    shift_series_bound,
    verify_intervals,
    verify_range,
    verify_repair,
)


def _digits_match(x, printed):
    """x rounded to the printed number of decimals is within one unit of the printed value."""
    d = len(printed.split(".")[1])
    return abs(round(float(x), d) - float(printed)) <= 10**-d * (1 + 1e-9)


def _close(iv, x, tol=Fraction(1, 10**4)):
    return iv.lo - tol <= x <= iv.hi + tol


def test_accounting_examples():
    v = accounting([3, 4, 5, 5], 3, N=5)
    assert v.surplus == {2: 1, 5: -1}
    assert v.deficits == {5: 1} and not v.is_subfactorization
    assert _close(v.excess, Fraction(13093, 10**4))
    v = accounting([2, 3, 4, 5], 3, N=5)
    assert v.is_factorization
    assert _close(v.excess, Fraction(3930, 10**4))
    for N in (1, 7, 30, 100):
        v = accounting(range(1, N + 1), 1, N=N)
        assert v.is_factorization
        assert v.excess.contains(0) or v.excess.lo <= v.budget.hi and v.budget.lo <= v.excess.hi


def test_accounting_on_greedy_certificate():
    cert = greedy_subfactorization(3000, 900).certificate
    v = accounting(cert, 900)
    assert v.is_subfactorization and v.admissible
    assert v.identity_residual().width <= Fraction(1, 10**12)


def test_params_at_1e11():
    P = build_params(10**11)
    assert P.sigma == Fraction(9, 189)
    assert _close(P.gamma2, Fraction(1423165, 10**7), Fraction(1, 10**7))
    assert _close(P.gamma3, Fraction(1059116, 10**7), Fraction(1, 10**7))
    assert P.kappa_2star <= Fraction(6830101, 10**6) + Fraction(1, 10**6)
    assert P.gap_primes() == []


def test_condition_rejections():
    with pytest.raises(RepairConditionError, match="K >= 5"):
        build_params(10**11, K=4)
    with pytest.raises(RepairConditionError):
        build_params(10**5)


def test_ledger_matching_constants():
    L = ledger(build_params(10**11))
    assert _digits_match(L.delta, "0.0986122")
    assert _digits_match(L.ratio(1), "0.241447")
    assert _digits_match(L.ratio(3), "0.051574")
    assert L.ratio(4) == 0 and L.alphas["alpha_4"].upper == 0
    assert _digits_match(L.alphas["alpha_3"].upper, "0.361121")
    assert L.alphas["alpha_1"].upper == 0
    assert all(e.upper >= 0 for e in L.entries())
    assert L.delta_sum <= L.delta and L.alpha_sum <= 1


def test_ledger_antitone():
    for N in (10**11, 10**13, 10**20):
        a, b = ledger(build_params(N)), ledger(build_params(2 * N))
        for name, e in {**a.deltas, **a.alphas}.items():
            if e.monotone:
                other = b.deltas.get(name) or b.alphas[name]
                assert other.upper <= e.upper, (N, name)


def test_default_intervals_pass():
    reps = verify_intervals()
    assert len(reps) == len(DEFAULT_INTERVALS)
    assert all(reps)


def test_subrange_soundness():
    assert verify_range((10**11, 5 * 10**11))
    for lo, hi in ((10**11, 2 * 10**11), (2 * 10**11, 3 * 10**11), (4 * 10**11, 5 * 10**11)):
        assert verify_range((lo, hi))


def test_small_n_fails():
    rep = verify_range(10**6)
    assert not rep
    assert rep.reason


def test_subdivision_terminates():
    reps = verify_intervals([(5 * 10**10, 10**11)], subdivide=True, min_ratio=2)
    assert [r.passed for r in reps] == [False, True]
    assert reps[0].N_lo == 5 * 10**10 and reps[-1].N_hi == 10**11
    assert reps[0].N_hi == reps[1].N_lo


def test_ledger_soundness_at_1e5():
    P = build_params(10**5, A=20, K=20)
    L = ledger(P)
    M = measure(P)
    assert M.excess_per_N.hi <= L.deltas["delta_1"].upper
    for p, v in M.A.items():
        assert L.A_bounds[p].lo <= v <= L.A_bounds[p].hi, p
    for p, v in M.B.items():
        assert L.B_bounds[p].lo <= v <= L.B_bounds[p].hi, p


def test_ledger_json():
    L = ledger(build_params(10**11))
    d = json.loads(L.to_json())
    names = [e["name"] for e in d["deltas"]] + [e["name"] for e in d["alphas"]]
    assert names == [f"delta_{i}" for i in range(1, 9)] + [f"alpha_{i}" for i in range(1, 8)]
    assert all(e["provenance"] for e in d["deltas"])
    assert Fraction(d["deltas"][0]["upper_decimal"]) >= L.deltas["delta_1"].upper
    assert Fraction(d["delta_lower"]["decimal"]) <= L.delta


def test_read_intervals():
    text = "# ranges\nI 1e11 5e11\nI 5e11 inf\n"
    assert read_intervals(io.StringIO(text)) == [(10**11, 5 * 10**11), (5 * 10**11, None)]
    with pytest.raises(ValueError):
        read_intervals(io.StringIO("J 1 2\n"))


def test_kb():
    S = kb_series(100)
    assert S[0] == 2
    assert min(S) >= Fraction(2, 5)
    assert min(block_prefix_sums(2)) > 0
    rep = kb_check(6 * 10**4)
    assert rep.passed and rep.blocks_checked == 10**4 - 1
    lo, hi = shift_series_bound()
    assert lo <= Fraction(387793, 10**6) <= hi + Fraction(1, 10**6)
    assert abs(rep.digamma_float - float(lo)) < 1e-4

"""One check per acceptance criterion; each prints a PASS/FAIL line."""

import math
import random
import time
from fractions import Fraction

import pytest

from egs.certify import verify_dual, verify_subfactorization
from egs.constants import compute_c0, compute_c1_suite
from egs.greedy import exact_t_small, greedy_subfactorization, t1_exhaustive
from egs.linprog import floor_residuals_lower, ip_exact, lp_lower_t, lp_upper_t, lp_upper_value, t_exact
from egs.ntheory import sieve_primes
from egs.rearrange import (
    WeightTable,
    bundled_table,
    quarter_certificate_check,
    t23_decide,
    t23_exact,
    verify_asym_crit,
    verify_finite_crit,
)
from egs.repair import build_params, kb_check, ledger, verify_intervals
from egs.upperbound import best_upper, tne_scan

PREFIX14 = [1, 1, 1, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 4]


@pytest.fixture
def report(capsys):
    def emit(n, ok, msg):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {msg}")
        assert ok, msg
    return emit


def test_criterion_01_prefix(report):
    from oracles import brute_t
    s = time.time()
    table = sieve_primes(100)
    vals = [1] + [exact_t_small(N, table)[0] for N in range(2, 80)]
    exact = [t_exact(N, table=table)[0] for N in range(1, 80)]
    brute = [brute_t(N) for N in range(1, 13)]
    ok = vals[:14] == PREFIX14 and vals == exact and vals[:12] == brute
    report(1, ok, f"greedy search equals the exact integer program for N < 80, first 14 values {vals[:14]}, "
                  f"brute force agrees for N <= 12 ({time.time() - s:.1f}s)")


def test_criterion_02_nine(report):
    cert = greedy_subfactorization(9, 3).certificate
    acc = verify_subfactorization(cert).accepted
    refute = ip_exact(9, 4, target=9).lower < 9
    report(2, acc and refute, f"t=3 certificate accepted: {acc}; t=4 refuted by integer program: {refute}")


def test_criterion_03_greedy_3e5(report):
    N, t = 3 * 10**5, 10**5
    cert = greedy_subfactorization(N, t).certificate
    rep = verify_subfactorization(cert, need_count=False)
    report(3, rep.accepted and rep.count >= N + 372, f"greedy count at (3e5, 1e5) = N + {rep.count - N}")


def test_criterion_04_t1(report):
    s = time.time()
    v = t1_exhaustive(10**5, threads=8)
    report(4, v == 33572, f"t1(1e5) = {v} ({time.time() - s:.1f}s on 8 threads)")


def test_criterion_05_small_lp_suite(report):
    rows, ok = [], True
    for N in (100, 155, 200, 600):
        T, _ = lp_upper_t(N)
        lo, cert = lp_lower_t(N)
        ex = t_exact(N)[0]
        ok &= verify_subfactorization(cert).accepted and lo <= ex <= T
        rows.append(f"N={N}: [{lo}, {T}] exact {ex}")
        if N == 155:
            ok &= (lo, T) == (45, 46) and ex == 45
    report(5, ok, "; ".join(rows))


def test_criterion_06_self_consistency(report):
    N, t = 3 * 10**5, 10**5
    cert, sol = floor_residuals_lower(N, t)
    rep = verify_subfactorization(cert, need_count=False)
    floor_lp = math.floor(sol.exact_value)
    ok = rep.accepted and rep.count == floor_lp
    which = {445: "445", 455: "455"}.get(rep.count - N, "neither")
    report(6, ok, f"floor+residuals count N + {rep.count - N} equals floor(LP) = N + {floor_lp - N}; "
                  f"printed value matching: {which}")


def test_criterion_07_dual(report):
    N = 43631
    t = math.ceil(Fraction(N, 3))
    sol = lp_upper_value(N, t)
    rep = verify_dual(sol.dual_certificate)
    ok = rep.accepted and rep.value < N
    exact = N - rep.value == Fraction(47, 1257)
    report(7, ok, f"exact dual value {N} - {N - rep.value} < N proves t({N}) < {N}/3; "
                  f"equals 43631 - 47/1257: {exact} (external fixture not supplied)")


def test_criterion_08_criterion_upper_bound(report):
    a, b = best_upper(10**5), best_upper(10**6)
    report(8, a == 33668 and b == 342505 + 62, f"best upper bound 1e5 -> {a}, 1e6 -> {b}")


def test_criterion_09_tne(report):
    rows = tne_scan(80, 5000)
    bad = [r.N for r in rows if not (r.passed_full and r.passed_tail)]
    report(9, not bad and len(rows) == 4921, f"{len(rows)} values of N checked, failures {bad[:5]}")


def test_criterion_10_rearrangement(report):
    D = (1, 2, 4)
    W316 = WeightTable({}, ("pow2", 0, Fraction(3, 8)))
    a = bool(verify_asym_crit(D, Fraction(3, 16) - Fraction(1, 1000), W316))
    W13 = bundled_table("one_third")
    b = bool(verify_asym_crit(W13.downset, W13.alpha, W13))
    W27 = bundled_table("two_sevenths")
    c = bool(verify_finite_crit(W27.downset, W27.alpha, 8 * 10**6, W27))
    q = quarter_certificate_check()
    d = q.passed and q.eps == Fraction(218038591, 4458050224128) and q.C == Fraction(1559, 24) and q.threshold == 1328148
    report(10, a and b and c and d, f"3/16: {a}; 1/3: {b}; 2/7 at 8e6: {c}; quarter eps={q.eps} C={q.C} "
                                    f"threshold={q.threshold}")


def test_criterion_11_t23(report):
    v = t23_exact(26244)
    rng = random.Random(26244)
    sample = sorted(rng.sample(range(26245, 30001), 40)) + [26245, 30000]
    below = all(not t23_decide(N, math.ceil(Fraction(N, 4))).feasible for N in sample)
    report(11, v == 6561 and below, f"t23(26244) = {v}; below N/4 at {len(sample)} sampled N in (26244, 3e4]: {below}")


PRINTED = {
    "delta": "0.0986122",
    "delta_1": "0.241447", "delta_2": "0.504735", "delta_3": "0.051574", "delta_7": "0.11359", "delta_5": "0.06203",
    "alpha_2": "0.269878", "alpha_3": "0.361121", "alpha_5": "0.31418",
    "delta_sum": "0.9740", "alpha_sum": "0.9452",
}


def _digits_match(x, printed):
    d = len(printed.split(".")[1])
    return abs(round(float(x), d) - float(printed)) <= 10**-d * (1 + 1e-9)


def test_criterion_12_repair(report):
    P = build_params(10**11)
    L = ledger(P)
    got = {
        "delta": float(L.delta),
        "delta_sum": float(L.delta_sum / L.delta), "alpha_sum": float(L.alpha_sum),
    }
    for i in (1, 2, 3, 5, 7):
        got[f"delta_{i}"] = L.ratio(i)
    for i in (2, 3, 5):
        got[f"alpha_{i}"] = float(L.alphas[f"alpha_{i}"].upper)
    mism = [f"{k} {got[k]:.6f} vs {v}" for k, v in PRINTED.items() if not _digits_match(got[k], v)]
    params_ok = (_digits_match(P.gamma2.hi, "0.1423165") and P.kappa_2star <= Fraction(6830101, 10**6) + Fraction(1, 10**6)
                 and L.ratio(4) == 0 and L.alphas["alpha_4"].upper == 0)
    reps = verify_intervals()
    ranges_ok = all(reps)
    report(12, params_ok and ranges_ok and not mism,
           f"all ranges verified: {ranges_ok}; gamma_2, kappa**, delta_4 = alpha_4 = 0 match: {params_ok}; "
           f"printed constants not reproduced: {'; '.join(mism) or 'none'}")


def test_criterion_13_constants(report):
    tol = Fraction(1, 10**8)
    c0 = compute_c0(tol)
    c1p, c1pp, c1 = compute_c1_suite(tol)
    ok = (c0.width <= tol and c0.contains_printed("0.30441901") and c1pp.contains_printed("1.679578996")
          and c1.contains_printed("0.75554808"))
    adj = (f"c1' printed 0.3702051 {'contained' if c1p.contains_printed('0.3702051') else 'excluded'}, "
           f"0.3702015 {'contained' if c1p.contains_printed('0.3702015') else 'excluded'}; "
           f"c1 printed 0.75554808 {'contained' if c1.contains_printed('0.75554808') else 'excluded'}, "
           f"0.7554808 {'contained' if c1.contains_printed('0.7554808') else 'excluded'}")
    report(13, ok, f"c0 in [{float(c0.value.lo):.10f}, {float(c0.value.hi):.10f}], c1'' digits {c1pp.digits()}, "
                   f"c1 digits {c1.digits()}; {adj}")


def test_criterion_14_kb(report):
    s = time.time()
    rep = kb_check(6 * 10**4)
    report(14, rep.passed and rep.blocks_checked >= 10**4 - 1 and rep.grid_min >= Fraction(2, 5),
           f"grid min {float(rep.grid_min):.6f} at K'={rep.grid_argmin}, {rep.blocks_checked} blocks positive "
           f"({time.time() - s:.2f}s)")


def test_criterion_15_property_suites(report, table):
    import test_linprog
    import test_ntheory
    parts = {}
    for name, fn in [
        ("weak duality on 200 random pairs", test_linprog.test_weak_duality_random_pairs),
        ("brute-force M(N,t) for N <= 12", test_linprog.test_ip_matches_bruteforce_up_to_12),
        ("smooth ceiling gaps", test_ntheory.test_smooth_ceiling_exhaustive_integers),
        ("smooth ceiling random gaps", test_ntheory.test_smooth_ceiling_gap),
        ("rough deviation by full period", test_ntheory.test_rough_deviation_full_period),
        ("pi bounds to 1e7", lambda: test_ntheory.test_pi_bounds_containment_up_to_1e7(table)),
    ]:
        try:
            fn()
            parts[name] = True
        except AssertionError:
            parts[name] = False
    report(15, all(parts.values()), "; ".join(f"{k}: {'ok' if v else 'failed'}" for k, v in parts.items()))

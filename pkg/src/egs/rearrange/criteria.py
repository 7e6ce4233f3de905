"""Exact verification of rearrangement weight certificates.

verify_asym_crit checks the asymptotic criterion (prime budget inequality,
strict tail inequality for every natural l) for a weight table whose tail
is a union of halving chains.  Beyond l* = max(largest explicit index,
largest chain base / 2, alpha * max D) both sides of the tail inequality
halve when l doubles, so one doubling period [l*, 2 l*) finishes the check.

verify_finite_crit checks the finite-N criterion for the modified weights
a'_l = ceil(a_l N)/N for l < 2^L N (zero beyond).  The left-hand sides are
computed exactly.  For the prime budget the right-hand side is bounded
below by sigma_d/d minus the worst-case rough-count deviation
(computed exactly per downset), with an exact-count route alongside.  The
tail inequality is checked for every natural l <= alpha N with exact
counts of A_{d,D}, since the uniform O(1/N) error is too coarse once
alpha N / l is bounded.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..ntheory.primes import valuation
from .downset import downset_analyze, rough_count_array, rough_deviation_sup
from .weights import WeightTable

DEFAULT_TRUNCATION = 4  # L: finite-N weights are kept for l < 2^L N


@dataclass
class CritReport:
    passed: bool
    failures: list = field(default_factory=list)
    prime_margins: dict = field(default_factory=dict)  # p -> rhs - lhs (Fraction)
    tail_margin: Fraction | None = None  # min over checks of l*(lhs - rhs)
    checks: int = 0
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


class _RightSide:
    """R(l) = sum_d sigma_d min(1/d, alpha/l) via prefix sums over sorted d."""

    def __init__(self, table, alpha: Fraction):
        self.alpha = alpha
        self.ds = sorted(table.sigma)
        sig = [table.sigma[d] for d in self.ds]
        self.sig_prefix = [Fraction(0)]
        for s in sig:
            self.sig_prefix.append(self.sig_prefix[-1] + s)
        self.inv_suffix = [Fraction(0)] * (len(self.ds) + 1)
        for i in range(len(self.ds) - 1, -1, -1):
            self.inv_suffix[i] = self.inv_suffix[i + 1] + sig[i] / self.ds[i]
        self.S = self.sig_prefix[-1]

    def __call__(self, l) -> Fraction:
        l = Fraction(l)
        # d >= l/alpha takes 1/d, smaller d take alpha/l
        i = bisect.bisect_left(self.ds, math.ceil(l / self.alpha))
        return self.inv_suffix[i] + self.alpha / l * self.sig_prefix[i]


def prime_budget(table, p: int) -> Fraction:
    """sum_d sigma_d nu_p(d) / d."""
    return sum((s * valuation(d, p) / d for d, s in table.sigma.items()), Fraction(0))


def _check_period_start(W: WeightTable, alpha: Fraction, maxD: int) -> int:
    return max(1, W.max_explicit, -(-W.max_base // 2), math.ceil(alpha * maxD))


def verify_asym_crit(D, alpha, W: WeightTable) -> CritReport:
    """Exact check of the asymptotic rearrangement criterion for (D, alpha, W)."""
    alpha = Fraction(alpha)
    table = downset_analyze(D)
    rep = CritReport(True)
    if not 0 < alpha < 1:
        rep.passed = False
        rep.failures.append("alpha must lie in (0, 1)")
        return rep
    dprimes = set(table.downset.primes)
    if not dprimes:
        rep.passed = False
        rep.failures.append("downset contains no prime")
    for p in sorted(W.primes_used() | dprimes):
        lhs = W.nu_sum(p)
        rhs = prime_budget(table, p) if p in dprimes else Fraction(0)
        rep.prime_margins[p] = rhs - lhs
        if lhs > rhs:
            rep.passed = False
            rep.failures.append(f"prime budget fails at p={p}: {float(lhs):.9g} > {float(rhs):.9g}")

    R = _RightSide(table, alpha)
    lstar = _check_period_start(W, alpha, max(table.sigma))
    support = W.support_upto(2 * lstar)
    pts = sorted({1, lstar} | {l for l, _ in support if l < 2 * lstar})
    total = W.total()
    # T(l) = total - sum_{support <= l}
    sl = [l for l, _ in support]
    pref = [Fraction(0)]
    for _, a in support:
        pref.append(pref[-1] + a)
    worst = None
    for l in pts:
        T = total - pref[bisect.bisect_right(sl, l)]
        m = l * (T - R(l))
        if worst is None or m < worst:
            worst = m
        if m <= 0:
            rep.passed = False
            if len(rep.failures) < 20:
                rep.failures.append(f"tail inequality fails at l={l}: {float(T):.9g} <= {float(R(l)):.9g}")
    rep.tail_margin = worst
    rep.checks = len(pts) + len(rep.prime_margins)
    return rep


def finite_weights(W: WeightTable, N: int, L: int = DEFAULT_TRUNCATION) -> tuple[np.ndarray, list[int]]:
    """Support l < 2^L N and the integers ceil(a_l N) of the modified weights."""
    limit = 2**L * N
    ls, cs = [], []
    for l, a in W.support_upto(limit - 1):
        ls.append(l)
        cs.append(-((-a.numerator * N) // a.denominator))
    return np.array(ls, dtype=np.int64), cs


def verify_finite_crit(D, alpha, N: int, W: WeightTable, L: int = DEFAULT_TRUNCATION,
                       prime_route: str = "ledger") -> CritReport:
    """Exact check of the finite-N rearrangement criterion; True certifies t(N) >= alpha N.

    prime_route selects the right-hand side of the prime budget inequality:
    "ledger" bounds #(A_{d,D} cap [1, N/d]) below by sigma_d N/d - E with E the
    exact worst-case deviation over the downset; "exact" counts directly.
    """
    alpha = Fraction(alpha)
    table = downset_analyze(D)
    rep = CritReport(True)
    if prime_route not in ("ledger", "exact"):
        raise ValueError("prime_route must be 'ledger' or 'exact'")
    ls, cs = finite_weights(W, N, L)
    if len(ls) == 0:
        rep.passed = False
        rep.failures.append("no positive weights")
        return rep
    E = max(rough_deviation_sup(P) for P in set(table.defining.values()))
    rep.notes.append(f"deviation bound E = {E}")
    dprimes = set(table.downset.primes)
    ds = sorted(table.sigma)
    for p in sorted(W.primes_used() | dprimes):
        lhs = sum(valuation(int(l), p) * c for l, c in zip(ls, cs))  # times N
        if p not in dprimes:
            rhs = Fraction(0)
        elif prime_route == "ledger":
            rhs = sum((valuation(d, p) * (table.sigma[d] * Fraction(N, d) - E) for d in ds), Fraction(0))
        else:
            rhs = Fraction(sum(valuation(d, p) * int(rough_count_array(table.defining[d], np.array([N // d]))[0])
                               for d in ds))
        rep.prime_margins[p] = (rhs - lhs) / N
        if lhs > rhs:
            rep.passed = False
            rep.failures.append(f"prime budget fails at p={p} ({prime_route}): {lhs} > {float(rhs):.6f} (times N)")

    # tail inequality at every natural l <= alpha N, scaled by N
    lmax = (alpha.numerator * N) // alpha.denominator
    if lmax >= 1:
        suffix = np.concatenate([np.cumsum(np.array(cs[::-1], dtype=np.int64))[::-1], [0]])
        worst = None
        for lo in range(1, lmax + 1, 1 << 20):
            l = np.arange(lo, min(lmax, lo + (1 << 20) - 1) + 1, dtype=np.int64)
            lhs = suffix[np.searchsorted(ls, l, side="right")]
            xl = (alpha.numerator * N) // (alpha.denominator * l)
            rhs = np.zeros_like(l)
            for d in ds:
                rhs += rough_count_array(table.defining[d], np.minimum(N // d, xl))
            gap = lhs - rhs
            k = int(np.argmin(gap))
            if worst is None or gap[k] < worst[0]:
                worst = (int(gap[k]), int(l[k]))
        rep.tail_margin = Fraction(worst[0], N)
        rep.notes.append(f"tightest tail check at l={worst[1]}")
        if worst[0] < 0:
            rep.passed = False
            rep.failures.append(f"tail inequality fails at l={worst[1]} (deficit {-worst[0]}/N)")
        rep.checks = lmax + len(rep.prime_margins)
    return rep


def pow2_tail_obstruction(D, alpha, r0: int) -> tuple[Fraction, Fraction]:
    """Exact (cost, budget) showing when a pow2 tail starting at 2^r0 cannot work.

    For l >= max(2^r0, alpha max D) the tail inequality reads c/l' > alpha S/l'
    with S = sum_d sigma_d, so c > alpha S; the tail alone then spends
    c (r0 + 1) / 2^(r0 - 1) of the p = 2 budget.  If this lower bound on the
    cost reaches the budget sum_d sigma_d nu_2(d)/d, no explicit weights can
    rescue the ansatz.  Requires 2^r0 >= alpha max D.
    """
    alpha = Fraction(alpha)
    table = downset_analyze(D)
    if 2**r0 < alpha * max(table.sigma):
        raise ValueError("obstruction needs 2^r0 >= alpha max D")
    S = sum(table.sigma.values(), Fraction(0))
    cost = alpha * S * (r0 + 1) / 2 ** (r0 - 1)
    return cost, prime_budget(table, 2)

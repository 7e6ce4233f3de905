"""t_{2,3}(N): the best threshold reachable by moving only powers of 2 and 3,
and the exact check of the one-quarter impossibility certificate.

Each n <= N splits as n = d m with d 3-smooth and m 3-rough.  A rearrangement
keeps every rough part m and gives it a 3-smooth multiplier l = 2^a 3^b with
l m >= t; it is valid iff sum a <= nu_2(N!) and sum b <= nu_3(N!).  Slots
with m >= t take l = 1; the others are grouped by x = ceil(t/m).

Decision at (N, t): minimise sum b subject to sum a <= nu_2(N!).  The LP
relaxation is solved exactly by walking the lower convex hulls of the
per-group option sets in order of exchange rate; the same walk with whole
copies gives a feasible integral assignment.  LP minimum > nu_3(N!) refutes
t, integral value <= nu_3(N!) proves it; the rare gap is closed by an exact
dynamic program over the a-budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..ntheory.primes import ResourceLimitError, legendre_valuation
from ..ntheory.smooth import smooth_numbers_upto

T23_CEILING = 10**5
DP_CEILING = 5 * 10**4  # largest a-budget for the exact fallback


class UndecidedError(RuntimeError):
    pass


def smooth_options(x: int) -> list[tuple[int, int]]:
    """Pareto-minimal (a, b) with 2^a 3^b >= x, ordered by increasing a."""
    out = []
    b, p3 = 0, 1
    while True:
        c = -(-x // p3)
        a = (c - 1).bit_length() if c > 1 else 0
        if not out or a < out[-1][0]:
            out.append((a, b))
        if a == 0:
            break
        b, p3 = b + 1, p3 * 3
    return sorted(out)


def _lower_hull(opts: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Lower convex hull of points ordered by a (b decreasing)."""
    hull = []
    for p in opts:
        while len(hull) >= 2:
            (a1, b1), (a2, b2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above segment hull[-2] -> p
            if (b2 - b1) * (p[0] - a1) >= (p[1] - b1) * (a2 - a1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


@lru_cache(maxsize=8)
def _smooth_sorted(N: int) -> np.ndarray:
    return np.array(smooth_numbers_upto(N), dtype=np.int64)


def slot_groups(N: int, t: int) -> dict[int, int]:
    """x -> number of slots whose rough part m < t has ceil(t/m) = x."""
    smooth = _smooth_sorted(N)
    top = min(t - 1, N)
    if top < 1:
        return {}
    m = np.arange(1, top + 1, dtype=np.int64)
    m = m[(m % 2 != 0) & (m % 3 != 0)]
    mult = np.searchsorted(smooth, N // m, side="right")
    x = -((-t) // m)
    xs, inv = np.unique(x, return_inverse=True)
    cnt = np.bincount(inv, weights=mult).astype(np.int64)
    return {int(a): int(c) for a, c in zip(xs, cnt) if c}


@dataclass
class T23Decision:
    feasible: bool
    lp_min_b: Fraction
    int_b: int | None
    budget2: int
    budget3: int
    method: str


def _hull_walk(groups: dict[int, int], A2: int):
    """Exact LP minimum of sum b and an integral greedy value, both under sum a <= A2."""
    base_b = 0
    moves = []
    for x, n in groups.items():
        h = _lower_hull(smooth_options(x))
        base_b += n * h[0][1]
        if h[0][0] != 0:
            raise AssertionError("hull must start at a = 0")
        for i in range(len(h) - 1):
            da, db = h[i + 1][0] - h[i][0], h[i][1] - h[i + 1][1]
            moves.append((Fraction(db, da), x, i, da, db))
    moves.sort(key=lambda mv: (-mv[0], mv[1], mv[2]))
    # LP
    rem = Fraction(A2)
    lp = Fraction(base_b)
    for rate, x, i, da, db in moves:
        n = groups[x]
        if n * da <= rem:
            rem -= n * da
            lp -= n * db
        else:
            lp -= rem * rate
            break
    # integral walk: copies of group x currently sitting at hull vertex i
    at = {x: {0: n} for x, n in groups.items()}
    remi = A2
    ib = base_b
    for rate, x, i, da, db in moves:
        c = at[x].get(i, 0)
        k = min(c, remi // da)
        if k:
            at[x][i] = c - k
            at[x][i + 1] = at[x].get(i + 1, 0) + k
            remi -= k * da
            ib -= k * db
    return lp, ib


def _dp_min_b(groups: dict[int, int], A2: int) -> int:
    """Exact minimum of sum b under sum a <= A2 by a DP over the a-budget."""
    if A2 > DP_CEILING:
        raise ResourceLimitError(f"exact fallback needs a-budget {A2} <= {DP_CEILING}")
    INF = np.iinfo(np.int64).max // 4
    best = np.full(A2 + 1, INF, dtype=np.int64)
    best[0] = 0
    for x, n in sorted(groups.items()):
        opts = smooth_options(x)
        for _ in range(n):
            new = np.full_like(best, INF)
            for a, b in opts:
                if a == 0:
                    np.minimum(new, best + b, out=new)
                elif a <= A2:
                    np.minimum(new[a:], best[:-a] + b, out=new[a:])
            best = new
    return int(best.min())


def t23_decide(N: int, t: int, allow_dp: bool = True) -> T23Decision:
    """Is there a t-admissible rearrangement of powers of 2 and 3 for N! ?"""
    A2, A3 = legendre_valuation(N, 2), legendre_valuation(N, 3)
    groups = slot_groups(N, t)
    lp, ib = _hull_walk(groups, A2)
    if lp > A3:
        return T23Decision(False, lp, ib, A2, A3, "lp")
    if ib <= A3:
        return T23Decision(True, lp, ib, A2, A3, "greedy")
    if not allow_dp:
        raise UndecidedError(f"LP and integral walk disagree at N={N}, t={t}")
    exact = _dp_min_b(groups, A2)
    return T23Decision(exact <= A3, lp, exact, A2, A3, "dp")


def t23_exact(N: int, ceiling: int = T23_CEILING) -> int:
    """Exact t_{2,3}(N) by bisection on t with exact decisions."""
    if N > ceiling:
        raise ResourceLimitError(f"t23_exact: N={N} exceeds ceiling {ceiling}")
    if N < 1:
        raise ValueError("N must be positive")
    lo, hi = 1, N + 1  # t = 1 always works; t = N + 1 never does
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if t23_decide(N, mid).feasible:
            lo = mid
        else:
            hi = mid
    return lo


def t23_dp(N: int, t: int) -> bool:
    """Cross-check oracle: the slot-by-slot dynamic program alone."""
    A2, A3 = legendre_valuation(N, 2), legendre_valuation(N, 3)
    return _dp_min_b(slot_groups(N, t), A2) <= A3


def t23_bruteforce(N: int) -> int:
    """Independent oracle for tiny N: split every n <= N directly and search all
    assignments of 3-smooth multipliers with exhaustive backtracking."""
    A2, A3 = legendre_valuation(N, 2), legendre_valuation(N, 3)
    rough = []
    for n in range(1, N + 1):
        while n % 2 == 0:
            n //= 2
        while n % 3 == 0:
            n //= 3
        rough.append(n)
    rough.sort()
    smooth = [(s, (s & -s).bit_length() - 1, _nu3(s)) for s in smooth_numbers_upto(2**A2 * 3**A3)]

    def ok(t):
        needy = [m for m in rough if m < t]

        def useful(k, m):
            # multipliers that stay admissible after removing a 2 or a 3 are dominated
            s, a, b = smooth[k]
            return s * m >= t and not (a and s // 2 * m >= t) and not (b and s // 3 * m >= t)

        def go(i, r2, r3, prev):
            if i == len(needy):
                return True
            m = needy[i]
            start = prev if i and needy[i - 1] == m else 0
            for k in range(start, len(smooth)):
                s, a, b = smooth[k]
                if a <= r2 and b <= r3 and useful(k, m) and go(i + 1, r2 - a, r3 - b, k):
                    return True
            return False
        return go(0, A2, A3, 0)

    t = 1
    while ok(t + 1):
        t += 1
    return t


def _nu3(s: int) -> int:
    k = 0
    while s % 3 == 0:
        s //= 3
        k += 1
    return k


@dataclass
class QuarterReport:
    passed: bool
    eps: Fraction
    C: Fraction
    threshold: int
    failures: list


QUARTER_EPS = Fraction(218038591, 4458050224128)
QUARTER_C = Fraction(1559, 24)
QUARTER_THRESHOLD = 1328148


def quarter_weights() -> tuple[Fraction, Fraction, dict[int, Fraction]]:
    """c_2, c_3 and w_l of the one-quarter certificate."""
    w = {1: Fraction(2, 32)}
    for a in range(3):
        for b in range(11):
            l = 2**a * 3**b
            if 1 < l <= 4 * 3**9:
                w[l] = Fraction(1, 32)
    return Fraction(2, 32), Fraction(3, 32), w


def quarter_certificate_check(c2=None, c3=None, w=None) -> QuarterReport:
    """Exact check of the covering inequality for every 3-smooth l and
    recomputation of eps, C and ceil(C/eps).

    A slot with multiplier k <= l and k m >= N/4 has m >= N/(4l), so the
    proportion of multipliers k <= l is bounded by the share of slots with
    rough part >= N/(4l); the covering inequality therefore reads
    c2 nu_2(l) + c3 nu_3(l) + sum_{l' >= l} w_{l'} >= 1.  That share is
    sum_{d < 4l} (1/d - 1/(4l)) / 3 + O(1/N), the 1/3 being the density of
    3-rough numbers.
    """
    if c2 is None:
        c2, c3, w = quarter_weights()
    failures = []
    if c2 <= 0 or c3 <= 0:
        return QuarterReport(False, Fraction(0), Fraction(0), -1, ["c2 and c3 must be positive"])
    # c2 nu2 + c3 nu3 >= 1 once nu2 >= 1/c2 or nu3 >= 1/c3, so the check is finite
    for a in range(math.ceil(1 / c2) + 1):
        for b in range(math.ceil(1 / c3) + 1):
            l = 2**a * 3**b
            tail = sum((wv for k, wv in w.items() if k >= l), Fraction(0))
            if c2 * a + c3 * b + tail < 1:
                failures.append(f"covering inequality fails at l=2^{a}3^{b}")
    eps = 1 - c2 - c3 / 2
    C = Fraction(0)
    for l, wl in w.items():
        ds = smooth_numbers_upto(4 * l - 1)
        eps -= wl * sum((Fraction(1, d) - Fraction(1, 4 * l) for d in ds), Fraction(0)) / 3
        C += wl * (Fraction(4, 3) * len(ds) + 1)
    threshold = math.ceil(C / eps) if eps > 0 else -1
    if eps <= 0:
        failures.append("eps is not positive")
    return QuarterReport(not failures, eps, C, threshold, failures)

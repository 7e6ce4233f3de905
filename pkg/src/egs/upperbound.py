"""Analytic upper bounds on t(N) from forced excess at large primes."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .ntheory.analytic import Piece, StepFunctionDescriptor, factorial_log_bounds, prime_sum_bounds
from .ntheory.analytic import PRIME_SUM_MIN_Y
from .ntheory.interval import RationalInterval, ri_e, ri_log, ri_pi, to_fraction
from .ntheory.primes import PrimeTable, sieve_primes

RI = RationalInterval
UNIT_ROUNDOFF = 2.0**-53
# relative error budget for a float prime sum built from log1p terms and fsum
FLOAT_SUM_REL_ERR = 16 * UNIT_ROUNDOFF
SAFETY_WINDOW = 64
ESCALATION_DPS = 40
ANALYTIC_RANGE_DIVISOR = 64


# ---------------------------------------------------------------------------
# f_alpha


def _ceil_interval(u: RationalInterval) -> tuple[int, int]:
    return math.ceil(u.lo), math.ceil(u.hi)


def f_alpha(alpha, x) -> RationalInterval:
    """Enclosure of floor(1/x) * log(ceil(1/(alpha x)) * alpha x).

    ``alpha`` may be a rational or a RationalInterval (for instance e).
    """
    x = to_fraction(x)
    if x <= 0:
        raise ValueError("x > 0 required")
    a = RI.coerce(alpha if isinstance(alpha, RationalInterval) else to_fraction(alpha))
    if a.lo <= 0:
        raise ValueError("alpha > 0 required")
    g = math.floor(1 / x)
    if g == 0:
        return RI.point(0)
    ax = a * x
    u = 1 / ax
    k_lo, k_hi = _ceil_interval(u)
    if k_lo == k_hi:
        if a.lo == a.hi and k_lo == u.lo:
            return RI.point(0)
        ratio = ax * k_lo
    else:
        # u straddles an integer: the value lies between the two branches
        ratio = RI.hull(ax * k_lo, ax * k_hi, RI.point(1))
    val = ratio.log() * g
    return RI(max(val.lo, Fraction(0)), max(val.hi, Fraction(0)))


@dataclass
class FAlphaPieces:
    """Split points of f_alpha on (lo, hi]: f is g*log(k*alpha*x) with g, k
    constant on each piece, so every piece is increasing."""

    alpha: Fraction
    lo: Fraction
    hi: Fraction

    def breakpoints(self) -> list[Fraction]:
        a, lo, hi = self.alpha, self.lo, self.hi
        pts = {lo, hi}
        n = math.floor(1 / hi)
        while True:
            n += 1
            x = Fraction(1, n)
            if x <= lo:
                break
            pts.add(x)
        m = math.floor(1 / (a * hi))
        while True:
            m += 1
            x = 1 / (a * m)
            if x <= lo:
                break
            if x < hi:
                pts.add(x)
        return sorted(p for p in pts if lo <= p <= hi)


def falpha_prime_descriptor(N: int, t: int, y, x, max_pieces: int = 200000) -> StepFunctionDescriptor:
    """Pieces of b(p) = floor(N/p) * log(ceil(t/p) * p / t) for p in (y, x].

    On a piece (l, r] where floor(N/p) = g and ceil(t/p) = k, b is
    increasing with integral g * [p log(kp/t) - p].
    """
    y, x = to_fraction(y), to_fraction(x)
    pts = {y, x}
    # discontinuities of floor(N/p): p = N/n ; of ceil(t/p): p = t/m
    for den_num in (N, t):
        n = max(1, math.floor(den_num / x))
        while True:
            p = Fraction(den_num, n)
            if p <= y:
                break
            if p < x:
                pts.add(p)
            n += 1
            if len(pts) > max_pieces:
                raise ValueError("too many pieces for the analytic mode")
    pts = sorted(pts)
    pieces = []
    for l, r in zip(pts, pts[1:]):
        mid = (l + r) / 2
        g = math.floor(N / mid)
        k = math.ceil(t / mid)
        if g == 0:
            z = RI.point(0)
            pieces.append(Piece(l, r, z, z, z))
            continue
        kt = Fraction(k, t)
        start = ri_log(kt * l) * g
        end = ri_log(kt * r) * g
        F = lambda p: ri_log(kt * p) * p - p  # noqa: E731
        integ = (F(r) - F(l)) * g
        pieces.append(Piece(l, r, start.max0(), end.max0(), integ.max0()))
    return StepFunctionDescriptor(pieces)


# ---------------------------------------------------------------------------
# criterion


def _rhs_interval(N: int, t: int) -> RationalInterval:
    return factorial_log_bounds(N) - ri_log(t) * N


def _cut(t: int) -> Fraction:
    return Fraction(t, math.isqrt(t))


def _crit_terms(N: int, t: int, primes: np.ndarray) -> np.ndarray:
    g = (N // primes).astype(np.float64)
    k = -(-t // primes) * primes
    return g * np.log1p((k - t).astype(np.float64) / t)


def crit_sum(N: int, t: int, table: PrimeTable | None = None) -> tuple[float, float]:
    """(S, err): float value of the prime sum and a bound on its error."""
    table = table or sieve_primes(max(N, 2))
    cut = _cut(t)
    i0 = table.pi(math.floor(cut))
    primes = table.primes[i0 : table.pi(N)].astype(np.int64)
    terms = _crit_terms(N, t, primes)
    S = math.fsum(terms.tolist())
    return S, FLOAT_SUM_REL_ERR * S + 1e-300


def _crit_sum_mp(N: int, t: int, table: PrimeTable, dps: int) -> mpmath.mpf:
    cut = _cut(t)
    i0 = table.pi(math.floor(cut))
    primes = table.primes[i0 : table.pi(N)].tolist()
    with mpmath.workdps(dps):
        return mpmath.fsum((N // p) * mpmath.log(mpmath.mpf(-(-t // p) * p) / t) for p in primes)


def upper_crit_test(N: int, t: int, mode: str = "exact-sieve", table: PrimeTable | None = None,
                    analytic_divisor: int = ANALYTIC_RANGE_DIVISOR) -> bool:
    """True certifies t(N) < t.

    exact-sieve: the prime sum over (t/floor(sqrt t), N] is evaluated term
    by term with a rigorous error bound (escalating to multiprecision when
    the margin is thin).  analytic: the sum over primes above
    max(t/floor(sqrt t), 1423, N/analytic_divisor) is lower-bounded by the
    effective prime-sum estimate; smaller primes are dropped (every term is
    >= 0), which keeps the variation term small.
    """
    if not 1 <= t <= N:
        raise ValueError("need 1 <= t <= N")
    if t == 1:
        return False
    rhs = _rhs_interval(N, t)
    if mode == "exact-sieve":
        table = table or sieve_primes(max(N, 2))
        S, err = crit_sum(N, t, table)
        rhs_hi = math.nextafter(float(rhs.hi), math.inf)
        rhs_lo = math.nextafter(float(rhs.lo), -math.inf)
        if S - err > rhs_hi:
            return True
        if S + err < rhs_lo:
            return False
        # too close for the float bound; redo in high precision
        dps = ESCALATION_DPS
        while dps <= 400:
            Sm = _crit_sum_mp(N, t, table, dps)
            tol = mpmath.mpf(10) ** (-dps + 10) * (1 + abs(Sm)) * 1000
            lo = to_fraction(Sm - tol)
            hi = to_fraction(Sm + tol)
            if lo > rhs.hi:
                return True
            if hi <= rhs.lo:
                return False
            dps *= 2
        return False
    if mode == "analytic":
        y = max(_cut(t), Fraction(PRIME_SUM_MIN_Y), Fraction(N, analytic_divisor))
        if y >= N:
            return False
        b = falpha_prime_descriptor(N, t, y, N)
        low = prime_sum_bounds(y, N, b, weight="unit", direction="lower")
        return low > rhs.hi
    raise ValueError("mode must be 'exact-sieve' or 'analytic'")


def trivial_upper(N: int) -> int:
    """Largest t with N log t <= log N! (so t(N) <= this value)."""
    lf = factorial_log_bounds(N)
    t = max(1, math.floor(math.exp(float(lf.hi) / N)) + 2)
    while t > 1 and (ri_log(t) * N).lo > lf.hi:
        t -= 1
    return t


def best_upper(N: int, table: PrimeTable | None = None, window: int = SAFETY_WINDOW) -> int:
    """Best upper bound on t(N) from the criterion: (least passing t) - 1.

    Bisection locates a boundary below the trivial bound; because the
    criterion is not monotone in t, the scan then continues downward until
    ``window`` consecutive failures are seen below the smallest pass.
    """
    if N < 2:
        return 1
    table = table or sieve_primes(max(N, 2))
    hi = trivial_upper(N) + 1  # passes: the right-hand side is negative there
    while hi > 1 and not upper_crit_test(N, hi, table=table):
        hi += 1
    lo = max(1, N // 4)
    while lo > 1 and upper_crit_test(N, lo, table=table):
        lo //= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if upper_crit_test(N, mid, table=table):
            hi = mid
        else:
            lo = mid
    best = hi
    t = best - 1
    misses = 0
    while t >= 2 and misses < window:
        if upper_crit_test(N, t, table=table):
            best = t
            misses = 0
        else:
            misses += 1
        t -= 1
    return best - 1


# ---------------------------------------------------------------------------
# the N/e scan


def _tne_sides(N: int, primes: np.ndarray) -> tuple[float, float, float, float]:
    """Float values (lhs_full, lhs_tail, rhs, err) of the N/e inequalities."""
    e = math.e
    s = math.isqrt(math.floor(N / e))
    # exactly: p >= (N/e)/s  <=>  e*p*s >= N
    cut = N / (e * s)
    u = N / (e * primes.astype(np.float64))
    k = np.ceil(u)
    g = (N // primes).astype(np.float64)
    terms = g * np.log(k / u)
    full = math.fsum(terms[primes >= cut].tolist())
    tail = math.fsum(terms[primes > N / e].tolist())
    rhs = 0.5 * math.log(2 * math.pi * N) + 1 / (12 * N)
    err = 64 * UNIT_ROUNDOFF * (math.fsum(np.abs(terms).tolist()) + float(g.sum()) * math.log(N) + rhs) + 1e-12
    return full, tail, rhs, err


def _tne_exact(N: int, primes: list[int]) -> tuple[bool, bool]:
    """Interval re-check of one N for both sums (used near ties)."""
    e = ri_e(160)
    s = math.isqrt(math.floor(float(N / mpmath.e)))
    full = RI.point(0)
    tail = RI.point(0)
    for p in primes:
        u = RI.point(N) / (e * p)
        k_lo, k_hi = _ceil_interval(u)
        if k_lo != k_hi:
            raise ArithmeticError(f"ceil(N/(e p)) undecided at N={N}, p={p}")
        term = (RI.point(k_lo) / u).log(160) * (N // p)
        if (e * p * s).lo >= N:
            full = full + term
        if (e * p).lo > N:
            tail = tail + term
    rhs = ri_log(ri_pi(160) * 2 * N, 160) / 2 + Fraction(1, 12 * N)
    return full.lo > rhs.hi, tail.lo > rhs.hi


@dataclass
class TneRow:
    N: int
    lhs_full: float
    lhs_tail: float
    rhs: float
    passed_full: bool
    passed_tail: bool


def tne_scan(N_lo: int = 80, N_hi: int = 5000, table: PrimeTable | None = None) -> list[TneRow]:
    """Check, for each N, that the f_e prime sums exceed
    (1/2) log(2 pi N) + 1/(12 N), both over p >= (N/e)/floor(sqrt(N/e))
    and over N/e < p <= N.  Float sums carry an explicit error bound and
    any row inside that bound is re-decided in interval arithmetic."""
    if N_lo < 80 or N_hi > 5000 or N_lo > N_hi:
        raise ValueError("range must lie in [80, 5000]")
    table = table or sieve_primes(N_hi)
    rows = []
    for N in range(N_lo, N_hi + 1):
        primes = table.primes[: table.pi(N)].astype(np.int64)
        primes = primes[primes >= 2]
        full, tail, rhs, err = _tne_sides(N, primes)
        pf, pt = full - err > rhs, tail - err > rhs
        if not (pf and pt):
            lo_cut = primes[primes.astype(float) * math.e * 0.5 >= 1]
            pf, pt = _tne_exact(N, lo_cut.tolist())
        rows.append(TneRow(N, full, tail, rhs, pf, pt))
    return rows


def tne_csv(rows: list[TneRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "lhs_floor_sqrt_cut", "lhs_above_N_over_e", "rhs", "pass_cut", "pass_above"])
    for r in rows:
        w.writerow([r.N, f"{r.lhs_full:.12f}", f"{r.lhs_tail:.12f}", f"{r.rhs:.12f}", int(r.passed_full), int(r.passed_tail)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# asymptotic reference curves


def asymptotic_reference(N: int) -> tuple[Fraction, Fraction, Fraction]:
    """(1/e, 1/e - c0/log N, 1/e - c0/log N - c1/log^2 N) as rationals
    (midpoints of the constant enclosures, float logs)."""
    if N < 3:
        raise ValueError("N >= 3 required")
    from .constants import reference_constants

    c0, c1 = reference_constants()
    inv_e = Fraction(1 / math.e)
    L = Fraction(math.log(N))
    first = inv_e
    second = first - c0 / L
    third = second - c1 / (L * L)
    return first, second, third


def asymptotic_offset(N: int, t_ref: int) -> int:
    """floor(N * third curve) - t_ref, the offset reported in bound tables."""
    return math.floor(N * asymptotic_reference(N)[2]) - t_ref

"""Rigorous upper bounds for the repair budget terms over a range of N.

Writing t = r N, every term is bounded by an expression in N alone.  Terms
whose bound decreases in N are evaluated at the left endpoint (tagged
monotone).  The prime counts inside A_p and B_p are bounded above and
below by the effective prime-counting inequalities on intervals
(N y, N x] with y, x independent of N; the upper bound decreases in N,
while the lower bound is taken at its worst case over the range (the
logarithm at the right endpoint, the error term at the left endpoint).
Where A_p - B_p enters with a sign, the asymmetric norm is bounded using
both sides of the enclosures.  For an unbounded range the lower bounds
are dropped and the asymmetric norms are bounded by the triangle
inequality, a A_p + B_p.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..ntheory.analytic import PI_UPPER_CONST, PRIME_SUM_MIN_Y, error_majorant
from ..ntheory.interval import RationalInterval, ri_log, ri_sqrt
from ..ntheory.primes import sieve_primes, valuation
from ..upperbound import falpha_prime_descriptor
from .params import LOG2, LOG_SQRT3, LOG_SQRT12, RepairConditionError, RepairParams

RI = RationalInterval
LOG3 = ri_log(3)
LOG5 = ri_log(5)
ZERO = Fraction(0)


def _decimal(x: Fraction, up: bool, digits: int = 20) -> str:
    """x rounded outward to a fixed number of decimals (the exact rationals are too long to print)."""
    q = 10**digits
    n = -((-x.numerator * q) // x.denominator) if up else (x.numerator * q) // x.denominator
    sign = "-" if n < 0 else ""
    whole, frac = divmod(abs(n), q)
    return f"{sign}{whole}.{frac:0{digits}d}"


@dataclass
class LedgerEntry:
    name: str
    upper: Fraction
    provenance: str
    monotone: bool = True  # bound is non-increasing in N

    def to_json(self) -> dict:
        return {"name": self.name, "upper": float(self.upper), "upper_decimal": _decimal(self.upper, up=True),
                "provenance": self.provenance, "monotone": self.monotone}


@dataclass
class Ledger:
    params: RepairParams
    delta: Fraction  # lower bound on (log N!)/N - log t over the range
    deltas: dict = field(default_factory=dict)  # "delta_1".. -> LedgerEntry
    alphas: dict = field(default_factory=dict)  # "alpha_1".. -> LedgerEntry
    A_bounds: dict = field(default_factory=dict)  # p -> RI(lower, upper)
    B_bounds: dict = field(default_factory=dict)

    @property
    def delta_sum(self) -> Fraction:
        return sum((e.upper for e in self.deltas.values()), ZERO)

    @property
    def alpha_sum(self) -> Fraction:
        return sum((e.upper for e in self.alphas.values()), ZERO)

    def ratio(self, i: int) -> float:
        """delta_i upper bound as a multiple of delta."""
        return float(self.deltas[f"delta_{i}"].upper / self.delta)

    def entries(self) -> list[LedgerEntry]:
        return list(self.deltas.values()) + list(self.alphas.values())

    def to_json(self) -> str:
        P = self.params
        return json.dumps({
            "params": P.describe(),
            "delta_lower": {"decimal": _decimal(self.delta, up=False), "value": float(self.delta), "provenance": "Stirling lower bound log(1/r) - 1"},
            "deltas": [e.to_json() for e in self.deltas.values()],
            "alphas": [e.to_json() for e in self.alphas.values()],
            "delta_sum_over_delta": float(self.delta_sum / self.delta),
            "alpha_sum": float(self.alpha_sum),
            "A_bounds": {str(p): [float(v.lo), float(v.hi)] for p, v in sorted(self.A_bounds.items())},
            "B_bounds": {str(p): [float(v.lo), float(v.hi)] for p, v in sorted(self.B_bounds.items())},
        }, indent=2)


# ---------------------------------------------------------------------------
# normalised prime counts (pi(N x) - pi(N y)) / N


def _count_upper(y: Fraction, x: Fraction, N: int) -> Fraction:
    Ny, Nx = N * y, N * x
    if Ny < PRIME_SUM_MIN_Y:
        raise RepairConditionError(f"prime-count bounds need N y >= {PRIME_SUM_MIN_Y}, got {float(Ny):.6g}")
    ly, lx = ri_log(Ny), ri_log(Nx)
    return ((x - y) / (2 * ly) + (x - y) / (2 * lx) + 2 * error_majorant(Nx) / (N * ly)).hi


def _count_lower(y: Fraction, x: Fraction, N_lo: int, N_hi: int | None) -> Fraction:
    if N_hi is None:
        return ZERO
    lo_y = N_lo * y
    if lo_y < PRIME_SUM_MIN_Y:
        raise RepairConditionError(f"prime-count bounds need N y >= {PRIME_SUM_MIN_Y}")
    main = (1 - 2 / ri_sqrt(lo_y)) * (x - y) / ri_log(N_hi * (x + y) / 2)
    err = 2 * error_majorant(N_lo * x) / (N_lo * ri_log(lo_y))
    return max(ZERO, (main - err).lo)


def _B_pieces(r: Fraction, K: int) -> dict[int, list[tuple[int, Fraction, Fraction]]]:
    """m -> [(j, y, x)]: primes p in [t/m, t/(m-1)) with floor(N/p) = j have p/N in (y, x]
    up to endpoints, which the continuous bounds do not see."""
    out = {}
    for m in range(1, K + 1):
        lo = r / m
        hi = Fraction(1) if m == 1 else min(Fraction(1), r / (m - 1))
        if lo >= hi:
            continue
        pieces = []
        for j in range(max(1, math.floor(1 / hi)), math.floor(1 / lo) + 1):
            y, x = max(lo, Fraction(1, j + 1)), min(hi, Fraction(1, j))
            if y < x:
                pieces.append((j, y, x))
        out[m] = pieces
    return out


def _A_ranges(r: Fraction, K: int, sigma: Fraction) -> dict[int, tuple[Fraction, Fraction]]:
    """3-rough m <= K(1 + sigma) -> (y, x) with t/min(m, K) < p <= t(1 + sigma)/m as p/N in (y, x]."""
    out = {}
    for m in range(1, math.floor(K * (1 + sigma)) + 1):
        if m % 2 == 0 or m % 3 == 0:
            continue
        y, x = r / min(m, K), r * (1 + sigma) / m
        if y < x:
            out[m] = (y, x)
    return out


def prime_term_bounds(P: RepairParams) -> tuple[dict, dict]:
    """Interval bounds for A_p (3 < p <= K(1 + sigma)) and B_p (p <= K) valid over the range."""
    N_lo, N_hi = P.N_lo, P.N_hi
    Bm = {}
    for m, pieces in _B_pieces(P.ratio, P.K).items():
        up = sum((j * _count_upper(y, x, N_lo) for j, y, x in pieces), ZERO)
        lo = sum((j * _count_lower(y, x, N_lo, N_hi) for j, y, x in pieces), ZERO)
        Bm[m] = (lo, up)
    Am = {}
    for m, (y, x) in _A_ranges(P.ratio, P.K, P.sigma).items():
        Am[m] = (P.A * _count_lower(y, x, N_lo, N_hi), P.A * _count_upper(y, x, N_lo))
    top = math.floor(P.K * (1 + P.sigma))
    primes = sieve_primes(max(top, 2)).primes_in(1, top).tolist()
    A_b, B_b = {}, {}
    for p in primes:
        if p <= P.K:
            lo = sum((valuation(m, p) * v[0] for m, v in Bm.items()), ZERO)
            up = sum((valuation(m, p) * v[1] for m, v in Bm.items()), ZERO)
            B_b[p] = RI(lo, up)
        if p > 3:
            lo = sum((valuation(m, p) * v[0] for m, v in Am.items()), ZERO)
            up = sum((valuation(m, p) * v[1] for m, v in Am.items()), ZERO)
            A_b[p] = RI(lo, up)
    return A_b, B_b


def _asym_upper(d: RationalInterval, a_plus: Fraction, a_minus: Fraction) -> Fraction:
    """Upper bound of |x|_{a+, a-} over x in d."""
    return max(a_plus * max(d.hi, ZERO), a_minus * max(-d.lo, ZERO))


def _pi_share(P: RepairParams) -> Fraction:
    """Upper bound on (pi(t/K) + (log N / log 5) pi(sqrt N)) / N at the left endpoint."""
    N = P.N_lo
    u = P.t_lo / P.K
    lu = ri_log(u)
    lsq = ri_log(N) / 2
    share = (u / lu + PI_UPPER_CONST * u / (lu * lu)) / N
    share += ri_log(N) / (LOG5 * ri_sqrt(N)) * (1 / lsq + PI_UPPER_CONST / (lsq * lsq))
    return share.hi


def _delta2_upper(P: RepairParams) -> Fraction:
    desc = falpha_prime_descriptor(1, P.ratio, P.ratio / P.K, 1)
    N = P.N_lo
    tv = desc.tv_star()
    return ((desc.integral() + tv * error_majorant(N) / N) / ri_log(P.t_lo / P.K)).hi


def delta2_parts(P: RepairParams) -> tuple[RationalInterval, Fraction]:
    """(integral of f over (r/K, 1], augmented total variation) for reporting."""
    desc = falpha_prime_descriptor(1, P.ratio, P.ratio / P.K, 1)
    return desc.integral(), desc.tv_star()


def ledger(P: RepairParams) -> Ledger:
    """Upper bounds for delta_1..delta_8 and alpha_1..alpha_7 valid for every N in the range."""
    N, t = P.N_lo, P.t_lo
    unbounded = P.N_hi is None
    delta = (ri_log(1 / P.ratio) - 1).lo
    if delta <= 0:
        raise RepairConditionError("t/N must be below 1/e for a positive budget")
    k45, kst, k2s = P.kappa45.hi, P.kappa_star.hi, P.kappa_2star
    g2, g3 = P.gamma2.hi, P.gamma3.hi
    L = Ledger(P, delta)
    A_b, B_b = prime_term_bounds(P)
    L.A_bounds, L.B_bounds = A_b, B_b
    share = _pi_share(P)
    log_tK2 = ri_log(t / P.K**2)
    gap = P.gap_primes()
    small = [p for p in B_b if 3 < p <= P.K]

    def D(i, v, prov, mono=True):
        L.deltas[f"delta_{i}"] = LedgerEntry(f"delta_{i}", max(Fraction(v), ZERO), prov, mono)

    def Al(i, v, prov, mono=True):
        L.alphas[f"alpha_{i}"] = LedgerEntry(f"alpha_{i}", Fraction(v), prov, mono)

    D(1, Fraction(3) / (2 * P.ratio * P.A) + Fraction(4, N), "rough-count excess bound 3N/(2tA) + 4/N")
    D(2, _delta2_upper(P), "oscillatory prime-sum bound with f integral and augmented variation")
    D(3, ((4 * P.A + 3) * RI.point(k45) / 3 * share).hi, "valuation bound with pi upper bounds")
    D(4, sum((A_b[p].hi for p in gap), ZERO) * k45, "A_p upper bounds on (K, K(1+sigma)]")
    d5 = ZERO
    a5 = ZERO
    for p in small:
        lp = ri_log(p)
        ap = (lp / log_tK2).hi
        ap_alpha = (lp / log_tK2 * (2 * ri_log(P.K) + k2s)).hi
        am_alpha = (lp + k2s).hi
        diff = A_b[p] - B_b[p]
        if unbounded:
            d5 += ap * A_b[p].hi + B_b[p].hi
            a5 += ap_alpha * A_b[p].hi + am_alpha * B_b[p].hi
        else:
            d5 += _asym_upper(diff, ap, Fraction(1))
            a5 += _asym_upper(diff, ap_alpha, am_alpha)
    tag5 = "triangle inequality on A_p, B_p upper bounds" if unbounded else "A_p - B_p enclosure, asymmetric norm"
    D(5, d5 * k45, tag5, unbounded)
    D(6, k45 / N, "kappa_4.5 / N")
    bracket = (LOG_SQRT12 - B_b[2].lo * LOG2 - B_b[3].lo * LOG3).hi
    D(7, kst * max(bracket, ZERO) / ri_log(t).lo, "B_2, B_3 lower bounds", unbounded)
    D(8, (2 * (ri_log(t) + kst) / N).hi, "2(log t + kappa_*)/N")

    Al(1, ZERO, "no tiny primes in the initial multiset")
    B2, B3 = B_b[2], B_b[3]
    a2 = max((B2.hi - 2 * g2 * B3.lo) / (1 - g2), (2 * B3.hi - g3 * B2.lo) / (1 - g3))
    Al(2, a2, "B_2, B_3 enclosures in the gamma norm", unbounded)
    Al(3, ((4 * P.A + 3) * (ri_log(t / P.K) + k2s) / (3 * LOG_SQRT12) * share).hi,
       "valuation bound with pi upper bounds")
    # for p in (K, K(1+sigma)] only m = p contributes to A_p and log(t/p) is
    # below both logarithms of its prime-count bound, so the product decreases in N
    a4 = ZERO
    for p in gap:
        y, x = P.ratio / P.K, P.ratio * (1 + P.sigma) / p
        a4 += P.A * ((x - y) + 2 * error_majorant(N * x) / N).hi + k2s * A_b[p].hi
    Al(4, (a4 / LOG_SQRT12).hi, "A_p upper bounds on (K, K(1+sigma)]")
    Al(5, (a5 / LOG_SQRT12).hi, tag5, unbounded)
    Al(6, ((ri_log(t) + k2s) / (N * LOG_SQRT12)).hi, "(log t + kappa_**)/(N log sqrt 12)")
    a7 = max(ri_log(2 * N) / ((1 - g2) * N * LOG2), ri_log(3 * N) / ((1 - g3) * N * LOG_SQRT3),
             key=lambda v: v.hi)
    Al(7, a7.hi, "tiny-prime rounding loss")
    return L

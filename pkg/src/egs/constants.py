"""Rigorous enclosures of the constants c0, c1', c1'' and c1.

With y = 1/x the defining integrals become integrals of
floor(y) * log(ceil(y/e) * e / y) against dy/y^2 (times a power of log y).
Each one splits into a series over the intervals [ke, (k+1)e), a closed
term on [1, e], and a correction carrying the fractional part {y}.  The
correction is integrated exactly on every piece where floor(y) and
ceil(y/e) are constant, up to a cutoff T, with an explicit tail bound.

Multiprecision values are turned into intervals by adding an explicit
slack of (number of operations) * 10^(3 - dps) times the magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .ntheory.interval import RationalInterval, to_fraction

RI = RationalInterval
DPS = 36
UNIT_ROUNDOFF = 2.0**-53


@dataclass
class ConstantEnclosure:
    name: str
    value: RationalInterval
    components: dict[str, RationalInterval] = field(default_factory=dict)

    @property
    def width(self) -> Fraction:
        return self.value.width

    def contains_printed(self, printed: str) -> bool:
        """True when the enclosure meets [v, v + 10^-d) for the printed
        truncated decimal v with d digits after the point."""
        v = Fraction(printed)
        d = len(printed.split(".")[1]) if "." in printed else 0
        return self.value.lo < v + Fraction(1, 10**d) and self.value.hi >= v

    def digits(self) -> str:
        """Longest decimal prefix shared by both endpoints."""
        lo, hi = f"{float(self.value.lo):.15f}", f"{float(self.value.hi):.15f}"
        out = []
        for a, b in zip(lo, hi):
            if a != b:
                break
            out.append(a)
        return "".join(out)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "lo": f"{self.value.lo.numerator}/{self.value.lo.denominator}",
            "hi": f"{self.value.hi.numerator}/{self.value.hi.denominator}",
            "lo_float": float(self.value.lo),
            "hi_float": float(self.value.hi),
            "digits": self.digits(),
        }


def _enclose(x: mpmath.mpf, ops: int, scale=1) -> RationalInterval:
    slack = mpmath.mpf(10) ** (3 - DPS) * max(ops, 1) * (1 + abs(scale))
    return RI(to_fraction(x - slack), to_fraction(x + slack))


# ---------------------------------------------------------------------------
# shared piecewise integrals over [e, T]


def _pieces(T: int):
    """Yield (a, b, n, k) with floor(y) = n and ceil(y/e) = k on (a, b)."""
    e = mpmath.e
    n = 2  # e lies in [2, 3)
    k = 2  # ceil(y/e) = 2 just above e
    a = e
    while a < T:
        nb = mpmath.mpf(n + 1)
        kb = k * e
        b = min(nb, kb, mpmath.mpf(T))
        yield a, b, n, k
        if b == nb:
            n += 1
        if b == kb:
            k += 1
        a = b


def _frac_integrals(T: int) -> tuple[mpmath.mpf, mpmath.mpf, int]:
    """(I0, I1, pieces) with I_j = (1/e) int_e^T {y} (log y)^j log(ceil(y/e) e / y) dy/y^2."""
    with mpmath.workdps(DPS):
        I0 = mpmath.mpf(0)
        I1 = mpmath.mpf(0)
        count = 0
        la = mpmath.mpf(1)  # log e
        for a, b, n, k in _pieces(T):
            L = mpmath.log(k) + 1
            lb = mpmath.log(b)

            def F0(y, l):
                return L * l - l * l / 2 + n * (L - l - 1) / y

            def F1(y, l):
                return L * l * l / 2 - l**3 / 3 + n * (L * (l + 1) - (l * l + 2 * l + 2)) / y

            I0 += F0(b, lb) - F0(a, la)
            I1 += F1(b, lb) - F1(a, la)
            la = lb
            count += 1
        return I0 / mpmath.e, I1 / mpmath.e, count


@lru_cache(maxsize=8)
def _frac_integrals_cached(T: int):
    return _frac_integrals(T)


# ---------------------------------------------------------------------------
# series parts


def _series_c0(K: int) -> tuple[mpmath.mpf, int]:
    """sum_{k<=K} log^2(1 + 1/k)."""
    with mpmath.workdps(DPS):
        return mpmath.fsum(mpmath.log1p(mpmath.mpf(1) / k) ** 2 for k in range(1, K + 1)), K


def _series_c1p(K: int) -> tuple[mpmath.mpf, int]:
    """sum_{k<=K} (1 + log(k+1)) h^2 / 2 - h^3 / 3 with h = log(1 + 1/k)."""
    with mpmath.workdps(DPS):
        s = mpmath.mpf(0)
        for k in range(1, K + 1):
            h = mpmath.log1p(mpmath.mpf(1) / k)
            s += (1 + mpmath.log(k + 1)) * h * h / 2 - h**3 / 3
        return s, 3 * K


def _tail_c0(K: int) -> RationalInterval:
    """sum_{k>K} log^2(1+1/k), using 1/(k+1) <= log(1+1/k) <= 1/k and the
    integral test: sum 1/(k+1)^2 >= 1/(K+2) and sum 1/k^2 <= 1/K."""
    return RI(Fraction(1, K + 2), Fraction(1, K))


def _tail_c1p(K: int) -> RationalInterval:
    """Tail of the c1' series for k > K (K >= 3).

    Upper: h <= 1/k, drop -h^3/3, and compare with the integral of
    (1 + log(x+1)) / (2 x^2) from K, which is at most
    (log K + 2)/(2K) + 1/(4K^2).
    Lower: h >= 1/k - 1/(2k^2) so h^2 >= 1/k^2 - 1/k^3, and h^3 <= 1/k^3;
    the main part is at least the integral of (1 + log x)/(2x^2) from K+1,
    namely (log(K+1) + 2)/(2(K+1)), and the corrections total at most
    (3 + log K) / K^2.
    """
    lK = RI.point(K).log()
    lK1 = RI.point(K + 1).log()
    up = (lK + 2) / (2 * K) + Fraction(1, 4 * K * K)
    lo = (lK1 + 2) / (2 * (K + 1)) - (lK + 3) / (K * K)
    return RI(lo.lo, up.hi)


# ---------------------------------------------------------------------------
# public API


def _params(tol: Fraction) -> tuple[int, int]:
    """Series cutoff K and integral cutoff T for a target width ``tol``."""
    r = math.sqrt(float(tol))
    return max(2000, math.ceil(2 / r)), max(2000, math.ceil(1 / r))


def compute_c0(tol=Fraction(1, 10**8)) -> ConstantEnclosure:
    """c0 = (1/e) int_0^1 f_e(x) dx.

    series  (1/(2e)) sum log^2(1 + 1/k)
    closed  2/e^2 - log 2 / (2e)
    frac    (1/e) int_e^inf {y} log(ceil(y/e) e / y) dy / y^2, tail in [0, 1/(2T^2)]
    c0 = series + closed - frac
    """
    tol = to_fraction(tol)
    if tol < Fraction(1, 10**10):
        raise ValueError("tol >= 1e-10 supported")
    K, T = _params(tol)
    with mpmath.workdps(DPS):
        s, ops = _series_c0(K)
        e = mpmath.e
        inv2e = 1 / (2 * e)
        series = (_enclose(s, ops, s) + _tail_c0(K)) * _enclose(inv2e, 2, 1)
        closed = _enclose(2 / e**2 - mpmath.log(2) / (2 * e), 8, 1)
        I0, _, pieces = _frac_integrals_cached(T)
        frac = _enclose(I0, 12 * pieces, 100) + RI(Fraction(0), Fraction(1, 2 * T * T))
    value = series + closed - frac
    return ConstantEnclosure("c0", value, {"series": series, "closed": closed, "frac": frac})


def compute_c1_prime(tol=Fraction(1, 10**8)) -> ConstantEnclosure:
    """c1' = (1/e) int_0^1 f_e(x) log(1/x) dx, split like c0:

    series  (1/e) sum [(1 + log(k+1)) h^2/2 - h^3/3],  h = log(1 + 1/k)
    closed  6/e^2 - (log^2 2 + log 2 + 3)/(2e)
    frac    (1/e) int_e^inf {y} log y log(ceil(y/e) e / y) dy / y^2,
            tail in [0, (2 log T + 1)/(4 T^2)]
    """
    tol = to_fraction(tol)
    K, T = _params(tol)
    with mpmath.workdps(DPS):
        s, ops = _series_c1p(K)
        e = mpmath.e
        l2 = mpmath.log(2)
        series = (_enclose(s, ops, s) + _tail_c1p(K)) * _enclose(1 / e, 2, 1)
        closed = _enclose(6 / e**2 - (l2 * l2 + l2 + 3) / (2 * e), 10, 1)
        _, I1, pieces = _frac_integrals_cached(T)
        lT = RI.point(T).log()
        tail = (2 * lT + 1) / (4 * T * T)
        frac = _enclose(I1, 16 * pieces, 1000) + RI(Fraction(0), tail.hi)
    value = series + closed - frac
    return ConstantEnclosure("c1'", value, {"series": series, "closed": closed, "frac": frac})


def _c1pp_partial(K: int) -> tuple[float, float]:
    """(sum_{k<=K} (1/k) log((e/k) ceil(k/e)), error bound) in float64."""
    k = np.arange(1, K + 1, dtype=np.float64)
    u = k / math.e
    c = np.ceil(u)
    gap = c - u
    # ceil(k/e) is decided when k/e is not within float error of an integer
    close = np.flatnonzero((gap < 1e-9) | (gap > 1 - 1e-9))
    x = gap.copy()
    if close.size:
        with mpmath.workdps(40):
            for i in close.tolist():
                kk = i + 1
                uu = mpmath.mpf(kk) / mpmath.e
                x[i] = float(mpmath.ceil(uu) - uu)
    terms = np.log1p(math.e * x / k) / k
    S = math.fsum(terms.tolist())
    # x carries absolute error <= 4u(k/e + 1); log1p/k is e/k^2-Lipschitz in x
    err = float(np.sum(4 * UNIT_ROUNDOFF * (u + 1) * math.e / k**2)) + 8 * UNIT_ROUNDOFF * S
    return S, err


def _e_interval() -> RationalInterval:
    with mpmath.workdps(40):
        return RI(to_fraction(+mpmath.e - mpmath.mpf(10) ** -35), to_fraction(+mpmath.e + mpmath.mpf(10) ** -35))


def compute_c1_double_prime(K: int = 10**6, accelerate: bool = True, Nfreq: int = 10**5) -> ConstantEnclosure:
    """c1'' = sum_k (1/k) log((e/k) ceil(k/e)).

    Crude tail: [0, e/K].  Accelerated tail with x_k = {-k/e}:
      sum e x_k/k^2 - [0, e^2/(4K^2)],
      sum e x_k/k^2 = sum (e/2)/k^2 + sum e (x_k - 1/2)/k^2,
      first in [e/(2(K+1)), e/(2K)], second bounded by Erdos-Turan with
      |S_{n,K}| <= 1/((K+1)^2 |sin(pi n / e)|).
    """
    S, err = _c1pp_partial(K)
    partial = RI(to_fraction(S) - to_fraction(err), to_fraction(S) + to_fraction(err))
    e = _e_interval()
    if not accelerate:
        tail = RI(Fraction(0), (e / K).hi)
        return ConstantEnclosure("c1''", partial + tail, {"partial": partial, "tail": tail})
    half = RI((e / (2 * (K + 1))).lo, (e / (2 * K)).hi)
    second_order = RI(-(e * e / (4 * K * K)).hi, Fraction(0))
    # Erdos-Turan bound: the frequency sum is evaluated in floats; every
    # term is positive, so a relative margin of 1e-9 covers the rounding
    total_c = e / K
    B = total_c / (Nfreq + 1)
    n = np.arange(1, Nfreq + 1, dtype=np.float64)
    w = 2.0 / (np.pi * n) + 2.0 / (Nfreq + 1)
    acc = Fraction(math.fsum((w / _sin_lower_array(Nfreq)).tolist()) * (1 + 1e-9))
    ET = B + e * Fraction(1, (K + 1) ** 2) * acc
    osc = RI(-ET.hi, ET.hi)
    tail = half + osc + second_order
    return ConstantEnclosure("c1''", partial + tail,
                             {"partial": partial, "half": half, "erdos_turan": osc, "second_order": second_order})


def _sin_lower_array(Nfreq: int) -> np.ndarray:
    """Lower bounds for |sin(pi n / e)|, n = 1..Nfreq.

    Float evaluation of sin(pi n/e) has absolute error below 1e-12 for
    n <= 10^6; each value is reduced by 1e-11 and checked positive."""
    n = np.arange(1, Nfreq + 1, dtype=np.float64)
    v = np.abs(np.sin(np.pi * n / np.e)) - 1e-11
    if (v <= 0).any():
        bad = int(np.flatnonzero(v <= 0)[0]) + 1
        raise ArithmeticError(f"|sin(pi n/e)| too small to bound at n={bad}")
    return v


def compute_c1_suite(tol=Fraction(1, 10**8), accelerate: bool = True, K: int = 10**6, Nfreq: int = 10**5):
    """Return (c1', c1'', c1) with c1 = c1' + c0 c1'' - e c0^2 / 2."""
    c0 = compute_c0(tol)
    c1p = compute_c1_prime(tol)
    c1pp = compute_c1_double_prime(K, accelerate, Nfreq)
    e = _e_interval()
    c1 = c1p.value + c0.value * c1pp.value - e * c0.value * c0.value / 2
    c1e = ConstantEnclosure("c1", c1, {"c1'": c1p.value, "c0*c1''": c0.value * c1pp.value,
                                      "e*c0^2/2": e * c0.value * c0.value / 2})
    return c1p, c1pp, c1e


@lru_cache(maxsize=1)
def reference_constants() -> tuple[Fraction, Fraction]:
    """Midpoints of c0 and c1 (used for reference curves only)."""
    c0 = compute_c0(Fraction(1, 10**9))
    _, _, c1 = compute_c1_suite(Fraction(1, 10**9), K=10**5, Nfreq=10**4)
    return c0.value.mid, c1.value.mid

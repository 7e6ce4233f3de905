"""Parameters of the repair construction over a range of N.

The construction starts from the 3-rough elements of (t, t(1 + sigma)],
each repeated A times, with t = r N for a fixed rational ratio r, so
sigma = 3N/(A t) = 3/(r A) does not depend on N.  Every derived quantity
is evaluated at the end of the range where it is worst; the gammas are
fixed at their left-endpoint values, which stay valid for larger N since
larger gammas are always admissible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..ntheory.interval import RationalInterval, ri_log, to_fraction
from ..ntheory.primes import sieve_primes
from ..ntheory.smooth import kappa_bound

RI = RationalInterval
KAPPA_REPAIR_L = Fraction(9, 2)  # the repair steps always round up with L = 4.5
LOG_SQRT12 = ri_log(12) / 2
LOG2 = ri_log(2)
LOG_SQRT3 = ri_log(3) / 2


class RepairConditionError(ValueError):
    """A structural condition on (N, t, A, K, L) fails somewhere in the range."""


def parse_N(x) -> int | None:
    """Integer N from int / Fraction / decimal or scientific string; 'inf' -> None."""
    if x is None:
        return None
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "infinity", "oo"):
            return None
        if "e" in s and "/" not in s:
            mant, exp = s.split("e")
            v = Fraction(mant) * Fraction(10) ** int(exp)
        elif "^" in s:
            base, exp = s.split("^")
            v = Fraction(base) ** int(exp)
        else:
            v = Fraction(s)
    else:
        v = to_fraction(x)
    if v.denominator != 1:
        raise ValueError(f"N must be an integer, got {v}")
    return int(v)


def _t_ratio(t_rule) -> Fraction:
    if isinstance(t_rule, str):
        s = t_rule.replace(" ", "")
        if s.startswith("N/"):
            return 1 / Fraction(s[2:])
        if s.endswith("*N"):
            return Fraction(s[:-2])
        return Fraction(s)
    return to_fraction(t_rule)


def kappa_star_pair(L, gamma2: RationalInterval, gamma3: RationalInterval,
                    kappa_L: RationalInterval) -> tuple[RationalInterval, RationalInterval]:
    """(kappa^(2)_{L,gamma2}, kappa^(3)_{L,gamma3}) as enclosures."""
    l12 = ri_log(12 * to_fraction(L))
    c2 = LOG_SQRT12 / ((1 - gamma2) * LOG2)
    c3 = LOG_SQRT12 / ((1 - gamma3) * LOG_SQRT3)
    return (c2 - 1) * l12 + kappa_L * c2, (c3 - 1) * l12 + kappa_L * c3


@dataclass
class RepairParams:
    N_lo: int
    N_hi: int | None  # None means unbounded
    ratio: Fraction  # t = ratio * N
    A: int
    K: int
    L: Fraction
    sigma: Fraction
    kappa_L: RationalInterval  # kappa_* = kappa_L
    kappa45: RationalInterval
    gamma2: RationalInterval
    gamma3: RationalInterval
    kappa2: RationalInterval
    kappa3: RationalInterval

    @property
    def kappa_star(self) -> RationalInterval:
        return self.kappa_L

    @property
    def kappa_2star(self) -> Fraction:
        """Upper bound on max(kappa^(2), kappa^(3))."""
        return max(self.kappa2.hi, self.kappa3.hi)

    def t(self, N: int) -> Fraction:
        return self.ratio * N

    @property
    def t_lo(self) -> Fraction:
        return self.ratio * self.N_lo

    @property
    def singleton(self) -> bool:
        return self.N_hi == self.N_lo

    def gap_primes(self) -> list[int]:
        """Primes in (K, K(1 + sigma)]; none means delta_4 = alpha_4 = 0."""
        top = math.floor(self.K * (1 + self.sigma))
        return sieve_primes(max(top, 2)).primes_in(self.K, top).tolist()

    def describe(self) -> dict:
        return {
            "N_lo": self.N_lo, "N_hi": self.N_hi, "t_ratio": str(self.ratio),
            "A": self.A, "K": self.K, "L": str(self.L), "sigma": str(self.sigma),
            "kappa_L": float(self.kappa_L.hi), "kappa_4.5": float(self.kappa45.hi),
            "gamma2": float(self.gamma2.hi), "gamma3": float(self.gamma3.hi),
            "kappa_2star": float(self.kappa_2star),
        }


def check_conditions(N: int, t: Fraction, K: int, L: Fraction) -> None:
    if K < 5:
        raise RepairConditionError(f"K = {K} violates K >= 5")
    if not 1 <= t <= N:
        raise RepairConditionError(f"t = {t} is not in [1, N]")
    if (t / K) ** 2 < N:
        raise RepairConditionError(f"t/K >= sqrt(N) fails at N = {N}")
    if t < K**3:
        raise RepairConditionError(f"t/K^2 >= K fails at N = {N}")
    if not t > 3 * L:
        raise RepairConditionError(f"t > 3L fails at N = {N}")


def build_params(N_range, t_rule="N/3", A: int = 189, K: int = 293, L=Fraction(9, 2)) -> RepairParams:
    """Validate the conditions over the whole range and compute the derived parameters.

    N_range is an integer, a string such as "1e11", or a pair (lo, hi) with
    hi = None / "inf" for an unbounded range.  t_rule is "N/3", a ratio
    string or a rational r (t = r N).
    """
    if isinstance(N_range, (tuple, list)):
        lo, hi = parse_N(N_range[0]), parse_N(N_range[1])
    else:
        lo = hi = parse_N(N_range)
    if lo is None or lo < 1:
        raise ValueError("the range needs a finite positive left endpoint")
    if hi is not None and hi < lo:
        raise ValueError("empty N range")
    r = _t_ratio(t_rule)
    if not 0 < r <= 1:
        raise ValueError("t/N must lie in (0, 1]")
    A, K, L = int(A), int(K), to_fraction(L)
    if A < 1:
        raise ValueError("A must be a natural number")
    if L < 1:
        raise ValueError("L must be at least 1")
    # every condition is monotone in N once it holds, so the left end decides
    check_conditions(lo, r * lo, K, L)
    sigma = 3 / (r * A)
    kL = kappa_bound(L)
    k45 = kappa_bound(KAPPA_REPAIR_L)
    lt = ri_log(r * lo)
    g2 = LOG2 / LOG_SQRT3 * (ri_log(2 * L) + kL) / (lt - ri_log(2 * L))
    g3 = LOG_SQRT3 / LOG2 * (ri_log(3 * L) + kL) / (lt - ri_log(3 * L))
    # round the gammas up to short rationals; any larger gamma is admissible
    g2 = RI.point(_round_up(g2.hi))
    g3 = RI.point(_round_up(g3.hi))
    if g2.hi >= 1 or g3.hi >= 1:
        raise RepairConditionError("gamma_2 and gamma_3 must be below 1 (N too small for L)")
    k2, k3 = kappa_star_pair(KAPPA_REPAIR_L, g2, g3, k45)
    return RepairParams(lo, hi, r, A, K, L, sigma, kL, k45, g2, g3, k2, k3)


def _round_up(x: Fraction, digits: int = 30) -> Fraction:
    q = 10**digits
    return Fraction(-((-x.numerator * q) // x.denominator), q)

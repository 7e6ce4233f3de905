"""The accounting identity for an explicit multiset.

For a multiset B of naturals and a threshold t,

    excess_t(B) + sum_p nu_p(N!/prod B) log p = log N! - |B| log t,

with excess_t(B) = sum_{a in B} log(a/t).  Surpluses are exact integers;
the logarithmic quantities are rational enclosures.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from ..certify import Certificate
from ..ntheory.interval import RationalInterval, ri_log, ri_sum, to_fraction
from ..ntheory.primes import factorize, legendre_valuation, sieve_primes

RI = RationalInterval
IDENTITY_WIDTH = Fraction(1, 10**12)


@dataclass
class AccountingView:
    N: int
    t: Fraction
    size: int
    excess: RationalInterval
    surplus: dict = field(default_factory=dict)  # p -> nu_p(N!) - nu_p(prod B), nonzero only
    surplus_log: RationalInterval = None  # sum_p surplus_p log p
    budget: RationalInterval = None  # log N! - |B| log t
    admissible: bool = True  # every element >= t

    @property
    def deficits(self) -> dict:
        return {p: -s for p, s in self.surplus.items() if s < 0}

    @property
    def surpluses(self) -> dict:
        return {p: s for p, s in self.surplus.items() if s > 0}

    @property
    def is_factorization(self) -> bool:
        return not self.surplus

    @property
    def is_subfactorization(self) -> bool:
        return not self.deficits

    def identity_residual(self) -> RationalInterval:
        """Enclosure of (excess + surplus terms) - budget; contains 0."""
        return self.excess + self.surplus_log - self.budget


def _log_factorial(N: int, primes) -> RationalInterval:
    return ri_sum(ri_log(p) * legendre_valuation(N, p) for p in primes)


def accounting(B, t, N: int | None = None) -> AccountingView:
    """Accounting view of a multiset (iterable of naturals) or a Certificate.

    N defaults to the certificate's N; for a plain multiset it must be given.
    The identity is asserted to hold within the enclosure width.
    """
    if isinstance(B, Certificate):
        N = B.N if N is None else N
        elems = B.expand()
    else:
        elems = [int(a) for a in B]
        if N is None:
            raise ValueError("N is required for a plain multiset")
    if N < 1:
        raise ValueError("N must be positive")
    if any(a < 1 for a in elems):
        raise ValueError("elements must be natural numbers")
    t = to_fraction(t)
    if t <= 0:
        raise ValueError("t must be positive")
    counts = Counter(elems)
    prod_val: Counter = Counter()
    for a, c in counts.items():
        for p, e in factorize(a).items():
            prod_val[p] += e * c
    small = sieve_primes(max(N, 2)).primes_in(1, N).tolist() if N >= 2 else []
    primes = sorted(set(prod_val) | set(small))
    surplus = {}
    for p in primes:
        s = legendre_valuation(N, p) - prod_val.get(p, 0)
        if s:
            surplus[p] = s
    lt = ri_log(t)
    excess = ri_sum((ri_log(a) - lt) * c for a, c in counts.items())
    surplus_log = ri_sum(ri_log(p) * s for p, s in surplus.items())
    budget = _log_factorial(N, small) - lt * len(elems)
    view = AccountingView(N, t, len(elems), excess, surplus, surplus_log, budget,
                          all(a >= t for a in elems))
    res = view.identity_residual()
    if not res.contains(0) or res.width > IDENTITY_WIDTH:
        raise AssertionError(f"accounting identity not confirmed: residual {res}")
    return view

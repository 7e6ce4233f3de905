"""LP solves with exact-rational dual certificates.

The float search uses HiGHS through scipy; nothing it reports is trusted.
Dual weights are rebuilt as rationals, forced weakly increasing, and
checked exactly before any upper bound leaves this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from ..certify import DualCertificate, dual_constraint_sums, verify_dual
from ..ntheory.primes import PrimeTable, factorial_valuations, sieve_primes
from .model import LPModel, build_model

DENOMINATOR_TRIALS = (10**3, 10**4, 10**5, 10**6, 10**7)
DYADIC_BITS = 52


class LPError(RuntimeError):
    pass


@dataclass
class LPSolution:
    status: str
    objective: float
    primal: np.ndarray | None = None
    duals: np.ndarray | None = None
    dual_certificate: DualCertificate | None = None
    exact_value: Fraction | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def upper(self) -> int | None:
        """Certified floor of the exact dual value, when a certificate exists."""
        return None if self.exact_value is None else math.floor(self.exact_value)


def _highs(model: LPModel, method: str = "highs-ds"):
    n = model.columns.size
    if n == 0:
        return None
    res = linprog(-np.ones(n), A_ub=model.matrix, b_ub=model.capacity.astype(float), bounds=(0, None), method=method)
    if res.status != 0:
        # dual simplex occasionally stalls on degenerate instances
        res = linprog(-np.ones(n), A_ub=model.matrix, b_ub=model.capacity.astype(float), bounds=(0, None), method="highs")
    return res


def _dual_lp_monotone(model: LPModel):
    """min cap.w  s.t.  A^T w >= 1,  w nondecreasing,  w >= 0."""
    k = model.primes.size
    AT = model.matrix.T.tocsr()
    import scipy.sparse as sp

    mono = sp.diags([np.ones(k - 1), -np.ones(k - 1)], [0, 1], shape=(k - 1, k)) if k > 1 else sp.csr_matrix((0, k))
    A_ub = sp.vstack([-AT, mono]).tocsr()
    b_ub = np.concatenate([-np.ones(AT.shape[0]), np.zeros(max(k - 1, 0))])
    res = linprog(model.capacity.astype(float), A_ub=A_ub, b_ub=b_ub, bounds=(0, None), method="highs")
    if res.status != 0:
        raise LPError(f"monotone dual solve failed: {res.message}")
    return res.x


def _prefix_max(ws: list[Fraction]) -> list[Fraction]:
    out, cur = [], Fraction(0)
    for w in ws:
        cur = max(cur, w)
        out.append(cur)
    return out


def _value(weights: dict[int, Fraction], nu: dict[int, int]) -> Fraction:
    return sum((w * nu[p] for p, w in weights.items() if w), Fraction(0))


def exact_dual(N: int, t: int, y: np.ndarray, primes: np.ndarray, table: PrimeTable,
               target: float | None = None) -> tuple[DualCertificate, list[str]]:
    """Turn float dual weights into an exactly feasible, weakly increasing
    rational certificate.

    First try small-denominator reconstructions (optimal vertices tend to
    have modest denominators); if none is feasible, round to dyadics and
    divide by the smallest constraint sum, which is exactly feasible by
    construction.
    """
    notes = []
    y = np.maximum(np.asarray(y, dtype=float), 0.0)
    y = np.maximum.accumulate(y) if y.size else y
    plist = [int(p) for p in primes]
    nu = dict(zip(plist, factorial_valuations(N, primes).tolist()))
    for D in DENOMINATOR_TRIALS:
        ws = _prefix_max([Fraction(float(v)).limit_denominator(D) for v in y])
        W = {p: w for p, w in zip(plist, ws) if w}
        den, S = dual_constraint_sums(N, t, W, table)
        if S.size == 0 or (S >= den).all():
            val = _value(W, nu)
            if target is None or float(val) <= target + 1e-6 * max(1.0, abs(target)):
                notes.append(f"rational reconstruction with denominators <= {D}")
                return DualCertificate(N, t, W, val), notes
    scale = 1 << DYADIC_BITS
    ws = _prefix_max([Fraction(int(round(v * scale)), scale) for v in y])
    W = {p: w for p, w in zip(plist, ws) if w}
    den, S = dual_constraint_sums(N, t, W, table)
    smin = Fraction(int(S.min()), den) if S.size else Fraction(1)
    if smin <= 0:
        raise LPError("dual weights leave a constraint with zero coverage")
    if smin < 1:
        W = {p: w / smin for p, w in W.items()}
        notes.append(f"dyadic weights rescaled by 1/{float(smin):.12g}")
    return DualCertificate(N, t, W, _value(W, nu)), notes


def solve_lp(model: LPModel, *, certify: bool = True, table: PrimeTable | None = None) -> LPSolution:
    """Solve the relaxation and, when the model describes the whole of
    M_R(N,t) (interval or J policies with t <= N/2), attach a verified dual
    certificate.  The certified upper bound is ``solution.upper``."""
    res = _highs(model)
    if res is None:
        return LPSolution("optimal", 0.0, np.zeros(0), np.zeros(model.primes.size))
    if res.status == 2:
        return LPSolution("infeasible", float("nan"))
    if res.status != 0:
        raise LPError(f"LP solve failed: {res.message}")
    y = -np.asarray(res.ineqlin.marginals)
    sol = LPSolution("optimal", float(-res.fun), np.asarray(res.x), y)
    N, t = model.N, model.t
    if not certify or model.policy == "smooth" or capacity_overridden(model):
        return sol
    if 2 * t > N:
        sol.notes.append("t > N/2: no dual certificate (weak monotonicity argument needs t <= N/2)")
        return sol
    table = table or sieve_primes(max(N, 2))
    if (np.diff(y) < -1e-9).any():
        sol.notes.append("solver duals not monotone; re-solved with monotone rows")
        y = _dual_lp_monotone(model)
    cert, notes = exact_dual(N, t, y, model.primes, table, target=sol.objective)
    sol.notes += notes
    rep = verify_dual(cert, table)
    if not rep.accepted:
        raise LPError(f"reconstructed dual failed exact verification: {rep.errors}")
    sol.dual_certificate = cert
    sol.exact_value = rep.value
    return sol


def capacity_overridden(model: LPModel) -> bool:
    if model.primes.size == 0:
        return False
    return not np.array_equal(model.capacity, factorial_valuations(model.N, model.primes))


def lp_upper_value(N: int, t: int, table: PrimeTable | None = None) -> LPSolution:
    return solve_lp(build_model(N, t, "interval", table=table), table=table)


def lp_upper_t(N: int, table: PrimeTable | None = None) -> tuple[int, LPSolution | None]:
    """Largest t not excluded by a verified dual certificate.

    Returns (T, sol) with t(N) <= T; ``sol`` is the certified LP at T+1
    (None when the trivial bound t <= N/2 region was not needed).
    M_R(N,t) is non-increasing in t, so bisection applies.
    """
    if N <= 5:
        return {1: 1, 2: 1, 3: 1, 4: 2, 5: 2}[N], None
    table = table or sieve_primes(max(N, 2))
    lo, hi = 1, N // 2 + 1  # certified: t(N) <= N // 2, so hi is excluded
    cache: dict[int, LPSolution] = {}

    def excluded(t: int) -> bool:
        if t > N // 2:
            return True
        s = lp_upper_value(N, t, table)
        cache[t] = s
        return s.upper is not None and s.upper < N

    while hi - lo > 1:
        mid = (lo + hi) // 2
        if excluded(mid):
            hi = mid
        else:
            lo = mid
    return lo, cache.get(hi)


# ---------------------------------------------------------------------------
# exact dense simplex (oracle and small-model fallback)


def exact_simplex(A: list[list[Fraction]], b: list[Fraction], c: list[Fraction], max_pivots: int = 100000):
    """maximize c.x  s.t.  A x <= b, x >= 0, with b >= 0, in exact
    rationals using Bland's rule.  Returns (value, x, y) with y the
    optimal dual (y >= 0, A^T y >= c, b.y = value)."""
    m, n = len(A), len(c)
    if any(v < 0 for v in b):
        raise ValueError("exact_simplex needs b >= 0")
    T = [[Fraction(v) for v in A[i]] + [Fraction(int(i == k)) for k in range(m)] + [Fraction(b[i])] for i in range(m)]
    z = [-Fraction(v) for v in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = [n + i for i in range(m)]
    for _ in range(max_pivots):
        enter = next((j for j in range(n + m) if z[j] < 0), None)
        if enter is None:
            break
        best, leave = None, None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                r = T[i][-1] / a
                if best is None or r < best or (r == best and basis[i] < basis[leave]):
                    best, leave = r, i
        if leave is None:
            raise LPError("unbounded")
        piv = T[leave][enter]
        T[leave] = [v / piv for v in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [a - f * bb for a, bb in zip(T[i], T[leave])]
        f = z[enter]
        z = [a - f * bb for a, bb in zip(z, T[leave])]
        basis[leave] = enter
    else:
        raise LPError("pivot limit reached")
    x = [Fraction(0)] * (n + m)
    for i, j in enumerate(basis):
        x[j] = T[i][-1]
    y = z[n : n + m]
    return z[-1], x[:n], y


def exact_lp_value(model: LPModel):
    """Exact M_R for a (small) model via the rational simplex."""
    D = model.dense()
    A = [[Fraction(int(v)) for v in row] for row in D]
    b = [Fraction(int(v)) for v in model.capacity]
    c = [Fraction(1)] * model.columns.size
    return exact_simplex(A, b, c)

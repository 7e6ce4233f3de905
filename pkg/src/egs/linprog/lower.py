"""LP-based lower bounds: floor+residuals and smooth factorization."""

from __future__ import annotations

import math

import numpy as np

from ..certify import Certificate, verify_subfactorization
from ..greedy.core import GreedyConfig, _large_phase, _residual_by_value, greedy_residual
from ..ntheory.primes import PrimeTable, sieve_primes
from .model import LPModel, build_model
from .solve import LPSolution, solve_lp

FLOOR_SLACK = 1e-7


def integral_floor(model: LPModel, x: np.ndarray) -> np.ndarray:
    """Floor the primal, then repair any exact capacity violation caused by
    float noise by decrementing the columns that touch the offending prime."""
    f = np.floor(np.asarray(x, dtype=float) + FLOOR_SLACK).astype(np.int64)
    f[f < 0] = 0
    A = model.matrix.tocsr()
    A_int = A.astype(np.int64)
    used = A_int @ f
    over = np.flatnonzero(used > model.capacity)
    for r in over.tolist():
        row = A_int.getrow(r)
        for k, v in sorted(zip(row.indices.tolist(), row.data.tolist()), key=lambda kv: -model.columns[kv[0]]):
            while used[r] > model.capacity[r] and f[k] > 0:
                f[k] -= 1
                used -= A_int[:, k].toarray().ravel() * 1
    return f


def _residual_array(N: int, model: LPModel, f: np.ndarray) -> np.ndarray:
    used = model.matrix.astype(np.int64) @ f
    res = np.zeros(N + 1, dtype=np.int64)
    res[model.primes] = model.capacity - used
    if (res < 0).any():
        raise AssertionError("floored primal violates a capacity")
    return res


def floor_residuals_lower(N: int, t: int, *, table: PrimeTable | None = None,
                          solution: LPSolution | None = None) -> tuple[Certificate, LPSolution]:
    """Floored LP primal plus greedy packing of the leftover primes."""
    table = table or sieve_primes(max(N, 2))
    model = build_model(N, t, "interval", table=table)
    sol = solution or solve_lp(model, table=table)
    f = integral_floor(model, sol.primal)
    res = _residual_array(N, model, f)
    extra = greedy_residual(N, t, res, table)
    factors = [(int(c), int(j)) for j, c in zip(model.columns.tolist(), f.tolist()) if c > 0]
    factors = _merge(factors + extra)
    return Certificate(N, t, factors), sol


def _merge(pairs):
    acc: dict[int, int] = {}
    for c, f in pairs:
        acc[f] = acc.get(f, 0) + c
    return [(c, f) for f, c in sorted(acc.items()) if c]


def smooth_lower(N: int, t: int, *, table: PrimeTable | None = None) -> Certificate:
    """Greedy for every prime above sqrt(N), then floor+residuals over
    sqrt(N)-smooth columns on the leftover small-prime exponents."""
    if N < 100:
        raise ValueError("smooth_lower needs N >= 100")
    table = table or sieve_primes(max(N, 2))
    primes, vals = _residual_by_value(N, table)
    r = math.isqrt(N)
    if r * r == N:
        r -= 1
    M = max(r, GreedyConfig().split(N, t)) if 1 < N / 4 < t < N / 2 else r
    blocks, _ = _large_phase(N, t, M, table, vals)
    if (vals[primes[primes <= M]] < 0).any():
        raise ValueError("large-prime phase over-uses a small prime")
    model = build_model(N, t, "smooth", table=table, capacity=vals)
    sol = solve_lp(model, certify=False)
    f = integral_floor(model, sol.primal) if model.columns.size else np.zeros(0, np.int64)
    res = vals.copy()
    if model.columns.size:
        res[model.primes] = model.capacity - model.matrix.astype(np.int64) @ f
    # primes in (sqrt N, M] are not rows of the smooth model; keep them for the greedy
    extra = greedy_residual(N, t, res, table)
    factors = [(int(c), int(j)) for j, c in zip(model.columns.tolist(), f.tolist()) if c > 0]
    return Certificate(N, t, _merge(factors + extra), [(m, lo, hi, e) for m, lo, hi, e, _ in blocks])


def lp_lower_t(N: int, t_hint: int | None = None, table: PrimeTable | None = None) -> tuple[int, Certificate]:
    """Largest t (scanning down from ``t_hint`` or the LP upper bound)
    where floor+residuals yields an accepted certificate of size >= N."""
    from .solve import lp_upper_t

    table = table or sieve_primes(max(N, 2))
    t = t_hint if t_hint is not None else lp_upper_t(N, table)[0]
    while t > 1:
        if 2 * t <= N or N > 5:
            cert, _ = floor_residuals_lower(N, t, table=table)
            rep = verify_subfactorization(cert, table)
            if rep.accepted:
                return t, cert
        t -= 1
    return 1, Certificate(N, 1, [(N, 1)])

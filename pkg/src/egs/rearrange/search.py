"""Finite LP search for weight tables under a geometric tail ansatz.

The search is best effort: it maximises the smallest scaled tail margin
l * (T(l) - R(l)) over the check points of verify_asym_crit, subject to the
prime budget inequalities tightened by ``prime_slack``.  The float optimum
is floored to dyadic rationals (which only lowers prime budgets) and the
result must still pass the exact verifier before it is trusted.
"""

from __future__ import annotations

import bisect
import math
from fractions import Fraction

import numpy as np
import scipy.optimize
import scipy.sparse as sp

from ..ntheory.primes import factorize, valuation
from .criteria import _RightSide, prime_budget
from .downset import downset_analyze
from .weights import WeightTable


class WeightSearchError(RuntimeError):
    pass


def _floor_dyadic(x: float, bits: int) -> Fraction:
    return Fraction(max(0, math.floor(x * 2**bits)), 2**bits)


def search_weights(D, alpha, tail: tuple, prime_slack=0, bits: int = 48,
                   candidates=None) -> WeightTable:
    """LP search over explicit weights plus the tail ansatz.

    tail = ("pow2", r0) searches a_l for l < 2^r0 and the constant c;
    tail = ("halve", l0) searches a_l for l < l0.  Candidates default to all
    l >= 2 in range whose prime factors lie in D (a_1 never enters a tail
    sum).  prime_slack is a number or a
    dict p -> number subtracted from each prime budget.
    """
    alpha = Fraction(alpha)
    table = downset_analyze(D)
    dprimes = set(table.downset.primes)
    if tail[0] == "pow2":
        r0 = int(tail[1])
        top = 2**r0
    elif tail[0] == "halve":
        l0 = int(tail[1])
        top = l0
    else:
        raise ValueError("tail must be ('pow2', r0) or ('halve', l0)")
    if candidates is None:
        candidates = [l for l in range(2, top) if set(factorize(l)) <= dprimes]
    cand = sorted(candidates)
    n = len(cand)
    idx = {l: i for i, l in enumerate(cand)}
    # variables: a_0..a_{n-1}, z, [c], then suffix sums s_0..s_n (s_n = 0)
    zi = n
    ci = n + 1
    si = n + 1 + (1 if tail[0] == "pow2" else 0)
    nv = si + n + 1

    # chains as (base, var index, coefficient of the variable in w)
    if tail[0] == "pow2":
        chains = [(top, ci, 1.0 / top)]
    else:
        chains = [(2 * l, idx[l], 0.5) for l in cand if 2 * l >= l0]
    maxD = max(table.sigma)
    lstar = max(1, cand[-1], -(-max(b for b, _, _ in chains) // 2), math.ceil(alpha * maxD))
    pts = sorted({1, lstar} | {l for l in cand if l < 2 * lstar}
                 | {b * 2**j for b, _, _ in chains for j in range(0, 64) if b * 2**j < 2 * lstar})

    R = _RightSide(table, alpha)
    rows, cols, vals, rhs = [], [], [], []
    r = 0
    slack = prime_slack if isinstance(prime_slack, dict) else {p: prime_slack for p in dprimes}
    for p in sorted(dprimes):
        for l in cand:
            v = valuation(l, p)
            if v:
                rows.append(r); cols.append(idx[l]); vals.append(float(v))
        for b, vi, coef in chains:
            k = 2 * coef * (valuation(b, p) + (1 if p == 2 else 0))
            if k:
                rows.append(r); cols.append(vi); vals.append(k)
        rhs.append(float(prime_budget(table, p)) - float(slack.get(p, 0)))
        r += 1
    for l in pts:
        # z - l * T(l) <= -l * R(l), with T(l) = s_k + chain part, k = first candidate > l
        rows.append(r); cols.append(zi); vals.append(1.0)
        k = bisect.bisect_right(cand, l)
        rows.append(r); cols.append(si + k); vals.append(-float(l))
        for b, vi, coef in chains:
            j = 0
            while b * 2**j <= l:
                j += 1
            rows.append(r); cols.append(vi); vals.append(-float(l) * 2 * coef / 2**j)
        rhs.append(-float(l * R(l)))
        r += 1
    erows, ecols, evals = [], [], []
    for k in range(n + 1):
        # s_k - s_{k+1} - a_k = 0, and s_n = 0
        erows.append(k); ecols.append(si + k); evals.append(1.0)
        if k < n:
            erows += [k, k]; ecols += [si + k + 1, k]; evals += [-1.0, -1.0]
    Aeq = sp.csr_matrix((evals, (erows, ecols)), shape=(n + 1, nv))
    A = sp.csr_matrix((vals, (rows, cols)), shape=(r, nv))
    c = np.zeros(nv)
    c[zi] = -1.0
    bounds = [(0, None)] * nv
    bounds[zi] = (None, 1.0)
    res = scipy.optimize.linprog(c, A_ub=A, b_ub=np.array(rhs), A_eq=Aeq, b_eq=np.zeros(n + 1),
                                  bounds=bounds, method="highs")
    if res.status != 0:
        raise WeightSearchError(f"LP search failed: {res.message}")
    x = res.x
    explicit = {l: _floor_dyadic(x[idx[l]], bits) for l in cand}
    if tail[0] == "pow2":
        W = WeightTable(explicit, ("pow2", r0, _floor_dyadic(x[ci], bits)), tuple(sorted(table.sigma)), alpha)
    else:
        W = WeightTable(explicit, ("halve", l0), tuple(sorted(table.sigma)), alpha)
    W.lp_margin = float(x[zi])
    return W

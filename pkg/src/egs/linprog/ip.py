"""Exact M(N,t) by branch and bound over the LP relaxation.

Node bounds are Lagrangian: for any y >= 0 and box l <= m <= u,
    sum_j m_j <= y.c + sum_j max((1 - (A^T y)_j) l_j, (1 - (A^T y)_j) u_j).
y is taken from the float LP duals and scaled to integers, so every prune
is decided in exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from ..certify import Certificate
from ..greedy.core import greedy_residual
from ..ntheory.primes import PrimeTable, sieve_primes
from .model import LPModel, build_model
from .solve import LPError, lp_upper_t

DUAL_SCALE = 1 << 30
DEFAULT_NODE_LIMIT = 10**6
DEFAULT_IP_CEILING = 2000


@dataclass
class IPResult:
    lower: int
    upper: int
    nodes: int
    status: str  # optimal | decided | node-limit
    certificate: Certificate | None = None

    @property
    def value(self) -> int | None:
        return self.lower if self.lower == self.upper else None


class _BB:
    def __init__(self, model: LPModel, table: PrimeTable):
        self.model = model
        self.table = table
        self.A = model.matrix.tocsc()
        self.Ai = self.A.astype(np.int64)
        self.AT = self.Ai.T.tocsr()
        self.cap = model.capacity.astype(np.int64)
        n = model.columns.size
        ub = np.full(n, np.iinfo(np.int64).max // 4, dtype=np.int64)
        for k in range(n):
            s, e = self.A.indptr[k], self.A.indptr[k + 1]
            rows, vals = self.A.indices[s:e], self.A.data[s:e].astype(np.int64)
            if rows.size:
                ub[k] = int((self.cap[rows] // vals).min())
        self.ub0 = ub

    def exact_bound(self, y: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> int:
        Y = np.maximum(np.rint(np.maximum(y, 0) * DUAL_SCALE), 0).astype(np.int64)
        red = DUAL_SCALE - self.AT @ Y
        total = int(Y @ self.cap) + int(np.where(red > 0, red * hi, red * lo).sum())
        return total // DUAL_SCALE

    def relax(self, lo: np.ndarray, hi: np.ndarray):
        n = lo.size
        res = linprog(-np.ones(n), A_ub=self.A, b_ub=self.cap.astype(float),
                      bounds=np.column_stack([lo, hi]).astype(float), method="highs")
        return res

    def incumbent(self, lo: np.ndarray, x: np.ndarray):
        f = np.maximum(np.floor(x + 1e-7).astype(np.int64), lo)
        used = self.Ai @ f
        if (used > self.cap).any():
            f = lo.copy()
            used = self.Ai @ f
        res = np.zeros(self.model.N + 1, dtype=np.int64)
        res[self.model.primes] = self.cap - used
        extra = greedy_residual(self.model.N, self.model.t, res, self.table)
        count = int(f.sum()) + sum(c for c, _ in extra)
        return count, f, extra


def ip_exact(N: int, t: int, *, target: int | None = None, node_limit: int = DEFAULT_NODE_LIMIT,
             table: PrimeTable | None = None, ceiling: int = DEFAULT_IP_CEILING) -> IPResult:
    """Exact M(N,t) over the minimal column set J_{t,N}.

    With ``target`` the search stops once an integer point reaching the
    target is found, and prunes every node that provably cannot reach it;
    the result then decides M(N,t) >= target.
    """
    if N > ceiling:
        raise ValueError(f"N={N} exceeds the IP ceiling {ceiling}")
    table = table or sieve_primes(max(N, 2))
    if t <= 1:
        return IPResult(N, N, 0, "optimal", Certificate(N, t, [(N, 1)]))
    model = build_model(N, t, "J", table=table)
    bb = _BB(model, table)
    n = model.columns.size
    best, best_cert = -1, None
    root_upper = None
    stack = [(np.zeros(n, np.int64), bb.ub0.copy())]
    nodes = 0
    goal = target
    while stack:
        if nodes >= node_limit:
            upper = root_upper if root_upper is not None else N
            return IPResult(max(best, 0), max(upper, best), nodes, "node-limit", best_cert)
        lo, hi = stack.pop()
        nodes += 1
        if (bb.Ai @ lo > bb.cap).any():
            continue
        res = bb.relax(lo, hi)
        if res.status == 2:
            raise LPError("LP reported infeasible at a node whose lower corner is feasible")
        if res.status != 0:
            raise LPError(f"node LP failed: {res.message}")
        y = -np.asarray(res.ineqlin.marginals)
        bound = bb.exact_bound(y, lo, hi)
        if root_upper is None:
            root_upper = bound
        if bound <= best or (goal is not None and bound < goal):
            continue
        x = np.asarray(res.x)
        count, f, extra = bb.incumbent(lo, x)
        if count > best:
            best = count
            pairs = [(int(c), int(j)) for j, c in zip(model.columns.tolist(), f.tolist()) if c > 0] + extra
            acc: dict[int, int] = {}
            for c, j in pairs:
                acc[j] = acc.get(j, 0) + c
            best_cert = Certificate(N, t, [(c, j) for j, c in sorted(acc.items())])
            if goal is not None and best >= goal:
                return IPResult(best, max(best, root_upper), nodes, "decided", best_cert)
        if bound <= best:
            continue
        frac = x - np.floor(x + 1e-9)
        frac[(frac < 1e-7) | (frac > 1 - 1e-7)] = 0
        if not frac.any():
            continue  # integral LP optimum: the floor already realised it
        score = np.minimum(frac, 1 - frac)
        k = int(np.flatnonzero(score == score.max())[-1])  # most fractional, ties by larger j
        v = math.floor(x[k])
        lo_up, hi_dn = lo.copy(), hi.copy()
        lo_up[k] = v + 1
        hi_dn[k] = v
        if lo_up[k] <= hi[k]:
            stack.append((lo, hi_dn))
            stack.append((lo_up, hi))
        else:
            stack.append((lo, hi_dn))
    if goal is not None:
        # exhausted without reaching the target: every node bound was below it
        return IPResult(max(best, 0), goal - 1 if best < goal else best, nodes, "decided", best_cert)
    return IPResult(best, best, nodes, "optimal", best_cert)


def t_exact(N: int, *, table: PrimeTable | None = None, node_limit: int = DEFAULT_NODE_LIMIT):
    """Exact t(N) for small N: start from the certified LP upper bound and
    walk down, deciding M(N,t) >= N by branch and bound."""
    table = table or sieve_primes(max(N, 2))
    T, _ = lp_upper_t(N, table)
    t = T
    while t >= 1:
        r = ip_exact(N, t, target=N, table=table, node_limit=node_limit)
        if r.status == "node-limit":
            raise RuntimeError(f"node limit reached at t={t}")
        if r.lower >= N:
            return t, r.certificate
        t -= 1
    return 1, Certificate(N, 1, [(N, 1)])

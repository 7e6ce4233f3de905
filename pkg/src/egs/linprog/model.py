"""LP/IP models of M(N,t): columns are candidate factors j, rows are primes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..ntheory.primes import PrimeTable, factorial_valuations, sieve_primes, smallest_factor_table

POLICIES = ("interval", "J", "J-support", "smooth")
DEFAULT_COLUMN_CEILING = 3_000_000


class ModelSizeError(ValueError):
    pass


@dataclass
class LPModel:
    """maximize sum_j m_j  s.t.  sum_j nu_p(j) m_j <= capacity_p,  m_j >= 0."""

    N: int
    t: int
    policy: str
    columns: np.ndarray
    primes: np.ndarray
    capacity: np.ndarray
    matrix: sp.csr_matrix = field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def column_factorization(self, k: int) -> dict[int, int]:
        col = self.matrix.getcol(k).tocoo()
        return {int(self.primes[r]): int(v) for r, v in zip(col.row, col.data)}

    def dense(self) -> np.ndarray:
        return self.matrix.toarray().astype(np.int64)


def _interval_incidence(N: int, t: int, primes: np.ndarray):
    rows, cols, data = [], [], []
    for i, p in enumerate(primes.tolist()):
        q = p
        while q <= N:
            first = -(-t // q) * q
            if first <= N:
                js = np.arange(first - t, N - t + 1, q)
                rows.append(np.full(js.size, i, dtype=np.int64))
                cols.append(js)
            q *= p
    if not rows:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    return np.concatenate(rows), np.concatenate(cols)


def _assemble(rows, cols, nrows, ncols) -> sp.csr_matrix:
    # duplicate (row, col) pairs sum, which turns prime-power hits into nu_p(j)
    m = sp.coo_matrix((np.ones(rows.size, dtype=np.float64), (rows, cols)), shape=(nrows, ncols))
    return m.tocsr()


def _factor_columns(columns: list[int], primes: np.ndarray):
    spf = smallest_factor_table(max(max(columns, default=2), 2))
    index = {int(p): i for i, p in enumerate(primes.tolist())}
    rows, cols, data = [], [], []
    for k, j in enumerate(columns):
        while j > 1:
            p = int(spf[j])
            e = 0
            while j % p == 0:
                j //= p
                e += 1
            rows.append(index[p])
            cols.append(k)
            data.append(e)
    m = sp.coo_matrix((np.asarray(data, float), (np.asarray(rows, np.int64), np.asarray(cols, np.int64))),
                      shape=(primes.size, len(columns)))
    return m.tocsr()


def _factor_small(m: int, spf: np.ndarray) -> dict[int, int]:
    out: dict[int, int] = {}
    while m > 1:
        p = int(spf[m])
        m //= p
        out[p] = out.get(p, 0) + 1
    return out


def minimal_columns(N: int, t: int, support_only: bool = False, table: PrimeTable | None = None,
                    ceiling: int = DEFAULT_COLUMN_CEILING) -> list[int]:
    """J_{t,N}: j >= t with j | N! and no proper divisor >= t.

    The largest proper divisor of j is j / spf(j), so membership means
    j = p*m with m < t, p = spf(j) and p*m >= t.  With ``support_only`` the
    divisibility test is weakened to "every prime factor is <= N".
    """
    table = table or sieve_primes(max(N, 2))
    primes = table.primes[: table.pi(N)]
    nu = dict(zip(primes.tolist(), factorial_valuations(N, primes).tolist()))
    if t <= 1:
        return [1]
    spf = smallest_factor_table(max(t, 2))
    out = []
    plist = primes.tolist()
    for m in range(1, t):
        top = int(spf[m]) if m > 1 else plist[-1] if plist else 1
        lo = -(-t // m)
        # primes p with lo <= p <= min(top, N)
        i0 = table.pi(lo - 1)
        i1 = table.pi(min(top, N))
        if i1 <= i0:
            continue
        fm = _factor_small(m, spf)
        if not support_only and any(e > nu.get(q, 0) for q, e in fm.items()):
            continue
        for p in plist[i0:i1]:
            j = p * m
            if not support_only and fm.get(p, 0) + 1 > nu.get(p, 0):
                continue
            out.append(j)
            if len(out) > ceiling:
                raise ModelSizeError(f"more than {ceiling} columns; use the interval policy")
    return sorted(out)


def build_model(N: int, t: int, policy: str = "interval", *, table: PrimeTable | None = None,
                capacity: dict[int, int] | np.ndarray | None = None,
                ceiling: int = DEFAULT_COLUMN_CEILING) -> LPModel:
    """Assemble the model for M(N,t) under the given column policy.

    interval: j in [t, N].  J / J-support: the minimal set J_{t,N} (strict or
    prime-support divisibility).  smooth: j in [t, N] with every prime
    factor below sqrt(N), rows restricted to those primes.  ``capacity``
    overrides the right-hand side (array indexed by prime value or dict).
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; choose from {POLICIES}")
    if not 1 <= t <= N:
        raise ValueError("need 1 <= t <= N")
    table = table or sieve_primes(max(N, 2))
    primes = table.primes[: table.pi(N)].astype(np.int64)
    if policy == "interval":
        if N - t + 1 > ceiling:
            raise ModelSizeError(f"{N - t + 1} columns exceed the ceiling {ceiling}")
        rows, cols = _interval_incidence(N, t, primes)
        columns = np.arange(t, N + 1, dtype=np.int64)
        A = _assemble(rows, cols, primes.size, columns.size)
    elif policy == "smooth":
        r = math.isqrt(N)
        if r * r == N:
            r -= 1
        big = primes[primes > r]
        rows, cols = _interval_incidence(N, t, primes)
        touched = np.zeros(N - t + 1, dtype=bool)
        touched[cols[rows >= primes.size - big.size]] = True
        keep_rows = rows < primes.size - big.size
        A_full = _assemble(rows[keep_rows], cols[keep_rows], primes.size - big.size, N - t + 1)
        keep = np.flatnonzero(~touched)
        columns = (keep + t).astype(np.int64)
        A = A_full[:, keep].tocsr()
        primes = primes[: primes.size - big.size]
    else:
        columns_l = minimal_columns(N, t, support_only=(policy == "J-support"), table=table, ceiling=ceiling)
        columns = np.asarray(columns_l, dtype=np.int64)
        A = _factor_columns(columns_l, primes)
    if capacity is None:
        cap = factorial_valuations(N, primes) if primes.size else np.zeros(0, np.int64)
    elif isinstance(capacity, dict):
        cap = np.asarray([capacity.get(int(p), 0) for p in primes], dtype=np.int64)
    else:
        cap = np.asarray(capacity)[primes].astype(np.int64)
    return LPModel(N, t, policy, columns, primes, np.asarray(cap, dtype=np.int64), A)

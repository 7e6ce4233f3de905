"""Greedy construction of t-admissible subfactorizations of N!."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..certify import Certificate
from ..ntheory.primes import PrimeTable, factorial_valuations, sieve_primes, smallest_factor_table
from . import _kernels as K


class GreedyResidualError(RuntimeError):
    """The large-prime phase over-used a small prime; a larger split point M is needed."""


@dataclass(frozen=True)
class GreedyConfig:
    variant: str = "standard"  # standard | fast
    M: int | None = None  # split point between large and small primes
    smooth_table_limit: int | None = None  # cofactor bound for the fast variant
    threads: int = 1

    def split(self, N: int, t: int) -> int:
        if self.M is not None:
            return self.M
        M = math.isqrt(N)
        while M * (M - 1) < t:
            M += 1
        return M


@dataclass
class GreedyResult:
    N: int
    t: int
    count: int
    certificate: Certificate | None
    halted: bool = False
    large_count: int = 0  # factors contributed by primes above the split
    residual_log: float = 0.0  # log of the leftover small-prime product after the large phase

    @property
    def success(self) -> bool:
        return self.count >= self.N


# caches shared by repeated calls with the same N ------------------------------

_SPF: dict = {}


def _spf(n: int) -> np.ndarray:
    arr = _SPF.get("spf")
    if arr is None or arr.shape[0] <= n:
        arr = smallest_factor_table(max(n, 16))
        _SPF["spf"] = arr
    return arr


def _residual_by_value(N: int, table: PrimeTable) -> tuple[np.ndarray, np.ndarray]:
    primes = table.primes[: table.pi(N)]
    vals = np.zeros(N + 1, dtype=np.int64)
    vals[primes] = factorial_valuations(N, primes)
    return primes, vals


def _run_loop(t, primes_desc, vals, table_args):
    cap = max(64, 4 * primes_desc.shape[0] + 64)
    while True:
        out_m = np.empty(cap, dtype=np.int64)
        out_p = np.empty(cap, dtype=np.int64)
        out_e = np.empty(cap, dtype=np.int64)
        saved = vals.copy()
        n, halted = K.greedy_loop(t, primes_desc, vals, *table_args, out_m, out_p, out_e)
        if n >= 0:
            return out_m[:n], out_p[:n], out_e[:n], bool(halted)
        vals[:] = saved
        cap *= 4


def cofactor_table(t: int, lo: int, hi: int, pmax: int, ratio_filter: bool = True):
    spf = _spf(max(hi, 2))
    return K.build_cofactor_table(t, max(lo, 1), hi, pmax, spf, ratio_filter)


def large_prime_blocks(N: int, t: int, M: int, table: PrimeTable):
    """Blocks (m, lo, hi, e) covering every prime p in (M, N]: each such p
    appears e = floor(N/p) times with cofactor m = ceil(t/p).  Ranges are
    maximal intervals on which both quantities are constant."""
    blocks = []
    x = M + 1
    while x <= N:
        g = N // x
        f = -(-t // x)
        end = N // g
        if f >= 2:
            end = min(end, -(-t // (f - 1)) - 1)
        a, b = table.pi(x - 1), table.pi(end)
        if b > a:
            blocks.append((f, x, end, g, b - a))
        x = end + 1
    return blocks


def _large_phase(N, t, M, table, vals):
    blocks = large_prime_blocks(N, t, M, table)
    spf = _spf(max(-(-t // (M + 1)), 2))
    large = 0
    for m, lo, hi, e, cnt in blocks:
        large += e * cnt
        if m > 1:
            K.subtract_block_usage(vals, m, e * cnt, spf)
    vals[M + 1 :] = 0
    return blocks, large


def _check_residual(vals, primes_small, M):
    bad = primes_small[vals[primes_small] < 0]
    if bad.size:
        raise GreedyResidualError(
            f"large-prime phase over-uses prime {int(bad[0])}; raise the split point M (currently {M})"
        )


def _residual_log(vals, primes_small) -> float:
    v = vals[primes_small]
    return float(np.dot(v.astype(np.float64), np.log(primes_small.astype(np.float64))))


def _records_to_factors(ms, ps, es, ks=None):
    acc: dict[int, int] = {}
    for i in range(len(ms)):
        k = 1 if ks is None else int(ks[i])
        f = int(ms[i]) * int(ps[i]) ** k
        acc[f] = acc.get(f, 0) + int(es[i])
    return [(c, f) for f, c in sorted(acc.items()) if c > 0]


def optimized_path_ok(N: int, t: int) -> bool:
    return 1 < N / 4 < t < N / 2


def greedy_subfactorization(N: int, t: int, cfg: GreedyConfig | None = None, *, table: PrimeTable | None = None,
                            certificate: bool = True) -> GreedyResult:
    """Standard greedy.  Large primes are handled in bulk when
    N/4 < t < N/2; otherwise every prime goes through the cofactor loop."""
    cfg = cfg or GreedyConfig()
    if cfg.variant == "fast":
        return fast_greedy(N, t, cfg, table=table, certificate=certificate)
    if N < 1:
        raise ValueError("N >= 1 required")
    if t <= 1:
        cert = Certificate(N, t, [(N, 1)]) if certificate else None
        return GreedyResult(N, t, N, cert)
    table = table or sieve_primes(max(N, 2))
    primes, vals = _residual_by_value(N, table)
    blocks: list = []
    large = 0
    if optimized_path_ok(N, t):
        M = cfg.split(N, t)
        blocks, large = _large_phase(N, t, M, table, vals)
        small = primes[primes <= M]
        _check_residual(vals, small, M)
    else:
        M = N
        small = primes
    rlog = _residual_log(vals, small)
    cand = cofactor_table(t, 1, t, max(M, 2))
    ms, ps, es, halted = _run_loop(t, small[::-1].copy(), vals, cand)
    count = large + int(es.sum())
    cert = None
    if certificate:
        cert = Certificate(N, t, _records_to_factors(ms, ps, es), [(m, lo, hi, e) for m, lo, hi, e, _ in blocks])
    return GreedyResult(N, t, count, cert, halted, large, rlog)


def greedy_count(N: int, t: int, table: PrimeTable | None = None) -> int:
    return greedy_subfactorization(N, t, table=table, certificate=False).count


def greedy_residual(N: int, t: int, residual: dict[int, int] | np.ndarray, table: PrimeTable | None = None):
    """Standard greedy applied to an arbitrary residual exponent vector.

    ``residual`` maps primes to available exponents (or is an array indexed
    by prime value).  Returns the list of (multiplicity, factor) produced.
    """
    table = table or sieve_primes(max(N, 2))
    if isinstance(residual, np.ndarray):
        vals = residual.astype(np.int64).copy()
    else:
        vals = np.zeros(N + 1, dtype=np.int64)
        for p, e in residual.items():
            vals[p] = e
    if t <= 1:
        return []
    primes = table.primes[: table.pi(N)]
    active = primes[vals[primes] > 0]
    if active.size == 0:
        return []
    cand = cofactor_table(t, 1, t, int(active[-1]))
    ms, ps, es, _ = _run_loop(t, active[::-1].copy(), vals, cand)
    return _records_to_factors(ms, ps, es)


# ---------------------------------------------------------------------------
# fast variant


def _combine_leftovers(t: int, vals: np.ndarray, primes_desc: np.ndarray):
    """Multiply remaining primes together in decreasing order, emitting a
    factor whenever the running product reaches t.  Returns (factors,
    leftover product)."""
    out: dict[int, int] = {}
    P = 1
    for p in primes_desc.tolist():
        c = int(vals[p])
        while c > 0:
            if P == 1:
                k = 1
                while p**k < t:
                    k += 1
                full = c // k
                if full:
                    out[p**k] = out.get(p**k, 0) + full
                    c -= full * k
                if c == 0:
                    break
            j = 0
            while P * p**j < t and j < c:
                j += 1
            P *= p**j
            c -= j
            if P >= t:
                out[P] = out.get(P, 0) + 1
                P = 1
        vals[p] = 0
    return out, P


def fast_greedy(N: int, t: int, cfg: GreedyConfig | None = None, *, table: PrimeTable | None = None,
                certificate: bool = True) -> GreedyResult:
    """Fast variant: bulk large primes, tabulated M-smooth cofactors up to
    N^(2/3) for p and p^2, then combine the leftovers."""
    cfg = cfg or GreedyConfig(variant="fast")
    if t <= 1:
        return greedy_subfactorization(N, t, table=table, certificate=certificate)
    table = table or sieve_primes(max(N, 2))
    M = cfg.split(N, t)
    if M * (M - 1) < t:
        raise ValueError(f"fast variant needs M(M-1) >= t (M={M}, t={t})")
    primes, vals = _residual_by_value(N, table)
    blocks, large = _large_phase(N, t, M, table, vals)
    small = primes[primes <= M]
    _check_residual(vals, small, M)
    rlog = _residual_log(vals, small)
    limit = cfg.smooth_table_limit or int(round(N ** (2 / 3)))
    limit = max(1, min(limit, t))
    cand = cofactor_table(t, 1, limit, M)
    small_desc = small[::-1].copy()
    cap = 8 * small.shape[0] + 64
    while True:
        buf = [np.empty(cap, dtype=np.int64) for _ in range(4)]
        saved = vals.copy()
        n = K.fast_loop(t, small_desc, vals, *cand, *buf)
        if n >= 0:
            break
        vals[:] = saved
        cap *= 4
    ms, ps, ks, es = (b[:n] for b in buf)
    factors = dict((f, c) for c, f in _records_to_factors(ms, ps, es, ks))
    extra, leftover = _combine_leftovers(t, vals, small_desc)
    for f, c in extra.items():
        factors[f] = factors.get(f, 0) + c
    if leftover > 1 and factors:
        # fold the sub-threshold remainder into the largest explicit factor
        top = max(factors)
        factors[top] -= 1
        if factors[top] == 0:
            del factors[top]
        factors[top * leftover] = factors.get(top * leftover, 0) + 1
    count = large + sum(factors.values())
    cert = None
    if certificate:
        cert = Certificate(N, t, [(c, f) for f, c in sorted(factors.items())], [(m, lo, hi, e) for m, lo, hi, e, _ in blocks])
    return GreedyResult(N, t, count, cert, False, large, rlog)

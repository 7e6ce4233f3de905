"""Threshold searches driven by the greedy algorithm, and hint chains."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..certify import Certificate, verify_subfactorization
from ..ntheory.primes import PrimeTable, sieve_primes
from .core import (
    GreedyConfig,
    GreedyResidualError,
    _large_phase,
    _residual_by_value,
    _residual_log,
    fast_greedy,
    greedy_subfactorization,
    optimized_path_ok,
)

DEFAULT_T1_CEILING = 10**6
SMALL_N = 200  # below this every t is scanned


class ChainGapError(ValueError):
    pass


def _run(N: int, t: int, variant: str, table: PrimeTable, certificate: bool = False):
    cfg = GreedyConfig(variant=variant)
    if variant == "fast":
        try:
            return fast_greedy(N, t, cfg, table=table, certificate=certificate)
        except (ValueError, GreedyResidualError):
            return greedy_subfactorization(N, t, table=table, certificate=certificate)
    return greedy_subfactorization(N, t, cfg, table=table, certificate=certificate)


def greedy_upper_estimate(N: int, t: int, table: PrimeTable | None = None) -> int:
    """B1 + floor(log R / log t): the large-prime factor count plus the most
    factors >= t the leftover small-prime product R could possibly give."""
    table = table or sieve_primes(N)
    primes, vals = _residual_by_value(N, table)
    M = GreedyConfig().split(N, t)
    _, large = _large_phase(N, t, M, table, vals)
    small = primes[primes <= M]
    if (vals[small] < 0).any():
        return N + 10**9  # estimate unavailable; treat as not excluding t
    rlog = _residual_log(vals, small)
    return large + int(math.floor(rlog / math.log(t) + 1e-9))


def t1_upper_bracket(N: int, table: PrimeTable | None = None) -> int:
    """Least t in (N/4, N/2) whose estimate drops below N (a strict upper
    bound on t1(N)), found by bisection on the non-increasing estimate."""
    table = table or sieve_primes(N)
    lo = N // 4 + 1
    hi = (N - 1) // 2
    if greedy_upper_estimate(N, hi, table) >= N:
        return hi + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if greedy_upper_estimate(N, mid, table) < N:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _scan_all(N: int, table: PrimeTable) -> int:
    for t in range(N, 0, -1):
        if greedy_subfactorization(N, t, table=table, certificate=False).count >= N:
            return t
    return 1


def t1_exhaustive(N: int, threads: int = 1, ceiling: int = DEFAULT_T1_CEILING, table: PrimeTable | None = None) -> int:
    """Largest t for which the standard greedy reaches N factors.

    Candidate thresholds are scanned downward from the upper bracket in
    contiguous chunks; the first chunk containing a success decides, and the
    answer is the largest success inside it, so the result does not depend
    on the number of threads.
    """
    if N > ceiling:
        raise ValueError(f"N={N} exceeds the exhaustive ceiling {ceiling}; use the heuristic search")
    table = table or sieve_primes(max(N, 2))
    if N < SMALL_N:
        return _scan_all(N, table)
    top = t1_upper_bracket(N, table) - 1
    chunk = max(8, 4 * max(1, threads))

    def ok(t: int) -> bool:
        if t <= 1:
            return True
        return greedy_subfactorization(N, t, table=table, certificate=False).count >= N

    t = top
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while t >= 1:
            ts = list(range(t, max(t - chunk, 0), -1))
            flags = list(pool.map(ok, ts)) if pool else [ok(s) for s in ts]
            for s, f in zip(ts, flags):
                if f:
                    return s
            t -= chunk
    finally:
        if pool:
            pool.shutdown()
    return 1


@dataclass
class SearchResult:
    t: int
    certificate: Certificate
    calls: int


def search_t(N: int, strategy: str = "heuristic", variant: str = "standard", table: PrimeTable | None = None) -> SearchResult:
    """Find some t with a greedy certificate for t(N) >= t.

    ``bisection`` halves [t_low, t_high) on the success predicate;
    ``heuristic`` jumps to round(exp((B/N) log t)) where B is the greedy
    count, falling back to the quarter points when the jump leaves the
    bracket.  Both return the final t_low together with its certificate.
    """
    if N < 10:
        raise ValueError("search_t needs N >= 10")
    table = table or sieve_primes(N)
    calls = 0
    results: dict[int, object] = {}

    def run(t: int):
        nonlocal calls
        if t not in results:
            calls += 1
            results[t] = _run(N, t, variant, table, certificate=False)
        return results[t]

    t_low, t_high = max(2, N // 4), N // 2 + 1
    while run(t_low).count < N and t_low > 2:  # bracket must start from a success
        t_low = max(2, t_low // 2)
    t = -(-N // 3) if strategy == "heuristic" else -(-(t_low + t_high) // 2)
    while t_high - t_low > 1:
        t = min(max(t, t_low + 1), t_high - 1)
        r = run(t)
        if r.count >= N:
            t_low = t
        else:
            t_high = t
        if strategy == "heuristic":
            nxt = int(round(math.exp(r.count / N * math.log(t))))
            if nxt < t_low or nxt <= t_low and t_high - t_low > 1:
                nxt = (3 * t_low + t_high) // 4
            elif nxt >= t_high:
                nxt = (t_low + 3 * t_high) // 4
            if nxt in results:
                nxt = -(-(t_low + t_high) // 2)
            t = nxt
        else:
            t = -(-(t_low + t_high) // 2)
    final = _run(N, t_low, variant, table, certificate=True)
    return SearchResult(t_low, final.certificate, calls)


def exact_t_small(N: int, table: PrimeTable | None = None) -> tuple[int, Certificate]:
    """Greedy search over every threshold (small N)."""
    table = table or sieve_primes(max(N, 2))
    t = _scan_all(N, table)
    return t, greedy_subfactorization(N, t, table=table).certificate


# ---------------------------------------------------------------------------
# hint chains


def hint_chain(N_start: int, N_end: int, mode: str = "generate", hints=None, threads: int = 1,
               table: PrimeTable | None = None) -> list[tuple[int, int]]:
    """Covering chain of (N, t) pairs with t >= ceil(N/3).

    ``generate`` walks N -> 3 t1(N) until N exceeds ``N_end``;
    ``verify`` re-runs the greedy for each given pair and checks that
    consecutive pairs leave no gap.
    """
    if mode == "generate":
        table = table or sieve_primes(max(N_end * 3, 2))
        out = []
        N = N_start
        while N <= N_end:
            t = t1_exhaustive(N, threads=threads, ceiling=max(N_end * 3, DEFAULT_T1_CEILING), table=table)
            if 3 * t <= N:
                raise ChainGapError(f"t1({N}) = {t} does not exceed N/3")
            out.append((N, t))
            N = 3 * t
        return out
    if mode != "verify":
        raise ValueError("mode must be 'generate' or 'verify'")
    hints = sorted(hints or [])
    if not hints:
        raise ChainGapError("empty hint list")
    table = table or sieve_primes(max(N for N, _ in hints))
    if hints[0][0] > N_start:
        raise ChainGapError(f"uncovered interval [{N_start}, {hints[0][0] - 1}]")
    for i, (N, t) in enumerate(hints):
        if 3 * t < N:
            raise ChainGapError(f"pair ({N}, {t}) has t < N/3")
        res = greedy_subfactorization(N, t, table=table)
        rep = verify_subfactorization(res.certificate, table)
        if not rep.accepted:
            raise ChainGapError(f"pair ({N}, {t}) not certified: {rep.errors[:1]}")
        if i + 1 < len(hints):
            nxt = hints[i + 1][0]
            if 3 * t < nxt:
                raise ChainGapError(f"uncovered interval [{3 * t + 1}, {nxt - 1}]")
    last_N, last_t = hints[-1]
    if 3 * last_t < N_end:
        raise ChainGapError(f"uncovered interval [{3 * last_t + 1}, {N_end}]")
    return hints


def read_hints(path) -> list[tuple[int, int]]:
    out = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            s = raw.split("#", 1)[0].strip()
            if not s:
                continue
            parts = s.split()
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise ValueError(f"line {lineno}: expected '<N> <t>'")
            out.append((int(parts[0]), int(parts[1])))
    return out


def write_hints(pairs, path) -> None:
    with open(path, "w") as fh:
        for N, t in pairs:
            fh.write(f"{N} {t}\n")

"""Time the compiled kernels against the plain numpy fallback.

    python benchmarks/bench_kernels.py            # both backends
    python benchmarks/bench_kernels.py --inner    # current backend only

The fallback is selected with EGS_DISABLE_NUMBA=1, so each backend runs in
its own interpreter.  Results (counts, pi values) must agree.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def _time(fn, repeat: int):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def inner(N: int, repeat: int) -> dict:
    import numpy as np

    from egs._accel import backend
    from egs.greedy import fast_greedy, greedy_count
    from egs.ntheory.primes import PrimeTable, factorial_valuations, sieve_primes, smallest_factor_table

    table = sieve_primes(N)  # warm-up, also compiles
    greedy_count(2000, 667)
    fast_greedy(2000, 667, certificate=False)
    res = {"backend": backend(), "N": N}
    res["sieve_s"], tab = _time(lambda: PrimeTable(N), repeat)  # uncached
    res["pi_N"] = tab.pi(N)
    res["spf_s"], _ = _time(lambda: smallest_factor_table(N), repeat)
    primes = table.primes[: table.pi(N)].astype(np.int64)
    res["valuations_s"], v = _time(lambda: factorial_valuations(N, primes), repeat)
    res["nu2"] = int(v[0])
    t = -(-N // 3)
    res["greedy_s"], c = _time(lambda: greedy_count(N, t, table), repeat)
    res["greedy_count"] = c
    res["fast_greedy_s"], r = _time(lambda: fast_greedy(N, t, table=table, certificate=False).count, repeat)
    res["fast_count"] = r
    return res


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=10**6)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--inner", action="store_true")
    a = ap.parse_args()
    if a.inner:
        print(json.dumps(inner(a.n, a.repeat)))
        return 0
    rows = []
    for off in ("0", "1"):
        env = dict(os.environ, EGS_DISABLE_NUMBA=off)
        cmd = [sys.executable, __file__, "--inner", "--n", str(a.n), "--repeat", str(a.repeat)]
        rows.append(json.loads(subprocess.check_output(cmd, env=env).decode().strip().splitlines()[-1]))
    keys = [k for k in rows[0] if k.endswith("_s")]
    print(f"{'kernel':<16}" + "".join(f"{r['backend']:>12}" for r in rows))
    for k in keys:
        print(f"{k[:-2]:<16}" + "".join(f"{r[k]:>12.4f}" for r in rows))
    same = all(rows[0][k] == rows[1][k] for k in ("pi_N", "nu2", "greedy_count", "fast_count"))
    print("results agree" if same else "RESULTS DIFFER")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())

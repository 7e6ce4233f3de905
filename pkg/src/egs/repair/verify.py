"""Range verification of the repair criterion.

verify_repair decides sum delta_i <= delta and sum alpha_i <= 1 for a ledger
whose bounds hold on the whole N range; True certifies t(N) >= t for every N
in the range.  verify_intervals runs a list of ranges, optionally bisecting
(geometrically) any range that fails until it passes or becomes narrower
than a factor min_ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .ledger import Ledger, ledger
from .params import RepairConditionError, RepairParams, build_params, parse_N

DEFAULT_INTERVALS = (
    (10**11, 5 * 10**11),
    (5 * 10**11, 10**14),
    (10**14, 10**20),
    (10**20, 10**70),
    (10**70, None),
)


@dataclass
class RepairReport:
    passed: bool
    N_lo: int
    N_hi: int | None
    delta_ratio: float | None = None  # (sum delta_i) / delta
    alpha_sum: float | None = None
    reason: str = ""
    ledger: Ledger | None = field(default=None, repr=False)

    def __bool__(self):
        return self.passed

    def line(self) -> str:
        hi = "inf" if self.N_hi is None else f"{self.N_hi:.3g}"
        rng = f"[{self.N_lo:.3g}, {hi}]"
        if self.delta_ratio is None:
            return f"{rng}: FAIL ({self.reason})"
        verdict = "OK" if self.passed else "FAIL"
        return f"{rng}: {verdict} sum delta_i <= {self.delta_ratio:.6f} delta, sum alpha_i <= {self.alpha_sum:.6f}"


def verify_repair(P: RepairParams | Ledger) -> RepairReport:
    L = P if isinstance(P, Ledger) else ledger(P)
    ds, asum = L.delta_sum, L.alpha_sum
    ok = ds <= L.delta and asum <= 1
    rep = RepairReport(ok, L.params.N_lo, L.params.N_hi, float(ds / L.delta), float(asum), ledger=L)
    if not ok:
        rep.reason = "delta budget exceeded" if ds > L.delta else "tiny-prime budget exceeded"
    return rep


def verify_range(N_range, t_rule="N/3", A: int = 189, K: int = 293, L=Fraction(9, 2)) -> RepairReport:
    """verify_repair with structural failures reported as a failed range."""
    try:
        P = build_params(N_range, t_rule, A, K, L)
        return verify_repair(P)
    except RepairConditionError as exc:
        lo, hi = (N_range if isinstance(N_range, (tuple, list)) else (N_range, N_range))
        return RepairReport(False, parse_N(lo), parse_N(hi), reason=str(exc))


def verify_intervals(intervals=DEFAULT_INTERVALS, t_rule="N/3", A: int = 189, K: int = 293, L=Fraction(9, 2),
                     subdivide: bool = False, min_ratio=Fraction(101, 100)) -> list[RepairReport]:
    """Verify each range; with subdivide, failing finite ranges are split at the geometric mean."""
    out = []
    todo = [(parse_N(lo), parse_N(hi)) for lo, hi in intervals]
    while todo:
        lo, hi = todo.pop(0)
        rep = verify_range((lo, hi), t_rule, A, K, L)
        if rep.passed or not subdivide or hi is None or Fraction(hi, lo) < min_ratio or rep.delta_ratio is None:
            out.append(rep)
            continue
        mid = max(lo + 1, math.isqrt(lo * hi))
        if mid >= hi:
            out.append(rep)
            continue
        todo[:0] = [(lo, mid), (mid, hi)]
    return out


def read_intervals(src) -> list[tuple[int, int | None]]:
    """Parse "I <lo> <hi>" lines ('#' comments; hi may be 'inf')."""
    text = src.read() if hasattr(src, "read") else (src if "\n" in src else open(src).read())
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] != "I":
            raise ValueError(f"line {no}: expected 'I <lo> <hi>'")
        lo, hi = parse_N(parts[1]), parse_N(parts[2])
        if lo is None or (hi is not None and hi < lo):
            raise ValueError(f"line {no}: bad range")
        out.append((lo, hi))
    return out

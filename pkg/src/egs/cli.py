"""Command-line frontend.

Exit codes: 0 verified, 1 not proven, 2 input error, 3 resource limit.
Every run echoes its invocation on stderr.  Subcommands that produce a
lower bound write a certificate file, read it back and verify it before
reporting success.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import shlex
import sys
from fractions import Fraction

EXIT_OK, EXIT_UNPROVEN, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

FIGURES = ("small-n", "lp-band", "surplus", "tne", "kb")


class InputError(ValueError):
    pass


class Outcome:
    """Result of a subcommand: a status, a headline and tabular data."""

    def __init__(self, ok: bool, headline: str, data: dict | None = None, rows: list | None = None,
                 csv_text: str | None = None):
        self.ok = ok
        self.headline = headline
        self.data = data or {}
        self.rows = rows
        self.csv_text = csv_text


# ---------------------------------------------------------------------------
# argument parsing helpers


def parse_int(text: str) -> int:
    """Integer from '100000', '1e5', '10^5' or '3*10^5'."""
    s = str(text).strip().replace("_", "")
    try:
        if "*" in s:
            a, b = s.split("*", 1)
            return parse_int(a) * parse_int(b)
        from .repair.params import parse_N

        v = parse_N(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v is None:
        raise argparse.ArgumentTypeError(f"not a finite integer: {text!r}")
    return v


_T_RE = re.compile(r"^(?:(floor|ceil)\()?(\d*)\*?N(?:/(\d+))?\)?([+-]\d+)?$")


def parse_t(expr: str, N: int) -> int:
    """Threshold from an integer or an expression in N.

    'aN/b' is floor(aN/b); 'ceil(aN/b)' rounds up; an integer offset may
    follow, as in 'N/3+1'.
    """
    s = str(expr).replace(" ", "")
    if re.fullmatch(r"\d+", s):
        return int(s)
    m = _T_RE.match(s)
    if not m:
        raise InputError(f"cannot parse threshold {expr!r}")
    mode, a, b, off = m.groups()
    x = Fraction(int(a or 1) * N, int(b or 1))
    t = math.ceil(x) if mode == "ceil" else math.floor(x)
    return t + int(off or 0)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


# ---------------------------------------------------------------------------
# certificates


def _cert_path(args, stem: str) -> str:
    if getattr(args, "cert", None):
        return args.cert
    return os.path.join(args.cert_dir, f"{stem}.cert")


def _write_and_verify(cert, path: str, need_count: bool = True) -> dict:
    """Write, read back and verify a lower-bound certificate.

    With need_count=False only admissibility is checked (count may be below N)."""
    from .certify import read_certificate, verify_subfactorization, write_certificate

    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    write_certificate(cert, path)
    back = read_certificate(path)
    rep = verify_subfactorization(back, need_count=need_count)
    return {"certificate": path, "verified": rep.accepted, "count": rep.count,
            "errors": rep.errors[:5]}


def _write_and_verify_dual(cert, path: str) -> dict:
    from .certify import read_certificate, verify_dual, write_certificate

    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    write_certificate(cert, path)
    rep = verify_dual(read_certificate(path))
    return {"certificate": path, "verified": rep.accepted, "value": str(rep.value) if rep.value is not None else None,
            "bound": rep.bound_implied, "errors": rep.errors[:5]}


def _lower_outcome(N: int, t: int, cert, args, stem: str, label: str) -> Outcome:
    v = _write_and_verify(cert, _cert_path(args, stem))
    ok = v["verified"]
    data = {"N": N, "t": t, **v}
    if ok:
        return Outcome(True, f"{label}: t({N}) >= {t} (count {v['count']} = N + {v['count'] - N})", data)
    return Outcome(False, f"{label}: not proven at t = {t} ({'; '.join(v['errors']) or 'count below N'})", data)


# ---------------------------------------------------------------------------
# subcommands


def cmd_t_exact(args) -> Outcome:
    from .linprog import t_exact

    t, cert = t_exact(args.n, node_limit=args.node_limit)
    out = _lower_outcome(args.n, t, cert, args, f"t_exact_N{args.n}", "t-exact")
    out.data["t_exact"] = t
    if out.ok:
        out.headline = f"t({args.n}) = {t}"
    return out


def _greedy(args, variant: str) -> Outcome:
    from .greedy import GreedyConfig, greedy_subfactorization

    N = args.n
    t = parse_t(args.t, N)
    cfg = GreedyConfig(variant=variant, M=args.split, threads=args.threads)
    res = greedy_subfactorization(N, t, cfg)
    out = _lower_outcome(N, t, res.certificate, args, f"greedy_{variant}_N{N}_t{t}", f"greedy ({variant})")
    out.data["greedy_count"] = res.count
    out.data["excess"] = res.count - N
    return out


def cmd_greedy(args) -> Outcome:
    return _greedy(args, "standard")


def cmd_greedy_fast(args) -> Outcome:
    return _greedy(args, "fast")


def cmd_t1(args) -> Outcome:
    from .greedy import greedy_subfactorization, t1_exhaustive

    N = args.n
    t = t1_exhaustive(N, threads=args.threads)
    res = greedy_subfactorization(N, t)
    out = _lower_outcome(N, t, res.certificate, args, f"t1_N{N}", "t1")
    out.data["t1"] = t
    if out.ok:
        out.headline = f"t1({N}) = {t}"
    return out


def cmd_search_t(args) -> Outcome:
    from .greedy import search_t

    r = search_t(args.n, strategy=args.strategy, variant=args.variant)
    out = _lower_outcome(args.n, r.t, r.certificate, args, f"search_N{args.n}", f"search-t ({args.strategy})")
    out.data["calls"] = r.calls
    return out


def cmd_hints(args) -> Outcome:
    from .greedy import ChainGapError, hint_chain, read_hints, write_hints

    if args.mode == "generate":
        try:
            pairs = hint_chain(args.start, args.end, "generate", threads=args.threads)
        except ChainGapError as exc:
            return Outcome(False, f"hint chain not generated: {exc}", {"error": str(exc)})
        if args.file:
            write_hints(pairs, args.file)
        rows = [{"N": a, "t": b} for a, b in pairs]
        return Outcome(True, f"hint chain covering [{args.start}, {args.end}] with {len(pairs)} pairs",
                       {"pairs": len(pairs), "file": args.file}, rows)
    if not args.file:
        raise InputError("--file is required with --mode verify")
    try:
        pairs = hint_chain(args.start, args.end, "verify", hints=read_hints(args.file))
    except ChainGapError as exc:
        return Outcome(False, f"hint chain rejected: {exc}", {"error": str(exc)})
    return Outcome(True, f"hint chain verified on [{args.start}, {args.end}] ({len(pairs)} pairs)",
                   {"pairs": len(pairs)})


def cmd_lp_upper(args) -> Outcome:
    from .linprog import lp_upper_t, lp_upper_value

    N = args.n
    if args.t is not None:
        t = parse_t(args.t, N)
        sol = lp_upper_value(N, t)
        data = {"N": N, "t": t, "objective": sol.objective,
                "exact_value": str(sol.exact_value) if sol.exact_value is not None else None, "upper": sol.upper}
        if sol.dual_certificate is None:
            return Outcome(False, f"no exact dual certificate for M({N},{t})", data)
        v = _write_and_verify_dual(sol.dual_certificate, _cert_path(args, f"dual_N{N}_t{t}"))
        data.update(v)
        return Outcome(v["verified"], v["bound"] if v["verified"] else "dual certificate rejected", data)
    T, sol = lp_upper_t(N)
    data = {"N": N, "t_upper": T}
    if sol is None or sol.dual_certificate is None:
        return Outcome(True, f"t({N}) <= {T} (t <= N/2 region)", data)
    v = _write_and_verify_dual(sol.dual_certificate, _cert_path(args, f"dual_N{N}_t{T + 1}"))
    data.update(v)
    ok = v["verified"] and Fraction(v["value"]) < N
    return Outcome(ok, f"t({N}) <= {T}" if ok else "dual certificate rejected", data)


def cmd_lp_lower(args) -> Outcome:
    from .linprog import floor_residuals_lower, lp_lower_t, smooth_lower

    N = args.n
    if args.t is None:
        t_hint = None if args.t_hint is None else parse_t(args.t_hint, N)
        t, cert = lp_lower_t(N, t_hint)
        return _lower_outcome(N, t, cert, args, f"lp_lower_N{N}", "lp-lower")
    t = parse_t(args.t, N)
    if args.method == "smooth":
        cert = smooth_lower(N, t)
        out = _lower_outcome(N, t, cert, args, f"smooth_N{N}_t{t}", "smooth factorization")
    else:
        cert, sol = floor_residuals_lower(N, t)
        out = _lower_outcome(N, t, cert, args, f"floor_res_N{N}_t{t}", "floor+residuals")
        out.data["lp_objective"] = sol.objective
        out.data["lp_floor"] = sol.upper
    return out


def cmd_ip(args) -> Outcome:
    from .linprog import ip_exact

    N = args.n
    t = parse_t(args.t, N)
    r = ip_exact(N, t, target=args.target, node_limit=args.node_limit)
    data = {"N": N, "t": t, "lower": r.lower, "upper": r.upper, "nodes": r.nodes, "ip_status": r.status}
    if r.status == "node-limit":
        from .ntheory.primes import ResourceLimitError

        raise ResourceLimitError(f"node limit reached: M({N},{t}) in [{r.lower}, {r.upper}]")
    if r.certificate is not None:
        data.update(_write_and_verify(r.certificate, _cert_path(args, f"ip_N{N}_t{t}"), need_count=False))
        if not data["verified"]:
            return Outcome(False, "IP certificate rejected", data)
    if args.target is not None:
        ok = r.lower >= args.target
        msg = f"M({N},{t}) >= {args.target}" if ok else f"M({N},{t}) < {args.target}"
        # a refutation is also a verified outcome
        return Outcome(True, msg, {**data, "reaches_target": ok})
    return Outcome(True, f"M({N},{t}) = {r.lower}" if r.value is not None else
                   f"M({N},{t}) in [{r.lower}, {r.upper}]", data)


def cmd_upper_crit(args) -> Outcome:
    from .upperbound import best_upper, upper_crit_test

    N = args.n
    if args.t is None:
        B = best_upper(N)
        return Outcome(True, f"t({N}) <= {B}", {"N": N, "best_upper": B})
    t = parse_t(args.t, N)
    ok = upper_crit_test(N, t, args.mode)
    return Outcome(ok, f"t({N}) < {t}" if ok else f"criterion inconclusive at t = {t}",
                   {"N": N, "t": t, "mode": args.mode, "passed": ok})


def cmd_tne_scan(args) -> Outcome:
    from .upperbound import tne_csv, tne_scan

    rows = tne_scan(args.lo, args.hi)
    bad = [r.N for r in rows if not (r.passed_full and r.passed_tail)]
    margin = min(min(r.lhs_full, r.lhs_tail) - r.rhs for r in rows)
    data = {"lo": args.lo, "hi": args.hi, "failures": bad, "min_margin": margin}
    head = f"[{args.lo}, {args.hi}]: all pass (min margin {margin:.6f})" if not bad else f"failures at N = {bad[:10]}"
    return Outcome(not bad, head, data, csv_text=tne_csv(rows))


def cmd_verify(args) -> Outcome:
    from .certify import Certificate, read_certificate, verify_dual, verify_subfactorization

    cert = read_certificate(args.path)
    if isinstance(cert, Certificate):
        rep = verify_subfactorization(cert, need_count=not args.sub_only)
        data = {"kind": "subfactorization", "N": cert.N, "t": cert.t, "accepted": rep.accepted,
                "count": rep.count, "errors": rep.errors[:10]}
        head = (f"accepted: {rep.count} factors >= {cert.t} (t({cert.N}) >= {cert.t})" if rep.accepted
                and rep.count >= cert.N else ("accepted" if rep.accepted else "rejected: " + "; ".join(rep.errors[:3])))
        return Outcome(rep.accepted, head, data)
    rep = verify_dual(cert)
    data = {"kind": "dual", "N": cert.N, "t": cert.t, "accepted": rep.accepted, "bound": rep.bound_implied,
            "errors": rep.errors[:10]}
    return Outcome(rep.accepted, rep.bound_implied if rep.accepted else "rejected: " + "; ".join(rep.errors[:3]), data)


def cmd_verify_dual(args) -> Outcome:
    from .certify import DualCertificate, read_certificate, verify_dual

    cert = read_certificate(args.path)
    if not isinstance(cert, DualCertificate):
        raise InputError("not a dual certificate")
    rep = verify_dual(cert)
    value = rep.value
    data = {"N": cert.N, "t": cert.t, "accepted": rep.accepted, "bound": rep.bound_implied,
            "value": str(value) if value is not None else None, "errors": rep.errors[:10]}
    if rep.accepted and value is not None:
        data["N_minus_value"] = str(cert.N - value)
    return Outcome(rep.accepted, rep.bound_implied if rep.accepted else "rejected: " + "; ".join(rep.errors[:3]), data)


def _weight_table(name: str):
    from .rearrange import WeightTable, bundled_table, read_weight_table

    if name == "three_sixteenths":
        # a_{2^r} = 3/2^(r+3) over D = {1, 2, 4}
        W = WeightTable({}, ("pow2", 0, Fraction(3, 8)))
        return W, (1, 2, 4), Fraction(3, 16) - Fraction(1, 1000)
    W = bundled_table(name) if name in ("one_third", "two_sevenths") else read_weight_table(name)
    return W, W.downset, W.alpha


def cmd_rearrange_verify(args) -> Outcome:
    from .rearrange import verify_asym_crit, verify_finite_crit

    W, D, alpha = _weight_table(args.table)
    if args.alpha is not None:
        alpha = args.alpha
    if not D or alpha is None:
        raise InputError("weight table has no downset or alpha; pass --alpha and use a table with a D line")
    if args.n is None:
        rep = verify_asym_crit(D, alpha, W)
        claim = f"t(N) >= {alpha} N for all large N"
    else:
        rep = verify_finite_crit(D, alpha, args.n, W)
        claim = f"t({args.n}) >= {alpha} * {args.n}"
    data = {"table": args.table, "alpha": str(alpha), "N": args.n, "passed": rep.passed, "checks": rep.checks,
            "failures": [str(f) for f in rep.failures[:10]]}
    return Outcome(rep.passed, claim if rep.passed else "criterion fails: " + "; ".join(data["failures"][:3]), data)


def cmd_t23(args) -> Outcome:
    from .rearrange import t23_decide, t23_exact

    N = args.n
    if args.t is None:
        v = t23_exact(N)
        return Outcome(True, f"t23({N}) = {v}", {"N": N, "t23": v, "below_quarter": 4 * v < N})
    t = parse_t(args.t, N)
    d = t23_decide(N, t)
    data = {"N": N, "t": t, "feasible": d.feasible, "method": d.method, "lp_min_b": str(d.lp_min_b),
            "budget2": d.budget2, "budget3": d.budget3}
    return Outcome(True, f"t23({N}) {'>=' if d.feasible else '<'} {t}", data)


def cmd_quarter_cert(args) -> Outcome:
    from .rearrange import QUARTER_C, QUARTER_EPS, QUARTER_THRESHOLD, quarter_certificate_check

    rep = quarter_certificate_check()
    match = rep.eps == QUARTER_EPS and rep.C == QUARTER_C and rep.threshold == QUARTER_THRESHOLD
    data = {"passed": rep.passed, "eps": str(rep.eps), "C": str(rep.C), "threshold": rep.threshold,
            "matches_reference": match, "failures": [str(f) for f in rep.failures[:10]]}
    ok = rep.passed and match
    return Outcome(ok, f"t23(N) < N/4 for N >= {rep.threshold} (eps = {rep.eps}, C = {rep.C})" if ok
                   else "quarter certificate check failed", data)


def cmd_repair_verify(args) -> Outcome:
    from .repair import DEFAULT_INTERVALS, read_intervals, verify_intervals

    if args.intervals:
        intervals = read_intervals(args.intervals)
    elif args.range:
        intervals = [tuple(args.range)]
    else:
        intervals = DEFAULT_INTERVALS
    reps = verify_intervals(intervals, args.t_rule, args.A, args.K, args.L, subdivide=args.subdivide)
    rows = [{"N_lo": r.N_lo, "N_hi": "inf" if r.N_hi is None else r.N_hi, "passed": int(r.passed),
             "delta_sum_over_delta": "" if r.delta_ratio is None else f"{r.delta_ratio:.6f}",
             "alpha_sum": "" if r.alpha_sum is None else f"{r.alpha_sum:.6f}", "reason": r.reason} for r in reps]
    if args.ledger_json:
        dumps = [json.loads(r.ledger.to_json()) for r in reps if r.ledger is not None]
        with open(args.ledger_json, "w") as fh:
            json.dump(dumps, fh, indent=2)
    ok = all(r.passed for r in reps)
    return Outcome(ok, "\n".join(r.line() for r in reps), {"passed": ok, "ranges": len(reps)}, rows)


def cmd_kb_check(args) -> Outcome:
    from .repair import kb_check

    rep = kb_check(args.k_max)
    data = {"passed": rep.passed, "grid_min": float(rep.grid_min), "grid_argmin": rep.grid_argmin,
            "blocks_checked": rep.blocks_checked, "shift_sum_lo": float(rep.shift_sum[0]),
            "shift_sum_hi": float(rep.shift_sum[1]), "digamma": rep.digamma_float, "failures": rep.failures}
    head = (f"S(K') >= 0.4 for all K' (grid min {float(rep.grid_min):.6f} at K' = {rep.grid_argmin}, "
            f"{rep.blocks_checked} blocks); shifted series sum <= {float(rep.shift_sum[1]):.6f}")
    return Outcome(rep.passed, head if rep.passed else "; ".join(rep.failures[:3]), data)


def cmd_constants(args) -> Outcome:
    from .constants import compute_c0, compute_c1_suite

    tol = Fraction(args.tol)
    encl = [compute_c0(tol)]
    if not args.c0_only:
        encl.extend(compute_c1_suite(tol, K=args.K, Nfreq=args.nfreq))
    rows = [e.as_dict() for e in encl]
    head = "\n".join(f"{r['name']}: [{r['lo_float']:.12f}, {r['hi_float']:.12f}]  digits {r['digits']}" for r in rows)
    ok = all(e.width <= 10 * tol for e in encl)
    return Outcome(ok, head, {"constants": rows}, rows)


# figure data ----------------------------------------------------------------


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(x) -> str:
    return f"{float(x):.10f}"


def _table_small_n(lo: int, hi: int, step: int) -> str:
    """Exact/LP bounds, criterion upper bound, trivial bound, reference curves, floor(2N/7)."""
    from .greedy import exact_t_small
    from .linprog import lp_upper_t
    from .ntheory import sieve_primes
    from .upperbound import asymptotic_reference, best_upper, trivial_upper

    table = sieve_primes(max(hi, 2))
    rows = []
    for N in range(max(lo, 3), hi + 1, step):
        lower = exact_t_small(N, table)[0] if N >= 2 else 1
        upper = lp_upper_t(N, table)[0]
        a1, a2, a3 = asymptotic_reference(N)
        rows.append([N, lower, upper, best_upper(N, table), trivial_upper(N), _fmt(a1 * N), _fmt(a2 * N),
                     _fmt(a3 * N), 2 * N // 7])
    return _rows_csv(["N", "greedy_lower", "lp_upper", "crit_upper", "trivial_upper", "ref_1_over_e",
                      "ref_c0", "ref_c0_c1", "floor_2N_over_7"], rows)


def _table_lp_band(lo: int, hi: int, step: int) -> str:
    """LP upper bound and smooth factorization lower bound per N."""
    from .certify import verify_subfactorization
    from .linprog import lp_upper_t, smooth_lower
    from .ntheory import sieve_primes
    from .upperbound import asymptotic_reference

    table = sieve_primes(max(hi, 2))
    rows = []
    for N in range(max(lo, 100), hi + 1, step):
        T = lp_upper_t(N, table)[0]
        t = T
        while t > 1:
            rep = verify_subfactorization(smooth_lower(N, t, table=table), table)
            if rep.accepted:
                break
            t -= 1
        rows.append([N, t, T, _fmt(asymptotic_reference(N)[2] * N)])
    return _rows_csv(["N", "smooth_lower", "lp_upper", "ref_c0_c1"], rows)


def _table_surplus(lo: int, hi: int, step: int) -> str:
    """Bounds on M(N, ceil(N/3)) - N: LP floor, floor+residuals, plain floor, greedy."""
    from .certify import verify_subfactorization
    from .greedy import greedy_count
    from .linprog import build_model, floor_residuals_lower, integral_floor
    from .ntheory import sieve_primes

    table = sieve_primes(max(hi, 2))
    rows = []
    for N in range(lo, hi + 1, step):
        t = -(-N // 3)
        cert, sol = floor_residuals_lower(N, t, table=table)
        rep = verify_subfactorization(cert, table, need_count=False)
        model = build_model(N, t, "interval", table=table)
        plain = int(integral_floor(model, sol.primal).sum())
        up = sol.upper if sol.upper is not None else ""
        rows.append([N, t, "" if up == "" else up - N, rep.count - N if rep.accepted else "", plain - N,
                     greedy_count(N, t, table) - N])
    return _rows_csv(["N", "t", "lp_upper_minus_N", "floor_residuals_minus_N", "plain_floor_minus_N",
                      "greedy_minus_N"], rows)


def _table_kb(hi: int) -> str:
    from .repair import kb_series

    S = kb_series(hi)
    Ss = kb_series(hi, shifted=True)
    return _rows_csv(["K", "S", "S_shifted"], [[k, _fmt(a), _fmt(b)] for k, (a, b) in enumerate(zip(S, Ss), 1)])


def cmd_table(args) -> Outcome:
    from .upperbound import tne_csv, tne_scan

    fig = args.figure
    defaults = {"small-n": (1, 200, 1), "lp-band": (1000, 10000, 100), "surplus": (40000, 40100, 10),
                "tne": (80, 5000, 1), "kb": (1, 100, 1)}
    lo, hi, step = defaults[fig]
    lo = args.lo if args.lo is not None else lo
    hi = args.hi if args.hi is not None else hi
    step = args.step if args.step is not None else step
    if lo > hi or step < 1:
        raise InputError("need lo <= hi and step >= 1")
    if fig == "small-n":
        text = _table_small_n(lo, hi, step)
    elif fig == "lp-band":
        text = _table_lp_band(lo, hi, step)
    elif fig == "surplus":
        text = _table_surplus(lo, hi, step)
    elif fig == "tne":
        text = tne_csv(tne_scan(lo, hi))
    else:
        text = _table_kb(hi)
    return Outcome(True, text.rstrip("\n"), {"figure": fig, "rows": text.count("\n") - 1}, csv_text=text)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--cert", help="certificate path")
    common.add_argument("--cert-dir", default=".", help="directory for certificates (default: cwd)")

    p = argparse.ArgumentParser(prog="egs", description="Bounds and certificates for t(N).")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("t-exact", cmd_t_exact, "exact t(N) for small N (LP upper bound walked down by branch and bound)")
    sp.add_argument("--n", type=parse_int, required=True)
    sp.add_argument("--node-limit", type=int, default=200000)

    for name, fn in (("greedy", cmd_greedy), ("greedy-fast", cmd_greedy_fast)):
        sp = add(name, fn, f"{name.replace('-', ' ')} subfactorization at (N, t)")
        sp.add_argument("--n", type=parse_int, required=True)
        sp.add_argument("--t", required=True, help="integer or expression such as N/3, ceil(N/3), 2N/7")
        sp.add_argument("--split", type=int, help="large/small prime split point")

    sp = add("t1", cmd_t1, "largest t at which the greedy algorithm succeeds")
    sp.add_argument("--n", type=parse_int, required=True)

    sp = add("search-t", cmd_search_t, "find a certified t by greedy search")
    sp.add_argument("--n", type=parse_int, required=True)
    sp.add_argument("--strategy", choices=("heuristic", "bisection"), default="heuristic")
    sp.add_argument("--variant", choices=("standard", "fast"), default="standard")

    sp = add("hints", cmd_hints, "generate or verify a hint chain of (N, t) pairs")
    sp.add_argument("--start", type=parse_int, required=True)
    sp.add_argument("--end", type=parse_int, required=True)
    sp.add_argument("--mode", choices=("generate", "verify"), default="generate")
    sp.add_argument("--file")

    sp = add("lp-upper", cmd_lp_upper, "LP upper bound with an exact dual certificate")
    sp.add_argument("--n", type=parse_int, required=True)
    sp.add_argument("--t", help="bound M(N,t) at this t instead of bounding t(N)")

    sp = add("lp-lower", cmd_lp_lower, "LP-based lower bound (floor+residuals or smooth factorization)")
    sp.add_argument("--n", type=parse_int, required=True)
    sp.add_argument("--t")
    sp.add_argument("--t-hint")
    sp.add_argument("--method", choices=("floor-residuals", "smooth"), default="floor-residuals")

    sp = add("ip", cmd_ip, "exact M(N,t) by branch and bound")
    sp.add_argument("--n", type=parse_int, required=True)
    sp.add_argument("--t", required=True)
    sp.add_argument("--target", type=parse_int)
    sp.add_argument("--node-limit", type=int, default=200000)

    sp = add("upper-crit", cmd_upper_crit, "large-prime upper criterion")
    sp.add_argument("--n", type=parse_int, required=True)
    sp.add_argument("--t", help="test this t; omit for the best upper bound")
    sp.add_argument("--mode", choices=("exact-sieve", "analytic"), default="exact-sieve")

    sp = add("tne-scan", cmd_tne_scan, "check the 1/e - eps inequality for every N in a range")
    sp.add_argument("--lo", type=parse_int, default=80)
    sp.add_argument("--hi", type=parse_int, default=5000)

    sp = add("verify", cmd_verify, "verify a certificate file")
    sp.add_argument("path")
    sp.add_argument("--sub-only", action="store_true", help="accept subfactorizations with fewer than N factors")

    sp = add("verify-dual", cmd_verify_dual, "verify a dual (upper bound) certificate file")
    sp.add_argument("path")

    sp = add("rearrange-verify", cmd_rearrange_verify, "check a rearrangement weight certificate")
    sp.add_argument("--table", default="one_third",
                    help="one_third, two_sevenths, three_sixteenths or a weight table path")
    sp.add_argument("--alpha", type=_fraction)
    sp.add_argument("--n", type=parse_int, help="finite-N check at this N (asymptotic check if omitted)")

    sp = add("t23", cmd_t23, "threshold reachable by rearranging powers of 2 and 3")
    sp.add_argument("--n", type=parse_int, required=True)
    sp.add_argument("--t")

    add("quarter-cert", cmd_quarter_cert, "check the one-quarter impossibility certificate")

    sp = add("repair-verify", cmd_repair_verify, "verify the repair ledger on ranges of N")
    sp.add_argument("--range", nargs=2, metavar=("LO", "HI"), help="one range; HI may be inf")
    sp.add_argument("--intervals", help="file of 'I <lo> <hi>' lines")
    sp.add_argument("--subdivide", action="store_true")
    sp.add_argument("--t-rule", default="N/3")
    sp.add_argument("--A", type=int, default=189)
    sp.add_argument("--K", type=int, default=293)
    sp.add_argument("--L", type=_fraction, default=Fraction(9, 2))
    sp.add_argument("--ledger-json", help="dump every ledger as JSON here")

    sp = add("kb-check", cmd_kb_check, "exact check of the small-prime inequality")
    sp.add_argument("--k-max", type=parse_int, default=6 * 10**4)

    sp = add("constants", cmd_constants, "enclosures of c0, c1', c1'', c1")
    sp.add_argument("--tol", default="1e-8")
    sp.add_argument("--K", type=parse_int, default=10**6)
    sp.add_argument("--nfreq", type=parse_int, default=10**5)
    sp.add_argument("--c0-only", action="store_true")

    sp = add("table", cmd_table, "emit plot data as CSV")
    sp.add_argument("--figure", choices=FIGURES, required=True)
    sp.add_argument("--lo", type=parse_int)
    sp.add_argument("--hi", type=parse_int)
    sp.add_argument("--step", type=parse_int)
    return p


# ---------------------------------------------------------------------------
# rendering and entry point


def _render(out: Outcome, fmt: str, status: int) -> str:
    if fmt == "json":
        return json.dumps({**out.data, "status": status, "ok": out.ok, "message": out.headline},
                          indent=2, default=str) + "\n"
    if fmt == "csv":
        if out.csv_text is not None:
            return out.csv_text
        rows = out.rows if out.rows is not None else [
            {k: v for k, v in out.data.items() if not isinstance(v, (list, dict))}]
        if not rows:
            return ""
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()})
        return buf.getvalue()
    return out.headline + "\n"


def _error(fmt: str, status: int, kind: str, msg: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps({"status": status, "ok": False, "error": kind, "message": msg}) + "\n")
    print(f"error: {msg}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    from .certify import CertificateFormatError
    from .ntheory.primes import ResourceLimitError

    argv = list(sys.argv[1:] if argv is None else argv)
    print("# invocation: egs " + shlex.join(argv), file=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.threads < 1:
        _error(args.format, EXIT_INPUT, "input", "--threads must be positive")
        return EXIT_INPUT
    try:
        out = args.fn(args)
    except ResourceLimitError as exc:
        _error(args.format, EXIT_RESOURCE, "resource", str(exc))
        return EXIT_RESOURCE
    except (InputError, CertificateFormatError, ValueError, OSError) as exc:
        _error(args.format, EXIT_INPUT, "input", str(exc))
        return EXIT_INPUT
    status = EXIT_OK if out.ok else EXIT_UNPROVEN
    text = _render(out, args.format, status)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

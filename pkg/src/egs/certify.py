"""Certificates for bounds on t(N) and their exact verifiers.

A lower-bound certificate lists a multiset of factors, each >= t, whose
product divides N!; if it has at least N elements then t(N) >= t.  Large
primes are stored compactly as blocks: e copies of m*p for every prime p in
[pmin, pmax].

An upper-bound (dual) certificate is a weakly increasing assignment of
non-negative rational weights w_p with sum_p w_p nu_p(j) >= 1 for every
t <= j <= N.  Then every t-admissible subfactorization has at most
floor(sum_p w_p nu_p(N!)) elements.
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .ntheory.primes import PrimeTable, factorial_valuations, sieve_primes

CERT_MAGIC = "EGS-CERT v1"
DUAL_MAGIC = "EGS-DUAL v1"


class CertificateFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class Certificate:
    N: int
    t: int
    factors: list[tuple[int, int]] = field(default_factory=list)  # (multiplicity, factor)
    blocks: list[tuple[int, int, int, int]] = field(default_factory=list)  # (m, pmin, pmax, e)

    def count(self, table: PrimeTable | None = None) -> int:
        table = table or sieve_primes(max(self.N, 2))
        total = sum(mult for mult, _ in self.factors)
        for m, lo, hi, e in self.blocks:
            if hi >= lo:
                total += e * (table.pi(hi) - table.pi(lo - 1))
        return total

    def expand(self, table: PrimeTable | None = None) -> list[int]:
        """Explicit multiset (small certificates only)."""
        table = table or sieve_primes(max(self.N, 2))
        out = []
        for mult, f in self.factors:
            out.extend([f] * mult)
        for m, lo, hi, e in self.blocks:
            for p in table.primes_in(lo - 1, hi).tolist():
                out.extend([m * p] * e)
        return sorted(out)


@dataclass
class DualCertificate:
    N: int
    t: int
    weights: dict[int, Fraction] = field(default_factory=dict)
    claimed_value: Fraction | None = None


@dataclass
class VerificationReport:
    accepted: bool
    count: int = 0
    min_factor: int | None = None
    surplus: dict[int, int] = field(default_factory=dict)
    bound_implied: str = ""
    value: Fraction | None = None
    errors: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.accepted


# ---------------------------------------------------------------------------
# lower-bound certificates


def _factor_with(n: int, table: PrimeTable) -> dict[int, int]:
    out: dict[int, int] = {}
    for p in table.as_list():
        if p * p > n:
            break
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out[p] = k
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def verify_subfactorization(cert: Certificate, table: PrimeTable | None = None, *, need_count: bool = True) -> VerificationReport:
    """Exact check that ``cert`` is a t-admissible subfactorization of N!.

    Accepted iff every factor is >= t, no prime is over-used and (when
    ``need_count``) the multiset has at least N elements.
    """
    N, t = cert.N, cert.t
    table = table or sieve_primes(max(N, 2))
    if table.limit < N:
        raise ValueError("prime table does not reach N")
    errors: list[str] = []
    nprimes = table.pi(N)
    primes = table.primes[:nprimes]
    used = np.zeros(nprimes + 1, dtype=object)
    range_diff = np.zeros(nprimes + 1, dtype=np.int64)
    count = 0
    min_factor = None
    index = {int(p): i for i, p in enumerate(primes.tolist())} if nprimes < 2_000_000 else None

    def pidx(p: int) -> int | None:
        if p > N:
            return None
        if index is not None:
            return index.get(p)
        i = table.pi(p) - 1
        return i if i >= 0 and int(primes[i]) == p else None

    def charge(fac: dict[int, int], times: int, where: str) -> None:
        for q, k in fac.items():
            i = pidx(q)
            if i is None:
                errors.append(f"{where}: prime {q} does not divide {N}!")
                continue
            used[i] += k * times

    for lineno, (mult, f) in enumerate(cert.factors):
        where = f"F#{lineno + 1} ({mult} x {f})"
        if mult < 0 or f < 1:
            errors.append(f"{where}: malformed")
            continue
        if mult == 0:
            continue
        if f < t:
            errors.append(f"{where}: factor below t={t}")
        count += mult
        min_factor = f if min_factor is None else min(min_factor, f)
        charge(_factor_with(f, table), mult, where)

    for lineno, (m, lo, hi, e) in enumerate(cert.blocks):
        where = f"P#{lineno + 1} ({m} {lo} {hi} {e})"
        if lo > hi or m < 1 or e < 0 or lo < 2:
            errors.append(f"{where}: malformed block")
            continue
        if hi > N:
            errors.append(f"{where}: prime range exceeds N")
            continue
        a, b = table.pi(lo - 1), table.pi(hi)
        if b == a or e == 0:
            continue
        first = int(primes[a])
        if m * first < t:
            errors.append(f"{where}: m*pmin = {m * first} below t={t}")
        k = e * (b - a)
        count += k
        min_factor = m * first if min_factor is None else min(min_factor, m * first)
        range_diff[a] += e
        range_diff[b] -= e
        charge(_factor_with(m, table), k, where)

    per_range = np.cumsum(range_diff)[:nprimes]
    budget = factorial_valuations(N, primes)
    surplus: dict[int, int] = {}
    over = []
    for i in np.flatnonzero((per_range > 0) | (used[:nprimes] != 0)).tolist():
        s = int(budget[i]) - int(per_range[i]) - int(used[i])
        if s < 0:
            over.append((int(primes[i]), s))
    if over:
        p, s = over[0]
        errors.append(f"prime {p} over-used by {-s}" + (f" (and {len(over) - 1} more primes)" if len(over) > 1 else ""))
    if nprimes <= 5000:
        for i in range(nprimes):
            surplus[int(primes[i])] = int(budget[i]) - int(per_range[i]) - int(used[i])
    else:
        surplus = {p: s for p, s in over}
    if need_count and count < N:
        errors.append(f"count {count} < N={N}")
    ok = not errors
    bound = f"t({N}) >= {t}" if ok and need_count else (f"M({N},{t}) >= {count}" if not [e for e in errors if not e.startswith("count")] else "")
    return VerificationReport(ok, count, min_factor, surplus, bound, errors=errors)


# ---------------------------------------------------------------------------
# dual certificates


def dual_constraint_sums(N: int, t: int, weights: dict[int, Fraction], table: PrimeTable):
    """Return (D, S) with S[j - t] = D * sum_p w_p nu_p(j) exactly for t <= j <= N."""
    den = 1
    for w in weights.values():
        den = den * w.denominator // math.gcd(den, w.denominator)
    scaled = {p: int(w * den) for p, w in weights.items() if w != 0}
    width = N - t + 1
    peak = max(scaled.values(), default=0) * (int(math.log2(max(N, 2))) + 1)
    dtype = np.int64 if peak < 2**62 else object
    S = np.zeros(width, dtype=dtype)
    for p, W in scaled.items():
        q = p
        while q <= N:
            first = ((t + q - 1) // q) * q
            if first <= N:
                S[first - t :: q] += W
            q *= p
    return den, S


def verify_dual(cert: DualCertificate, table: PrimeTable | None = None) -> VerificationReport:
    """Exact verification of a weakly increasing dual certificate."""
    N, t = cert.N, cert.t
    errors: list[str] = []
    if not (1 <= t and 2 * t <= N):
        return VerificationReport(False, errors=[f"dual certificates need t <= N/2 (got N={N}, t={t})"])
    table = table or sieve_primes(max(N, 2))
    primes = table.primes[: table.pi(N)].tolist()
    pset = set(primes)
    for p, w in cert.weights.items():
        if p not in pset:
            errors.append(f"weight given for non-prime or p > N: {p}")
        if w < 0:
            errors.append(f"negative weight at p={p}")
    prev_p, prev_w = None, Fraction(0)
    for p in primes:
        w = cert.weights.get(p, Fraction(0))
        if w < prev_w:
            errors.append(f"monotonicity violated: w_{prev_p} = {prev_w} > w_{p} = {w}")
            break
        prev_p, prev_w = p, w
    if errors:
        return VerificationReport(False, errors=errors)
    den, S = dual_constraint_sums(N, t, cert.weights, table)
    bad = np.flatnonzero(S < den)
    if bad.size:
        j = t + int(bad[0])
        return VerificationReport(False, errors=[f"constraint sum_p w_p nu_p(j) >= 1 fails at j={j}"])
    vals = factorial_valuations(N, np.asarray(primes, dtype=np.int64))
    value = Fraction(0)
    for p, v in zip(primes, vals.tolist()):
        w = cert.weights.get(p)
        if w:
            value += w * v
    bound = math.floor(value)
    msg = f"M({N},{t}) <= {bound}"
    if value < N:
        msg += f"; t({N}) < {t}"
    if cert.claimed_value is not None and value > cert.claimed_value:
        return VerificationReport(False, value=value, errors=[f"value {value} exceeds claimed {cert.claimed_value}"])
    return VerificationReport(True, count=bound, bound_implied=msg, value=value)


# ---------------------------------------------------------------------------
# text format


def _clean(line: str) -> str:
    return line.split("#", 1)[0].strip()


def write_certificate(cert: Certificate | DualCertificate, dest) -> None:
    out = io.StringIO()
    if isinstance(cert, Certificate):
        out.write(f"{CERT_MAGIC}\nN {cert.N}\nt {cert.t}\n")
        for mult, f in cert.factors:
            out.write(f"F {mult} {f}\n")
        for m, lo, hi, e in cert.blocks:
            out.write(f"P {m} {lo} {hi} {e}\n")
    else:
        out.write(f"{DUAL_MAGIC}\nN {cert.N}\nt {cert.t}\n")
        if cert.claimed_value is not None:
            v = cert.claimed_value
            out.write(f"V {v.numerator}/{v.denominator}\n")
        for p in sorted(cert.weights):
            w = cert.weights[p]
            out.write(f"W {p} {w.numerator}/{w.denominator}\n")
    text = out.getvalue()
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w") as fh:
            fh.write(text)


def certificate_text(cert) -> str:
    buf = io.StringIO()
    write_certificate(cert, buf)
    return buf.getvalue()


def _int(tok: str, lineno: int) -> int:
    if not tok.lstrip("-").isdigit():
        raise CertificateFormatError(f"expected an integer, got {tok!r}", lineno)
    return int(tok)


def _rat(tok: str, lineno: int) -> Fraction:
    num, slash, den = tok.partition("/")
    if not slash:
        den = "1"
    n, d = _int(num, lineno), _int(den, lineno)
    if d <= 0:
        raise CertificateFormatError("non-positive denominator", lineno)
    return Fraction(n, d)


def read_certificate(src) -> Certificate | DualCertificate:
    if hasattr(src, "read"):
        text = src.read()
    elif isinstance(src, (str, os.PathLike)) and os.path.exists(src):
        with open(src) as fh:
            text = fh.read()
    else:
        text = str(src)
    lines = [(i + 1, _clean(raw)) for i, raw in enumerate(text.splitlines())]
    lines = [(i, s) for i, s in lines if s]
    if not lines:
        raise CertificateFormatError("empty certificate")
    magic_line, magic = lines[0]
    if magic not in (CERT_MAGIC, DUAL_MAGIC):
        raise CertificateFormatError(f"unknown header {magic!r}", magic_line)
    N = t = None
    factors, blocks, weights = [], [], {}
    claimed = None
    last_p = 0
    for lineno, s in lines[1:]:
        tok = s.split()
        kind, args = tok[0], tok[1:]
        if kind in ("N", "t"):
            if len(args) != 1:
                raise CertificateFormatError(f"{kind} takes one value", lineno)
            if kind == "N":
                N = _int(args[0], lineno)
            else:
                t = _int(args[0], lineno)
        elif magic == CERT_MAGIC and kind == "F":
            if len(args) != 2:
                raise CertificateFormatError("F takes <mult> <factor>", lineno)
            factors.append((_int(args[0], lineno), _int(args[1], lineno)))
        elif magic == CERT_MAGIC and kind == "P":
            if len(args) != 4:
                raise CertificateFormatError("P takes <m> <pmin> <pmax> <e>", lineno)
            blocks.append(tuple(_int(a, lineno) for a in args))
        elif magic == DUAL_MAGIC and kind == "W":
            if len(args) != 2:
                raise CertificateFormatError("W takes <p> <num>/<den>", lineno)
            p = _int(args[0], lineno)
            if p <= last_p:
                raise CertificateFormatError("W lines must have ascending p", lineno)
            last_p = p
            weights[p] = _rat(args[1], lineno)
        elif magic == DUAL_MAGIC and kind == "V":
            claimed = _rat(args[0], lineno)
        else:
            raise CertificateFormatError(f"unexpected record {kind!r}", lineno)
    if N is None or t is None:
        raise CertificateFormatError("missing N or t line")
    if magic == CERT_MAGIC:
        return Certificate(N, t, factors, blocks)
    return DualCertificate(N, t, weights, claimed)


def certificate_io(target, direction: str = "read", cert=None):
    """Read a certificate from, or write one to, a path or stream."""
    if direction == "read":
        return read_certificate(target)
    if direction == "write":
        write_certificate(cert, target)
        return cert
    raise ValueError("direction must be 'read' or 'write'")


def certificate_from_multiset(N: int, t: int, items: Iterable[int]) -> Certificate:
    counts: dict[int, int] = {}
    for a in items:
        counts[a] = counts.get(a, 0) + 1
    return Certificate(N, t, [(c, a) for a, c in sorted(counts.items())])

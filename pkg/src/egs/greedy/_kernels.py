"""Inner loops of the greedy algorithms (numba-compiled when enabled)."""

from __future__ import annotations

import numpy as np

from .._accel import kernel


@kernel
def build_cofactor_table(t, lo, hi, pmax, spf, use_ratio_filter):
    """Integers lo <= m <= hi whose prime factors are <= pmax, stored with
    their factorizations in CSR form.

    With ``use_ratio_filter`` only m with m * qmax < t * qmin are kept
    (qmin, qmax the extreme prime factors of m); a minimal cofactor always
    passes this test.
    """
    n = hi - lo + 1 if hi >= lo else 0
    cand = np.empty(n, dtype=np.int64)
    ptr = np.empty(n + 1, dtype=np.int64)
    fp = np.empty(n * 9 + 16, dtype=np.int64)
    fe = np.empty(n * 9 + 16, dtype=np.int64)
    k = 0
    f = 0
    ptr[0] = 0
    for m in range(lo, hi + 1):
        if m == 1:
            cand[k] = 1
            k += 1
            ptr[k] = f
            continue
        x = m
        qmin = spf[x]
        qmax = qmin
        ok = True
        start = f
        while x > 1:
            q = spf[x]
            if q > pmax:
                ok = False
                break
            e = 0
            while x % q == 0:
                x //= q
                e += 1
            fp[f] = q
            fe[f] = e
            f += 1
            qmax = q
        if ok and use_ratio_filter and m * qmax >= t * qmin:
            ok = False
        if not ok:
            f = start
            continue
        cand[k] = m
        k += 1
        ptr[k] = f
    return cand[:k], ptr[: k + 1], fp[:f], fe[:f]


@kernel
def _lower_bound(arr, n, value):
    lo = 0
    hi = n
    while lo < hi:
        mid = (lo + hi) // 2
        if arr[mid] < value:
            lo = mid + 1
        else:
            hi = mid
    return lo


@kernel
def _divides(vals, p, pe, k, ptr, fp, fe):
    # does m_k * p^pe divide the residual?
    own = pe
    for j in range(ptr[k], ptr[k + 1]):
        q = fp[j]
        need = fe[j]
        if q == p:
            own += need
        elif vals[q] < need:
            return False
    return vals[p] >= own


@kernel
def _take(vals, p, pe, k, ptr, fp, fe):
    # largest e with (m_k p^pe)^e dividing the residual; subtract e copies
    own = pe
    e = vals[p]
    for j in range(ptr[k], ptr[k + 1]):
        q = fp[j]
        if q == p:
            own += fe[j]
        else:
            c = vals[q] // fe[j]
            if c < e:
                e = c
    c = vals[p] // own
    if c < e:
        e = c
    for j in range(ptr[k], ptr[k + 1]):
        q = fp[j]
        if q != p:
            vals[q] -= e * fe[j]
    vals[p] -= e * own
    return e


@kernel
def greedy_loop(t, primes_desc, vals, cand, ptr, fp, fe, out_m, out_p, out_e):
    """Standard greedy on the residual ``vals`` (indexed by prime value).

    Repeatedly takes the largest prime p with positive residual and the
    smallest cofactor m >= ceil(t/p) with m*p dividing the residual, using
    as many copies as divide.  Chosen cofactors never decrease, so the scan
    for the next cofactor resumes at the last chosen one.  Stops when some
    prime has no admissible multiple left.

    Returns (records written, halted flag); records = -1 on buffer overflow.
    """
    ncand = cand.shape[0]
    cap = out_m.shape[0]
    nout = 0
    last = 0
    for i in range(primes_desc.shape[0]):
        p = primes_desc[i]
        while vals[p] > 0:
            need = (t + p - 1) // p
            k = _lower_bound(cand, ncand, need)
            if k < last:
                k = last
            found = -1
            while k < ncand:
                if _divides(vals, p, 1, k, ptr, fp, fe):
                    found = k
                    break
                k += 1
            if found < 0:
                return nout, True
            e = _take(vals, p, 1, found, ptr, fp, fe)
            if nout >= cap:
                return -1, False
            out_m[nout] = cand[found]
            out_p[nout] = p
            out_e[nout] = e
            nout += 1
            last = found
    return nout, False


@kernel
def fast_loop(t, primes_desc, vals, cand, ptr, fp, fe, out_m, out_p, out_k, out_e):
    """Cofactor phase of the fast variant.

    For each prime p (descending) use the smallest tabulated cofactor m with
    m*p >= t dividing the residual; when none is left, try cofactors for
    p^2.  Remaining primes are left in ``vals`` for the combining phase.
    Records are (m, p, k, e): e copies of m * p^k.
    """
    ncand = cand.shape[0]
    cap = out_m.shape[0]
    nout = 0
    for i in range(primes_desc.shape[0]):
        p = primes_desc[i]
        for power in (1, 2):
            pk = p**power
            while vals[p] >= power:
                need = (t + pk - 1) // pk
                k = _lower_bound(cand, ncand, need)
                found = -1
                while k < ncand:
                    if _divides(vals, p, power, k, ptr, fp, fe):
                        found = k
                        break
                    k += 1
                if found < 0:
                    break
                e = _take(vals, p, power, found, ptr, fp, fe)
                if nout >= cap:
                    return -1
                out_m[nout] = cand[found]
                out_p[nout] = p
                out_k[nout] = power
                out_e[nout] = e
                nout += 1
    return nout


@kernel
def subtract_block_usage(vals, m, count, spf):
    # remove count copies of the cofactor m from the residual
    x = m
    while x > 1:
        q = spf[x]
        e = 0
        while x % q == 0:
            x //= q
            e += 1
        vals[q] -= e * count

"""CPLEX-style LP text export and re-import of M(N,t) models."""

from __future__ import annotations

import io
import re

import numpy as np
import scipy.sparse as sp

from .model import LPModel

_HEADER = re.compile(r"\\\s*egs-model\s+N=(\d+)\s+t=(\d+)\s+policy=(\S+)")


def export_model(model: LPModel, dest=None) -> str:
    """Write ``model`` as LP text; variables m<j>, constraints p<p>."""
    out = io.StringIO()
    out.write(f"\\ egs-model N={model.N} t={model.t} policy={model.policy}\n")
    out.write("Maximize\n obj:")
    for j in model.columns.tolist():
        out.write(f" + m{j}")
    out.write("\nSubject To\n")
    A = model.matrix.tocsr()
    cols = model.columns.tolist()
    for r, p in enumerate(model.primes.tolist()):
        s, e = A.indptr[r], A.indptr[r + 1]
        terms = " ".join(f"+ {int(v)} m{cols[k]}" for k, v in zip(A.indices[s:e].tolist(), A.data[s:e].tolist()))
        if not terms and cols:
            terms = f"+ 0 m{cols[0]}"
        out.write(f" p{p}: {terms} <= {int(model.capacity[r])}\n")
    out.write("Bounds\n")
    for j in cols:
        out.write(f" m{j} >= 0\n")
    out.write("End\n")
    text = out.getvalue()
    if dest is not None:
        if hasattr(dest, "write"):
            dest.write(text)
        else:
            with open(dest, "w") as fh:
                fh.write(text)
    return text


def import_model(src) -> LPModel:
    if hasattr(src, "read"):
        text = src.read()
    elif isinstance(src, str) and "egs-model" in src:
        text = src
    else:
        with open(src) as fh:
            text = fh.read()
    lines = text.splitlines()
    m = _HEADER.match(lines[0].strip())
    if not m:
        raise ValueError("missing egs-model header line")
    N, t, policy = int(m.group(1)), int(m.group(2)), m.group(3)
    section = None
    columns: list[int] = []
    primes, caps, rows, cols, data = [], [], [], [], []
    obj_buf = []
    for raw in lines[1:]:
        s = raw.strip()
        if not s:
            continue
        low = s.lower()
        if low in ("maximize", "subject to", "bounds", "end"):
            section = low
            continue
        if section == "maximize":
            obj_buf.append(s)
        elif section == "subject to":
            name, _, rest = s.partition(":")
            lhs, _, rhs = rest.partition("<=")
            primes.append(int(name.strip()[1:]))
            caps.append(int(rhs))
            for coef, var in re.findall(r"\+\s*(\d+)\s+m(\d+)", lhs):
                rows.append(len(primes) - 1)
                cols.append(int(var))
                data.append(int(coef))
    columns = [int(v) for v in re.findall(r"m(\d+)", " ".join(obj_buf))]
    index = {j: k for k, j in enumerate(columns)}
    A = sp.coo_matrix((np.asarray(data, float), (np.asarray(rows, np.int64), np.asarray([index[c] for c in cols], np.int64))),
                      shape=(len(primes), len(columns))).tocsr()
    return LPModel(N, t, policy, np.asarray(columns, np.int64), np.asarray(primes, np.int64), np.asarray(caps, np.int64), A)

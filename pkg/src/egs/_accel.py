"""Kernel compilation switch.

Hot loops are written once in the numba-compatible subset of Python.  When
numba is importable and ``EGS_DISABLE_NUMBA`` is unset they are compiled
with ``numba.njit``; otherwise the same functions run as plain Python over
numpy arrays.  Both paths must give identical results.
"""

from __future__ import annotations

import os

try:
    import numba
except ModuleNotFoundError:  # pragma: no cover - numba is a declared dependency
    numba = None

_OFF = {"1", "true", "yes", "on"}

ENABLED = numba is not None and os.environ.get("EGS_DISABLE_NUMBA", "").strip().lower() not in _OFF


def kernel(fn=None, **options):
    """Decorate a kernel; identity when compilation is disabled."""
    options.setdefault("cache", True)
    options.setdefault("nogil", True)

    def wrap(f):
        if not ENABLED:
            return f
        return numba.njit(**options)(f)

    return wrap if fn is None else wrap(fn)


def backend() -> str:
    return "numba" if ENABLED else "numpy"

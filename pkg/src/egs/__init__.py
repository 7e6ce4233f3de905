"""Bounds and certificates for the factorial factorization threshold t(N).

t(N) is the largest t such that N! splits into N factors, each at least t.
"""

__version__ = "0.1.0"

"""Repairing an approximate factorization: accounting, parameters, the
delta/alpha ledger, range verification and the small-prime inequality."""

from .accounting import AccountingView, accounting
from .construction import Measured, initial_multiset, measure
from .kb import KBReport, block_prefix_sums, kb_check, kb_series, shift_series_bound
from .ledger import Ledger, LedgerEntry, delta2_parts, ledger, prime_term_bounds
from .params import RepairConditionError, RepairParams, build_params, kappa_star_pair, parse_N
from .verify import (
    DEFAULT_INTERVALS,
    RepairReport,
    read_intervals,
    verify_intervals,
    verify_range,
    verify_repair,
)

__all__ = [
    "AccountingView", "accounting", "Measured", "initial_multiset", "measure",
    "KBReport", "block_prefix_sums", "kb_check", "kb_series", "shift_series_bound",
    "Ledger", "LedgerEntry", "delta2_parts", "ledger", "prime_term_bounds",
    "RepairConditionError", "RepairParams", "build_params", "kappa_star_pair", "parse_N",
    "DEFAULT_INTERVALS", "RepairReport", "read_intervals", "verify_intervals", "verify_range", "verify_repair",
]

"""Rearrangement of the standard factorization: downsets, weight certificates,
t_{2,3} and the one-quarter impossibility certificate."""

from .criteria import (
    CritReport,
    finite_weights,
    pow2_tail_obstruction,
    prime_budget,
    verify_asym_crit,
    verify_finite_crit,
)
from .downset import (
    DensityTable,
    Downset,
    DownsetError,
    a_count,
    check_downset,
    downset_analyze,
    rough_count_upto,
    rough_deviation_sup,
)
from .search import WeightSearchError, search_weights
from .weights import (
    WeightFormatError,
    WeightTable,
    bundled_table,
    format_weight_table,
    parse_weight_table,
    read_weight_table,
    write_weight_table,
)
from .quarter import (
    QUARTER_C,
    QUARTER_EPS,
    QUARTER_THRESHOLD,
    QuarterReport,
    T23Decision,
    UndecidedError,
    quarter_certificate_check,
    quarter_weights,
    smooth_options,
    t23_bruteforce,
    t23_decide,
    t23_dp,
    t23_exact,
)

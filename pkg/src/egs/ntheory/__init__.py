"""Number-theoretic foundations: sieving, valuations, smooth numbers and
rigorous analytic estimates."""

from .analytic import (
    Piece,
    StepFunctionDescriptor,
    error_majorant,
    factorial_log_bounds,
    pi_bounds,
    prime_count_lower,
    prime_count_upper,
    prime_sum_bounds,
)
from .interval import RI, RationalInterval, ri_e, ri_exp, ri_log, ri_pi, ri_sqrt, to_fraction
from .primes import (
    FactorialValuation,
    PrimeTable,
    ResourceLimitError,
    factorial_valuations,
    factorize,
    legendre_by_digits,
    legendre_valuation,
    sieve_primes,
    smallest_factor_table,
    valuation,
)
from .smooth import SmoothDecomposition, kappa_bound, kappa_ratio, kappa_rows, rough_count, smooth_ceiling, smooth_numbers_upto

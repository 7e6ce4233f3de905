"""Greedy subfactorizations, threshold search and hint chains."""

from .core import (
    GreedyConfig,
    GreedyResidualError,
    GreedyResult,
    fast_greedy,
    greedy_count,
    greedy_residual,
    greedy_subfactorization,
    large_prime_blocks,
)
from .search import (
    ChainGapError,
    SearchResult,
    exact_t_small,
    greedy_upper_estimate,
    hint_chain,
    read_hints,
    search_t,
    t1_exhaustive,
    t1_upper_bracket,
    write_hints,
)

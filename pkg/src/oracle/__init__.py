"""Brute-force reference sort for testing and `verify`."""

from .brute_force import (
    SuffixRef,
    all_suffixes,
    check_oracle_size,
    compare_p,
    first_divergence,
    lcp_of,
    oracle_bwt_lcp,
    oracle_p_state,
    oracle_partial_state,
    sorted_suffixes,
    suffix_codes,
    suffix_text,
)

__all__ = [
    "SuffixRef",
    "all_suffixes",
    "check_oracle_size",
    "compare_p",
    "first_divergence",
    "lcp_of",
    "oracle_bwt_lcp",
    "oracle_p_state",
    "oracle_partial_state",
    "sorted_suffixes",
    "suffix_codes",
    "suffix_text",
]

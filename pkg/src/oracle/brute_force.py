"""In-memory reference: sort every suffix of the collection directly.

Quadratic and desk-scale only. The pipeline is checked against it level by
level: the p-state is all m(k+1) suffixes sorted by p-prefix, then length,
then string index, with adjacent LCP values capped at p.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.errors import OracleSizeError
from src.ingest import SENTINEL_CODE, StringCollection


@dataclass(frozen=True)
class SuffixRef:
    """The l-suffix of string `string_index` (1-based); its sentinel is implicit."""
    string_index: int
    length: int


def suffix_codes(collection: StringCollection, ref: SuffixRef) -> bytes:
    """Symbol codes of the suffix, without its sentinel."""
    row = collection.rows[ref.string_index - 1]
    return row[collection.k - ref.length:]


def suffix_text(collection: StringCollection, ref: SuffixRef) -> str:
    """The suffix as characters, e.g. 'ACA$'."""
    return collection.alphabet.decode(suffix_codes(collection, ref) + bytes([SENTINEL_CODE]))


def _sort_key(collection: StringCollection, ref: SuffixRef, p: Optional[int]) -> tuple:
    text = suffix_codes(collection, ref) + bytes([SENTINEL_CODE])
    prefix = text if p is None else text[:p]
    return prefix, ref.length, ref.string_index


def compare_p(collection: StringCollection, a: SuffixRef, b: SuffixRef, p: Optional[int] = None) -> int:
    """-1, 0 or 1 as `a` sorts before, equal to or after `b` at level p (None: full order)."""
    ka, kb = _sort_key(collection, a, p), _sort_key(collection, b, p)
    return (ka > kb) - (ka < kb)


def lcp_of(collection: StringCollection, a: SuffixRef, b: SuffixRef) -> int:
    """Common prefix length of two suffixes; sentinels never match each other."""
    x, y = suffix_codes(collection, a), suffix_codes(collection, b)
    n = 0
    for cx, cy in zip(x, y):
        if cx != cy:
            break
        n += 1
    return n


def all_suffixes(collection: StringCollection) -> List[SuffixRef]:
    return [
        SuffixRef(string_index=j, length=l)
        for l in range(collection.k + 1)
        for j in range(1, collection.m + 1)
    ]


def sorted_suffixes(collection: StringCollection, p: Optional[int] = None) -> List[SuffixRef]:
    """All suffixes in p-order; the order is total, so any sort gives the same list."""
    return sorted(all_suffixes(collection), key=lambda ref: _sort_key(collection, ref, p))


def _adjacent_lcp(collection: StringCollection, order: List[SuffixRef], cap: Optional[int]) -> List[int]:
    values = [-1]
    for prev, cur in zip(order, order[1:]):
        value = lcp_of(collection, prev, cur)
        values.append(value if cap is None else min(value, cap))
    return values


def check_oracle_size(collection: StringCollection, max_suffixes: int):
    """Raise OracleSizeError when m(k+1) exceeds the guard."""
    n = collection.m * (collection.k + 1)
    if n > max_suffixes:
        raise OracleSizeError(
            f"Collection has {n} suffixes, oracle limit is {max_suffixes}; "
            f"raise it with --max-oracle-size"
        )


def oracle_p_state(collection: StringCollection, p: int) -> Tuple[List[int], List[int]]:
    """I_{X^p} and LCP_p by direct sorting.

    Args:
        collection: Test-scale collection
        p: Refinement level, p >= 0

    Returns:
        (levels of the p-ordered suffixes, adjacent LCP values capped at p)
    """
    order = sorted_suffixes(collection, p)
    return [ref.length for ref in order], _adjacent_lcp(collection, order, p)


def _preceding(collection: StringCollection, ref: SuffixRef) -> int:
    k = collection.k
    if ref.length == k:
        return SENTINEL_CODE
    return collection.rows[ref.string_index - 1][k - ref.length - 1]


def oracle_partial_state(collection: StringCollection, l: int) -> Tuple[List[int], List[int]]:
    """N_l and B_l by direct sorting of the l-suffixes.

    Args:
        collection: Test-scale collection
        l: Suffix length, 0 <= l <= k

    Returns:
        (string indices of the sorted l-suffixes, their preceding symbol codes)
    """
    order = sorted(
        (SuffixRef(string_index=j, length=l) for j in range(1, collection.m + 1)),
        key=lambda ref: _sort_key(collection, ref, None),
    )
    return [ref.string_index for ref in order], [_preceding(collection, ref) for ref in order]


def oracle_bwt_lcp(collection: StringCollection) -> Tuple[List[int], List[int], List[int]]:
    """Full sort: (BWT symbol codes, LCP, I_X)."""
    order = sorted_suffixes(collection)
    bwt = [_preceding(collection, ref) for ref in order]
    return bwt, _adjacent_lcp(collection, order, None), [ref.length for ref in order]


def first_divergence(actual: Sequence[int], expected: Sequence[int]) -> Optional[int]:
    """0-based index of the first difference (a length difference counts), or None."""
    for i, (a, b) in enumerate(zip(actual, expected)):
        if a != b:
            return i
    if len(actual) != len(expected):
        return min(len(actual), len(expected))
    return None

"""One refinement pass: I_{X^p} (and LCP_p) to I_{X^{p+1}} (and LCP_{p+1}).

The pass scans I_{X^p}; for the i-th entry l it takes the next unread symbol
c of B_l, i.e. the symbol preceding the i-th suffix in p-order. The suffix
c.w has length l+1 and belongs in bucket c; bucket order, then scan order,
is exactly the (p+1)-order. The sentinel bucket is fixed: m empty suffixes.
"""

import logging
from pathlib import Path
from typing import List, Optional, Tuple

from src.config import RunConfig
from src.errors import ContractError, MalformedEncodingError
from src.extlist import (
    IOCounters,
    MultiCursor,
    ResidentTracker,
    SeqList,
    concatenate,
    create_writer,
    share_buffer,
)
from src.ingest import SENTINEL_CODE
from src.merge.state import AlphaTracker, InterleaveEncoding, PartialLcp, lcp_width
from src.partial_bwt import PartialBwtSet

logger = logging.getLogger(__name__)


def _buckets(workdir: Path, prefix: str, sigma: int, width: int, signed: bool, role: str,
             counters: Optional[IOCounters], buffer_bytes: int) -> List[SeqList]:
    buckets: List[SeqList] = []
    try:
        for h in range(sigma + 1):
            buckets.append(create_writer(workdir / f"{prefix}_{h}.bin", width, signed=signed, role=role,
                                         counters=counters, buffer_bytes=buffer_bytes))
    except BaseException:
        _discard(buckets)
        raise
    return buckets


def _discard(*families: List[SeqList]):
    for family in families:
        for bucket in family:
            bucket.delete()


def _check_symbol(c: int, sigma: int, level: int):
    if c > sigma:
        raise MalformedEncodingError(f"Symbol code {c} in B_{level} outside alphabet of size {sigma}")


def _finish(buckets: List[SeqList], path: Path, role: str, expected: int,
            counters: Optional[IOCounters], buffer_bytes: int) -> SeqList:
    for bucket in buckets:
        bucket.seal()
    result = concatenate(buckets, path, role=role, counters=counters, buffer_bytes=buffer_bytes)
    if result.length != expected:
        result.delete()
        raise MalformedEncodingError(f"{path.name} has {result.length} entries, expected {expected}")
    return result


def interleave_step(
    encoding: InterleaveEncoding,
    partial: PartialBwtSet,
    workdir: Path,
    run_config: RunConfig,
    counters: Optional[IOCounters] = None,
    out_path: Optional[Path] = None,
) -> InterleaveEncoding:
    """Compute I_{X^{p+1}} from I_{X^p}, without LCP.

    Raises:
        MalformedEncodingError: If the encoding names a level > k, or its
            level counts disagree with |B_l| = m
    """
    workdir = Path(workdir)
    m, k, sigma = partial.m, partial.k, partial.sigma
    per_list = share_buffer(run_config.buffer_bytes, (sigma + 1) + (k + 1) + 1)
    width = encoding.seq.element_width

    buckets = _buckets(workdir, "IB", sigma, width, False, "IB", counters, per_list)
    try:
        for _ in range(m):
            buckets[SENTINEL_CODE].append(0)

        with encoding.seq.reader(counters, "I", per_list) as levels, \
                MultiCursor(partial.B, counters, "B", per_list) as cursor:
            for level in levels:
                c = cursor.next(level)
                if c != SENTINEL_CODE:
                    _check_symbol(c, sigma, level)
                    buckets[c].append(level + 1)
            cursor.check_exhausted()

        result = _finish(buckets, out_path or workdir / "I_next.bin", "I", m * (k + 1),
                         counters, run_config.buffer_bytes)
    except BaseException:
        _discard(buckets)
        raise
    return InterleaveEncoding(result, encoding.p + 1)


def interleave_lcp_step(
    encoding: InterleaveEncoding,
    lcp: PartialLcp,
    partial: PartialBwtSet,
    workdir: Path,
    run_config: RunConfig,
    counters: Optional[IOCounters] = None,
    tracker: Optional[ResidentTracker] = None,
) -> Tuple[InterleaveEncoding, PartialLcp, int]:
    """Compute I_{X^{p+1}} and LCP_{p+1} from I_{X^p} and LCP_p.

    For the suffix c.w emitted at position i, LCP_{p+1} gets 1 + alpha[c],
    where alpha[c] is the minimum of LCP_p over the positions since the last
    suffix preceded by c (the capped lcp with that suffix). The first suffix
    preceded by c opens its bucket and gets 0.

    Args:
        encoding: I_{X^p}
        lcp: LCP_p, same length as the encoding
        partial: B_0..B_k
        workdir: Where buckets and `I_next.bin` / `L_next.bin` are written
        run_config: Buffer settings
        counters: Optional IOCounters for this pass
        tracker: Optional resident-element tracker

    Returns:
        (I_{X^{p+1}}, LCP_{p+1}, largest LCP value appended in this pass)

    Raises:
        ContractError: If |I| != |LCP|
        MalformedEncodingError: If the encoding disagrees with B_0..B_k
    """
    if encoding.seq.length != lcp.seq.length:
        raise ContractError(
            f"Encoding has {encoding.seq.length} entries, LCP has {lcp.seq.length}"
        )
    workdir = Path(workdir)
    m, k, sigma = partial.m, partial.k, partial.sigma
    open_lists = 2 * (sigma + 1) + (k + 1) + 2
    per_list = share_buffer(run_config.buffer_bytes, open_lists)
    resident = sigma + (k + 1) + open_lists
    if tracker is not None:
        tracker.acquire(resident, "alpha, cursor positions and list handles")

    level_buckets: List[SeqList] = []
    lcp_buckets: List[SeqList] = []
    next_encoding: Optional[SeqList] = None
    try:
        level_buckets = _buckets(workdir, "IB", sigma, encoding.seq.element_width, False, "IB",
                                 counters, per_list)
        lcp_buckets = _buckets(workdir, "LB", sigma, lcp_width(k), True, "LB", counters, per_list)
        for _ in range(m):
            level_buckets[SENTINEL_CODE].append(0)
        lcp_buckets[SENTINEL_CODE].append(-1)
        for _ in range(m - 1):
            lcp_buckets[SENTINEL_CODE].append(0)

        alpha = AlphaTracker(sigma, k)
        max_lcp = 0
        with encoding.seq.reader(counters, "I", per_list) as levels, \
                lcp.seq.reader(counters, "L", per_list) as lcps, \
                MultiCursor(partial.B, counters, "B", per_list) as cursor:
            for level, value in zip(levels, lcps):
                c = cursor.next(level)
                alpha.observe(value)
                if c != SENTINEL_CODE:
                    _check_symbol(c, sigma, level)
                    level_buckets[c].append(level + 1)
                    emitted = alpha.emit(c)
                    lcp_buckets[c].append(emitted)
                    if emitted > max_lcp:
                        max_lcp = emitted
            cursor.check_exhausted()

        n = m * (k + 1)
        next_encoding = _finish(level_buckets, workdir / "I_next.bin", "I", n, counters, run_config.buffer_bytes)
        next_lcp = _finish(lcp_buckets, workdir / "L_next.bin", "L", n, counters, run_config.buffer_bytes)
    except BaseException:
        _discard(level_buckets, lcp_buckets)
        if next_encoding is not None:
            next_encoding.delete()
        raise
    finally:
        if tracker is not None:
            tracker.release(resident)
    return (
        InterleaveEncoding(next_encoding, encoding.p + 1),
        PartialLcp(next_lcp, lcp.p + 1),
        max_lcp,
    )


def remove_buckets(workdir: Path, sigma: int):
    """Delete the per-symbol bucket files reused across passes."""
    for prefix in ("IB", "LB"):
        for h in range(sigma + 1):
            path = Path(workdir) / f"{prefix}_{h}.bin"
            path.unlink(missing_ok=True)
            path.with_suffix(".meta").unlink(missing_ok=True)

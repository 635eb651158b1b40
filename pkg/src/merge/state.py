"""Merge-phase state: interleave encodings, capped LCP lists and the alpha tracker."""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from src.config import RunConfig
from src.extlist import IOCounters, SeqList, create_writer, width_for


@dataclass
class InterleaveEncoding:
    """I_{X^p}: for each suffix in p-order, its length (the level it comes from)."""
    seq: SeqList
    p: int


@dataclass
class PartialLcp:
    """LCP_p: LCP values capped at p; the first entry is -1."""
    seq: SeqList
    p: int


def level_width(k: int) -> int:
    return width_for(k)


def lcp_width(k: int) -> int:
    # a damaged B list can push one value past k before the pass is rejected
    return width_for(k + 1, signed=True)


class AlphaTracker:
    """Running minima of LCP values since the last suffix preceded by each symbol.

    Slot c-1 belongs to symbol c (1..sigma); the sentinel has no slot.
    -1 means no suffix preceded by c has been seen in this pass.
    """

    def __init__(self, sigma: int, k: int):
        self.infinity = k + 1
        self.values: List[int] = [-1] * sigma

    def observe(self, lcp: int):
        values = self.values
        for d, value in enumerate(values):
            if lcp < value:
                values[d] = lcp

    def emit(self, c: int) -> int:
        """LCP_{p+1} value for the suffix c.w at the current position, then reset c."""
        value = self.values[c - 1]
        self.values[c - 1] = self.infinity
        return value + 1 if value >= 0 else 0


def init_state(
    m: int,
    k: int,
    workdir: Path,
    run_config: RunConfig,
    counters: Optional[IOCounters] = None,
) -> Tuple[InterleaveEncoding, PartialLcp]:
    """I_{X^0} = m 0s, m 1s, ..., m ks and LCP_0 = -1 then zeros."""
    workdir = Path(workdir)
    encoding = create_writer(workdir / "I_cur.bin", level_width(k), role="I", counters=counters,
                             buffer_bytes=run_config.buffer_bytes)
    lcp = create_writer(workdir / "L_cur.bin", lcp_width(k), signed=True, role="L", counters=counters,
                        buffer_bytes=run_config.buffer_bytes)
    for level in range(k + 1):
        for _ in range(m):
            encoding.append(level)
    lcp.append(-1)
    for _ in range(m * (k + 1) - 1):
        lcp.append(0)
    return InterleaveEncoding(encoding.seal(), 0), PartialLcp(lcp.seal(), 0)

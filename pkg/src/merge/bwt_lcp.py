"""End-to-end BWT + LCP: Phase 1, refinement passes, BWT reconstruction.

Passes run until the largest value a pass appends is below p+1: at that
point every suffix is fully sorted, the pass reproduced its input, and
the pass count is l+1 for l the maximum LCP value.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from src.config import RunConfig
from src.errors import MalformedEncodingError
from src.extlist import (
    IOCounters,
    PassStats,
    ResidentTracker,
    SeqList,
    concatenate,
    reconstruct_interleave,
)
from src.ingest import Alphabet, ColumnSet
from src.merge.state import InterleaveEncoding, PartialLcp, init_state
from src.merge.stats import BuildStats
from src.merge.steps import interleave_lcp_step, interleave_step, remove_buckets
from src.partial_bwt import PartialBwtSet, build_partial_bwts, load_partial_bwts

logger = logging.getLogger(__name__)

LevelCallback = Callable[[int, InterleaveEncoding, Optional[PartialLcp]], None]


@dataclass
class BuildResult:
    """Outputs of one build."""
    bwt: SeqList
    lcp: Optional[SeqList]
    encoding: InterleaveEncoding
    partial: PartialBwtSet
    stats: BuildStats


def _phase1(columns: ColumnSet, workdir: Path, run_config: RunConfig, tracker: ResidentTracker,
            stats: BuildStats, reuse_partial_bwts: bool,
            partial: Optional[PartialBwtSet]) -> PartialBwtSet:
    if partial is None and reuse_partial_bwts:
        partial = load_partial_bwts(workdir, columns)
    if partial is None:
        partial = build_partial_bwts(columns, workdir, run_config, tracker, stats.phase1)
    return partial


def _reconstruct(encoding: InterleaveEncoding, partial: PartialBwtSet, run_config: RunConfig,
                 stats: BuildStats) -> SeqList:
    counters = IOCounters()
    run_config.bwt_path.parent.mkdir(parents=True, exist_ok=True)
    bwt = reconstruct_interleave(encoding.seq, partial.B, run_config.bwt_path, role="BWT",
                                 counters=counters, buffer_bytes=run_config.buffer_bytes)
    stats.output = PassStats.from_counters(0, counters)
    return bwt


def run_bwt_lcp(
    columns: ColumnSet,
    workdir: Path,
    run_config: RunConfig,
    on_level: Optional[LevelCallback] = None,
    reuse_partial_bwts: bool = False,
    tracker: Optional[ResidentTracker] = None,
    partial: Optional[PartialBwtSet] = None,
) -> BuildResult:
    """Compute the BWT and LCP array of the collection behind `columns`.

    Args:
        columns: T_0..T_k
        workdir: Work directory for all intermediate lists
        run_config: Buffers, widths, output paths, memory-budget flag
        on_level: Called as on_level(p, I_{X^p}, LCP_p) for p = 0 and after every pass
        reuse_partial_bwts: Use B_0..B_k already in the workdir when complete
        tracker: Resident-element tracker shared with the caller; one is made from run_config if None
        partial: B_0..B_k computed by the caller; Phase 1 is skipped when given

    Returns:
        BuildResult with `bwt.bin`, `lcp.bin`, the final encoding (`I_cur.bin`) and stats
    """
    workdir = Path(workdir)
    m, k, sigma = columns.m, columns.k, columns.alphabet.sigma
    stats = BuildStats(m=m, k=k, sigma=sigma)
    tracker = tracker or ResidentTracker(run_config.memory_limit(m, k, sigma))

    partial = _phase1(columns, workdir, run_config, tracker, stats, reuse_partial_bwts, partial)

    encoding, lcp = init_state(m, k, workdir, run_config)
    if on_level is not None:
        on_level(0, encoding, lcp)

    p = 0
    while True:
        counters = IOCounters()
        next_encoding, next_lcp, max_lcp = interleave_lcp_step(
            encoding, lcp, partial, workdir, run_config, counters, tracker
        )
        encoding.seq.delete()
        lcp.seq.delete()
        next_encoding.seq.rename(workdir / "I_cur.bin")
        next_lcp.seq.rename(workdir / "L_cur.bin")
        encoding, lcp = next_encoding, next_lcp

        stats.passes.append(PassStats.from_counters(p + 1, counters, max_lcp))
        logger.info(
            f"Merge pass {p + 1}: max LCP {max_lcp}, "
            f"{counters.elements_read} elements read, {counters.elements_written} written"
        )
        if max_lcp > k:
            raise MalformedEncodingError(f"LCP value {max_lcp} exceeds string length {k}; partial BWTs are inconsistent")
        if on_level is not None:
            on_level(p + 1, encoding, lcp)
        if max_lcp < p + 1:
            break
        p += 1
    remove_buckets(workdir, sigma)

    bwt = _reconstruct(encoding, partial, run_config, stats)
    run_config.lcp_path.parent.mkdir(parents=True, exist_ok=True)
    final_lcp = concatenate([lcp.seq], run_config.lcp_path, role="LCP",
                            buffer_bytes=run_config.buffer_bytes)
    lcp.seq.delete()
    stats.peak_resident_elements = tracker.peak
    logger.info(f"BWT and LCP complete: {stats.pass_count} passes, max LCP {stats.max_lcp}")
    return BuildResult(bwt=bwt, lcp=final_lcp, encoding=encoding, partial=partial, stats=stats)


def run_bwt_only(
    columns: ColumnSet,
    workdir: Path,
    run_config: RunConfig,
    on_level: Optional[LevelCallback] = None,
    reuse_partial_bwts: bool = False,
    tracker: Optional[ResidentTracker] = None,
    partial: Optional[PartialBwtSet] = None,
) -> BuildResult:
    """Compute only the BWT: k LCP-free passes reach I_{X^k} = I_X."""
    workdir = Path(workdir)
    m, k, sigma = columns.m, columns.k, columns.alphabet.sigma
    stats = BuildStats(m=m, k=k, sigma=sigma, lcp_computed=False)
    tracker = tracker or ResidentTracker(run_config.memory_limit(m, k, sigma))

    partial = _phase1(columns, workdir, run_config, tracker, stats, reuse_partial_bwts, partial)

    encoding, lcp = init_state(m, k, workdir, run_config)
    lcp.seq.delete()
    if on_level is not None:
        on_level(0, encoding, None)

    resident = (k + 1) + (sigma + 1) + 1
    for p in range(k):
        counters = IOCounters()
        tracker.acquire(resident, "cursor positions and list handles")
        next_encoding = interleave_step(encoding, partial, workdir, run_config, counters)
        tracker.release(resident)
        encoding.seq.delete()
        next_encoding.seq.rename(workdir / "I_cur.bin")
        encoding = next_encoding
        stats.passes.append(PassStats.from_counters(p + 1, counters))
        logger.info(f"Interleave pass {p + 1}/{k}: {counters.elements_read} elements read")
        if on_level is not None:
            on_level(p + 1, encoding, None)
    remove_buckets(workdir, sigma)

    bwt = _reconstruct(encoding, partial, run_config, stats)
    stats.peak_resident_elements = tracker.peak
    return BuildResult(bwt=bwt, lcp=None, encoding=encoding, partial=partial, stats=stats)


def render_bwt_text(bwt: SeqList, alphabet: Alphabet) -> str:
    """The BWT as characters, sentinel rendered as '$'."""
    return alphabet.decode(bwt)


def render_lcp_text(lcp: SeqList) -> str:
    return "".join(f"{value}\n" for value in lcp)


def write_text_outputs(result: BuildResult, alphabet: Alphabet) -> list:
    """Write `bwt.txt` / `lcp.txt` next to the binary outputs."""
    written = []
    bwt_txt = result.bwt.path.with_suffix(".txt")
    bwt_txt.write_text(render_bwt_text(result.bwt, alphabet) + "\n")
    written.append(bwt_txt)
    if result.lcp is not None:
        lcp_txt = result.lcp.path.with_suffix(".txt")
        lcp_txt.write_text(render_lcp_text(result.lcp))
        written.append(lcp_txt)
    return written

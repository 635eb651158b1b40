"""Phase 2: iterative interleave refinement, LCP, BWT output."""

from .bwt_lcp import (
    BuildResult,
    render_bwt_text,
    render_lcp_text,
    run_bwt_lcp,
    run_bwt_only,
    write_text_outputs,
)
from .state import AlphaTracker, InterleaveEncoding, PartialLcp, init_state, lcp_width, level_width
from .stats import STATS_FILE, BuildStats
from .steps import interleave_lcp_step, interleave_step, remove_buckets

__all__ = [
    "STATS_FILE",
    "AlphaTracker",
    "BuildResult",
    "BuildStats",
    "InterleaveEncoding",
    "PartialLcp",
    "init_state",
    "interleave_lcp_step",
    "interleave_step",
    "lcp_width",
    "level_width",
    "remove_buckets",
    "render_bwt_text",
    "render_lcp_text",
    "run_bwt_lcp",
    "run_bwt_only",
    "write_text_outputs",
]

"""Phase 1: partial BWTs B_0..B_k."""

from .phase1 import (
    FINGERPRINT_FILE,
    PartialBwtSet,
    build_partial_bwts,
    columns_digest,
    index_width,
    load_partial_bwts,
    project,
)

__all__ = [
    "FINGERPRINT_FILE",
    "PartialBwtSet",
    "build_partial_bwts",
    "columns_digest",
    "index_width",
    "load_partial_bwts",
    "project",
]

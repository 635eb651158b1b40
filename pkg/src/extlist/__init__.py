"""Disk-backed sequential lists, interleave encodings and I/O instrumentation."""

from .interleave import MultiCursor, reconstruct_interleave
from .iostats import IOCounters, PassStats, ResidentTracker
from .seqlist import (
    ListMode,
    ListReader,
    SeqList,
    concatenate,
    create_writer,
    load_array,
    open_list,
    read_all,
    share_buffer,
    value_range,
    width_for,
)

__all__ = [
    "IOCounters",
    "ListMode",
    "ListReader",
    "MultiCursor",
    "PassStats",
    "ResidentTracker",
    "SeqList",
    "concatenate",
    "create_writer",
    "load_array",
    "open_list",
    "read_all",
    "share_buffer",
    "reconstruct_interleave",
    "value_range",
    "width_for",
]

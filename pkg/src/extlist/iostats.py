"""I/O and residency instrumentation for sequential list passes.

Counters are grouped by role (which family of lists an element belongs to),
so a pass can be checked against its expected stream volume:
a merge pass reads m(k+1) elements from each of I, L and B.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Optional

from src.errors import MemoryBudgetError

logger = logging.getLogger(__name__)


@dataclass
class IOCounters:
    """Element and byte counters for one pass."""
    reads: Counter = field(default_factory=Counter)    # {role: elements}
    writes: Counter = field(default_factory=Counter)   # {role: elements}
    bytes_read: int = 0
    bytes_written: int = 0

    def record_read(self, role: str, elements: int, nbytes: int):
        self.reads[role] += elements
        self.bytes_read += nbytes

    def record_write(self, role: str, elements: int, nbytes: int):
        self.writes[role] += elements
        self.bytes_written += nbytes

    @property
    def elements_read(self) -> int:
        return sum(self.reads.values())

    @property
    def elements_written(self) -> int:
        return sum(self.writes.values())

    def merge(self, other: "IOCounters"):
        """Add another pass's counts into this one."""
        self.reads.update(other.reads)
        self.writes.update(other.writes)
        self.bytes_read += other.bytes_read
        self.bytes_written += other.bytes_written


@dataclass(frozen=True)
class PassStats:
    """Snapshot of one Phase-1 iteration or merge pass."""
    index: int
    elements_read: int
    elements_written: int
    bytes_read: int
    bytes_written: int
    reads_by_role: Dict[str, int]
    writes_by_role: Dict[str, int]
    max_lcp: Optional[int] = None

    @classmethod
    def from_counters(cls, index: int, counters: IOCounters,
                      max_lcp: Optional[int] = None) -> "PassStats":
        return cls(
            index=index,
            elements_read=counters.elements_read,
            elements_written=counters.elements_written,
            bytes_read=counters.bytes_read,
            bytes_written=counters.bytes_written,
            reads_by_role=dict(counters.reads),
            writes_by_role=dict(counters.writes),
            max_lcp=max_lcp,
        )


class ResidentTracker:
    """Track elements held in main memory.

    Only logical working state is charged: a loaded T_l array, alpha slots,
    cursor positions and open list handles. Fixed-size I/O buffers are not.
    """

    def __init__(self, limit: Optional[int] = None):
        self.limit = limit
        self.current = 0
        self.peak = 0

    def acquire(self, n: int, what: str = ""):
        requested = self.current + n
        if requested > self.peak:
            self.peak = requested
        if self.limit is not None and requested > self.limit:
            raise MemoryBudgetError(
                f"Resident elements {requested} exceed budget {self.limit}"
                + (f" while holding {what}" if what else "")
            )
        self.current = requested

    def release(self, n: int):
        self.current = max(0, self.current - n)

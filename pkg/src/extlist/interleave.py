"""Interleave encodings and rank-implicit multi-list reading.

An interleave W of lists V_0..V_n is encoded by I_W, where I_W[q] names the
list W[q] came from. W[q] is the j-th element of V_{I_W[q]} with j the
number of earlier occurrences of I_W[q], so W can be rebuilt with one
sequential scan of I_W and one forward reader per component.
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence

from src import config
from src.errors import MalformedEncodingError
from src.extlist.iostats import IOCounters
from src.extlist.seqlist import ListReader, SeqList, create_writer, share_buffer

logger = logging.getLogger(__name__)


class MultiCursor:
    """One forward reader per level; `next(l)` yields the next unread element of level l."""

    def __init__(self, components: Sequence[SeqList], counters: Optional[IOCounters] = None,
                 role: Optional[str] = None, buffer_bytes: Optional[int] = None):
        self.components = list(components)
        self.positions: List[int] = [0] * len(self.components)
        self._readers: List[ListReader] = []
        try:
            for component in self.components:
                self._readers.append(component.reader(counters, role, buffer_bytes))
        except BaseException:
            self.close()
            raise

    def next(self, level: int) -> int:
        if level < 0 or level >= len(self._readers):
            raise MalformedEncodingError(
                f"Encoding level {level} outside 0..{len(self._readers) - 1}"
            )
        try:
            value = next(self._readers[level])
        except StopIteration:
            raise MalformedEncodingError(
                f"Component {level} exhausted after {self.positions[level]} elements"
            ) from None
        self.positions[level] += 1
        return value

    def check_exhausted(self):
        """Every component must have been consumed exactly once through."""
        for level, (component, position) in enumerate(zip(self.components, self.positions)):
            if position != component.length:
                raise MalformedEncodingError(
                    f"Component {level} consumed {position} of {component.length} elements"
                )

    def close(self):
        for reader in self._readers:
            reader.close()

    def __enter__(self) -> "MultiCursor":
        return self

    def __exit__(self, *exc):
        self.close()


def reconstruct_interleave(
    encoding: SeqList,
    components: Sequence[SeqList],
    path: Path,
    role: str = "",
    counters: Optional[IOCounters] = None,
    buffer_bytes: int = config.BUFFER_BYTES,
) -> SeqList:
    """Rebuild the interleave W from its encoding and components.

    Args:
        encoding: I_W over levels 0..n
        components: V_0..V_n, each sealed
        path: Output list path

    Returns:
        Sealed list W, same width as the components

    Raises:
        MalformedEncodingError: If a level exceeds n, or the level counts
            in the encoding differ from the component lengths
    """
    if not components:
        raise MalformedEncodingError("No components to interleave")
    first = components[0]
    out = create_writer(path, first.element_width, signed=first.signed, role=role,
                        counters=counters, buffer_bytes=buffer_bytes)
    try:
        cursor_buffer = share_buffer(buffer_bytes, len(components))
        with encoding.reader(counters, "I") as levels, \
                MultiCursor(components, counters, "B", cursor_buffer) as cursor:
            for level in levels:
                out.append(cursor.next(level))
            cursor.check_exhausted()
    except BaseException:
        out.delete()
        raise
    return out.seal()

"""Disk-backed sequential lists of fixed-width integers.

Every list the engine touches (T_l, B_l, N_l, I, LCP and the per-symbol
buckets) is a SeqList: written once by appends at the tail, sealed, then
read forward only. Data lives in `<name>.bin` as raw little-endian values
with no header; a sidecar `<name>.meta` records `width=<w> len=<n> signed=<0|1>`.
"""

import logging
import os
from enum import Enum
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src import config
from src.errors import ContractError, EncodingError, ListIOError
from src.extlist.iostats import IOCounters

logger = logging.getLogger(__name__)

# Replaced by tests to observe file access
_open = open

ELEMENT_WIDTHS = config.ELEMENT_WIDTHS


class ListMode(str, Enum):
    WRITING = "writing"
    READING = "reading"
    SEALED = "sealed"


def value_range(width: int, signed: bool = False) -> Tuple[int, int]:
    """Inclusive (low, high) range representable in `width` bytes."""
    bits = 8 * width
    if signed:
        return -(1 << (bits - 1)), (1 << (bits - 1)) - 1
    return 0, (1 << bits) - 1


def width_for(max_value: int, signed: bool = False) -> int:
    """Smallest width in {1, 4, 8} that holds `max_value`.

    Args:
        max_value: Largest value the list must hold
        signed: Whether the list must also hold negatives (LCP lists hold -1)

    Returns:
        Element width in bytes
    """
    for width in ELEMENT_WIDTHS:
        if max_value <= value_range(width, signed)[1]:
            return width
    raise EncodingError(f"No supported width holds {max_value}")


def _dtype(width: int, signed: bool) -> np.dtype:
    return np.dtype(f"<{'i' if signed else 'u'}{width}")


def _meta_path(path: Path) -> Path:
    return path.with_suffix(".meta")


class SeqList:
    """Append-only, forward-read-only list backed by one file."""

    def __init__(
        self,
        path: Path,
        element_width: int,
        signed: bool = False,
        length: int = 0,
        mode: ListMode = ListMode.SEALED,
        role: str = "",
        buffer_bytes: int = config.BUFFER_BYTES,
    ):
        if element_width not in ELEMENT_WIDTHS:
            raise ContractError(f"Element width must be one of {ELEMENT_WIDTHS}, got {element_width}")
        self.path = Path(path)
        self.element_width = element_width
        self.signed = signed
        self.length = length
        self.mode = mode
        self.role = role
        self.buffer_bytes = buffer_bytes
        self.dtype = _dtype(element_width, signed)
        self._low, self._high = value_range(element_width, signed)
        self._buffer: List[int] = []
        self._buffer_elements = max(1, buffer_bytes // element_width)
        self._fh = None
        self._counters: Optional[IOCounters] = None

    def __repr__(self) -> str:
        return f"SeqList({self.path.name}, width={self.element_width}, len={self.length}, {self.mode.value})"

    def __len__(self) -> int:
        return self.length

    @property
    def meta_path(self) -> Path:
        return _meta_path(self.path)

    # Writing

    def append(self, value: int):
        """Append one value at the tail."""
        if self.mode is not ListMode.WRITING:
            raise ContractError(f"Cannot append to {self.path.name} in {self.mode.value} mode")
        if value < self._low or value > self._high:
            raise EncodingError(
                f"Value {value} out of range for width {self.element_width} "
                f"({'signed' if self.signed else 'unsigned'}) list {self.path}"
            )
        self._buffer.append(value)
        self.length += 1
        if len(self._buffer) >= self._buffer_elements:
            self._flush()

    def extend(self, values):
        for value in values:
            self.append(value)

    def _flush(self):
        if not self._buffer:
            return
        data = np.asarray(self._buffer, dtype=self.dtype).tobytes()
        try:
            self._fh.write(data)
        except OSError as e:
            raise ListIOError(f"Cannot write list {self.path}: {e}") from e
        if self._counters is not None:
            self._counters.record_write(self.role, len(self._buffer), len(data))
        self._buffer.clear()

    def seal(self) -> "SeqList":
        """Flush, close and write the manifest; the list becomes readable."""
        if self.mode is ListMode.SEALED:
            return self
        if self.mode is not ListMode.WRITING:
            raise ContractError(f"Cannot seal {self.path.name} in {self.mode.value} mode")
        self._flush()
        try:
            self._fh.close()
        except OSError as e:
            raise ListIOError(f"Cannot close list {self.path}: {e}") from e
        self._fh = None
        self._counters = None
        self.mode = ListMode.SEALED
        self._write_manifest()
        size = self.path.stat().st_size
        if size != self.length * self.element_width:
            raise ListIOError(
                f"List {self.path} has {size} bytes, expected {self.length * self.element_width}"
            )
        return self

    def _write_manifest(self):
        line = f"width={self.element_width} len={self.length} signed={int(self.signed)}\n"
        try:
            with _open(self.meta_path, "w") as f:
                f.write(line)
        except OSError as e:
            raise ListIOError(f"Cannot write manifest {self.meta_path}: {e}") from e

    # Reading

    def reader(self, counters: Optional[IOCounters] = None, role: Optional[str] = None,
               buffer_bytes: Optional[int] = None) -> "ListReader":
        """Open a forward-only reader over a sealed list."""
        if self.mode is ListMode.WRITING:
            raise ContractError(f"List {self.path.name} is not sealed")
        if self.mode is ListMode.READING:
            raise ContractError(f"List {self.path.name} is already being read")
        return ListReader(self, counters, self.role if role is None else role,
                          self.buffer_bytes if buffer_bytes is None else buffer_bytes)

    def __iter__(self) -> Iterator[int]:
        with self.reader() as r:
            yield from r

    def rename(self, path: Path) -> "SeqList":
        """Move a sealed list (data and manifest) to a new path."""
        if self.mode is not ListMode.SEALED:
            raise ContractError(f"Cannot rename {self.path.name} in {self.mode.value} mode")
        path = Path(path)
        try:
            os.replace(self.path, path)
            os.replace(self.meta_path, _meta_path(path))
        except OSError as e:
            raise ListIOError(f"Cannot rename list {self.path} to {path}: {e}") from e
        self.path = path
        return self

    def delete(self):
        """Remove the data file and its manifest."""
        if self._fh is not None:
            self._fh.close()
            self._fh = None
        self.path.unlink(missing_ok=True)
        self.meta_path.unlink(missing_ok=True)


class ListReader:
    """Forward-only iterator over a sealed SeqList, one buffer at a time."""

    def __init__(self, seq: SeqList, counters: Optional[IOCounters], role: str, buffer_bytes: int):
        self.seq = seq
        self.counters = counters
        self.role = role
        self.consumed = 0
        self._chunk: List[int] = []
        self._index = 0
        self._chunk_bytes = max(1, buffer_bytes // seq.element_width) * seq.element_width
        try:
            self._fh = _open(seq.path, "rb")
        except OSError as e:
            raise ListIOError(f"Cannot open list {seq.path}: {e}") from e
        seq.mode = ListMode.READING

    def __iter__(self) -> "ListReader":
        return self

    def __next__(self) -> int:
        if self._index >= len(self._chunk):
            self._fill()
        value = self._chunk[self._index]
        self._index += 1
        self.consumed += 1
        return value

    def read_raw(self) -> bytes:
        """Next buffer of raw bytes; empty at end of list."""
        if self._fh is None:
            return b""
        try:
            data = self._fh.read(self._chunk_bytes)
        except OSError as e:
            raise ListIOError(f"Cannot read list {self.seq.path}: {e}") from e
        if not data:
            self.close()
            return b""
        if self.counters is not None:
            self.counters.record_read(self.role, len(data) // self.seq.element_width, len(data))
        return data

    def _fill(self):
        data = self.read_raw()
        if not data:
            raise StopIteration
        self._chunk = np.frombuffer(data, dtype=self.seq.dtype).tolist()
        self._index = 0

    def close(self):
        if self._fh is not None:
            self._fh.close()
            self._fh = None
            self.seq.mode = ListMode.SEALED

    def __enter__(self) -> "ListReader":
        return self

    def __exit__(self, *exc):
        self.close()


def create_writer(
    path: Path,
    element_width: int,
    signed: bool = False,
    role: str = "",
    counters: Optional[IOCounters] = None,
    buffer_bytes: int = config.BUFFER_BYTES,
) -> SeqList:
    """Create an empty list in writing mode, truncating any previous file.

    Args:
        path: Data file path (`<name>.bin`)
        element_width: Bytes per element, one of 1, 4, 8
        signed: True for LCP lists
        role: Counter label for instrumentation
        counters: Optional IOCounters charged on every flush
        buffer_bytes: Write buffer size

    Returns:
        SeqList in writing mode

    Raises:
        ListIOError: If the file cannot be created
    """
    seq = SeqList(path, element_width, signed=signed, mode=ListMode.WRITING,
                  role=role, buffer_bytes=buffer_bytes)
    try:
        seq._fh = _open(seq.path, "wb")
    except OSError as e:
        raise ListIOError(f"Cannot create list {seq.path}: {e}") from e
    seq._counters = counters
    return seq


def open_list(path: Path, role: str = "", buffer_bytes: int = config.BUFFER_BYTES) -> SeqList:
    """Reopen a sealed list from its manifest."""
    path = Path(path)
    meta = _meta_path(path)
    try:
        with _open(meta, "r") as f:
            manifest = f.read()
        size = path.stat().st_size
    except OSError as e:
        raise ListIOError(f"Cannot open list {path}: {e}") from e
    try:
        fields = dict(item.split("=", 1) for item in manifest.split())
        width, length, signed = int(fields["width"]), int(fields["len"]), fields["signed"] == "1"
    except (KeyError, ValueError) as e:
        raise ListIOError(f"Corrupt manifest {meta}: {e}") from e
    if size != width * length:
        raise ListIOError(f"List {path} has {size} bytes, manifest says {width * length}")
    return SeqList(path, width, signed=signed, length=length, role=role, buffer_bytes=buffer_bytes)


def concatenate(
    buckets: Sequence[SeqList],
    path: Path,
    role: str = "",
    counters: Optional[IOCounters] = None,
    buffer_bytes: int = config.BUFFER_BYTES,
) -> SeqList:
    """Concatenate sealed buckets, in order, by byte-level append.

    Args:
        buckets: Sealed lists of equal width and signedness
        path: Output data file
        role: Role label of the result
        counters: Charged with the copied bytes (elements are not re-parsed)

    Returns:
        Sealed SeqList holding bucket 0's elements, then bucket 1's, ...
    """
    if not buckets:
        raise ContractError("Nothing to concatenate")
    first = buckets[0]
    path = Path(path)
    for bucket in buckets:
        if bucket.mode is not ListMode.SEALED:
            raise ContractError(f"Bucket {bucket.path.name} is not sealed")
        if bucket.element_width != first.element_width or bucket.signed != first.signed:
            raise ContractError(
                f"Width mismatch: {bucket.path.name} is {bucket.element_width}/{bucket.signed}, "
                f"{first.path.name} is {first.element_width}/{first.signed}"
            )
        if bucket.path.resolve() == path.resolve():
            raise ContractError(f"Cannot concatenate {bucket.path.name} into itself")

    length = 0
    try:
        with _open(path, "wb") as dst:
            for bucket in buckets:
                if not bucket.length:
                    continue
                with _open(bucket.path, "rb") as src:
                    while chunk := src.read(buffer_bytes):
                        dst.write(chunk)
                        if counters is not None:
                            counters.record_read("concat", 0, len(chunk))
                            counters.record_write("concat", 0, len(chunk))
                length += bucket.length
    except OSError as e:
        raise ListIOError(f"Cannot concatenate into {path}: {e}") from e

    result = SeqList(path, first.element_width, signed=first.signed, length=length,
                     role=role, buffer_bytes=buffer_bytes)
    result._write_manifest()
    logger.debug(f"Concatenated {len(buckets)} buckets into {path.name} ({length} elements)")
    return result


def load_array(seq: SeqList, counters: Optional[IOCounters] = None,
               role: Optional[str] = None) -> np.ndarray:
    """Read a whole list, sequentially, into a numpy array."""
    with seq.reader(counters, role) as r:
        chunks = []
        while data := r.read_raw():
            chunks.append(data)
    return np.frombuffer(b"".join(chunks), dtype=seq.dtype)


def read_all(seq: SeqList) -> List[int]:
    """Materialize a list; test and report scale only."""
    return list(seq)


def share_buffer(buffer_bytes: int, lists: int) -> int:
    """Per-list buffer when `lists` lists are open at once (never below 4 KiB unless the total is)."""
    return max(min(buffer_bytes, 4096), buffer_bytes // max(1, lists))

"""Input collection loading and column arrays T_0..T_k.

T_l lists, for every string in input order, the symbol at distance l from
its end: T_l[i] = s_i[k-l] (1-based), and T_k is all sentinels.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterator, List, Optional

from src import config
from src.config import RunConfig
from src.errors import EmptyInputError, IngestError, LengthError
from src.extlist import SeqList, create_writer, share_buffer
from src.ingest.alphabet import SENTINEL_CODE, Alphabet

logger = logging.getLogger(__name__)


@dataclass
class Record:
    """One input string before coding."""
    number: int           # 1-based record number
    text: str
    name: Optional[str] = None  # FASTA header

    @property
    def label(self) -> str:
        return f"record {self.number}" + (f" ({self.name})" if self.name else "")


@dataclass
class StringCollection:
    """m strings of common length k, as symbol codes."""
    m: int
    k: int
    rows: List[bytes]
    alphabet: Alphabet
    source_ids: Optional[List[str]] = None


@dataclass
class ColumnSet:
    """T_0..T_k, each of length m."""
    T: List[SeqList]
    m: int
    k: int
    alphabet: Alphabet


def iter_records(source: BinaryIO, input_format: str = "lines") -> Iterator[Record]:
    """Yield records from a plain one-per-line or FASTA byte stream.

    Lines may end in LF or CRLF. Blank lines are skipped. FASTA sequence
    lines are concatenated per record and the header becomes its name.
    """
    if input_format not in config.INPUT_FORMATS:
        raise IngestError(f"Unknown input format: {input_format}")

    if input_format == "lines":
        number = 0
        for raw in source:
            line = raw.decode("latin-1").rstrip("\r\n")
            if not line:
                continue
            number += 1
            yield Record(number=number, text=line)
        return

    number = 0
    name: Optional[str] = None
    parts: List[str] = []
    for line_no, raw in enumerate(source, 1):
        line = raw.decode("latin-1").strip()
        if not line:
            continue
        if line.startswith(">"):
            if name is not None:
                yield Record(number=number, text="".join(parts), name=name)
            number += 1
            name = line[1:].strip()
            parts = []
        elif name is None:
            raise IngestError(f"Sequence data before the first FASTA header at line {line_no}")
        else:
            parts.append(line)
    if name is not None:
        yield Record(number=number, text="".join(parts), name=name)


def _coded_rows(source: BinaryIO, input_format: str, alphabet: Alphabet) -> Iterator[tuple]:
    """Validate and code records; yields (record, codes). Enforces one common length."""
    k = None
    for record in iter_records(source, input_format):
        codes = alphabet.encode(record.text, record.label)
        if k is None:
            if not codes:
                raise LengthError(f"Empty string at {record.label}")
            k = len(codes)
        elif len(codes) != k:
            raise LengthError(
                f"Length {len(codes)} at {record.label} differs from common length {k}"
            )
        yield record, codes


def load_collection(source: BinaryIO, input_format: str, alphabet: Alphabet) -> StringCollection:
    """Load and validate a whole collection in memory.

    Args:
        source: Readable byte stream
        input_format: 'lines' or 'fasta'
        alphabet: Symbol alphabet

    Returns:
        StringCollection with m >= 1, k >= 1

    Raises:
        AlphabetError, LengthError, EmptyInputError
    """
    rows: List[bytes] = []
    names: List[str] = []
    for record, codes in _coded_rows(source, input_format, alphabet):
        rows.append(codes)
        if record.name is not None:
            names.append(record.name)
    if not rows:
        raise EmptyInputError("Input contains no strings")
    return StringCollection(
        m=len(rows),
        k=len(rows[0]),
        rows=rows,
        alphabet=alphabet,
        source_ids=names or None,
    )


class ColumnWriter:
    """Append strings one at a time to the k+1 column lists."""

    def __init__(self, workdir: Path, k: int, run_config: RunConfig):
        self.k = k
        self.m = 0
        per_list = share_buffer(run_config.buffer_bytes, k + 1)
        self.T = [
            create_writer(Path(workdir) / f"T_{l}.bin", 1, role="T", buffer_bytes=per_list)
            for l in range(k + 1)
        ]

    def add(self, codes: bytes):
        k = self.k
        for l in range(k):
            self.T[l].append(codes[k - l - 1])
        self.T[k].append(SENTINEL_CODE)
        self.m += 1

    def finish(self, alphabet: Alphabet) -> ColumnSet:
        for column in self.T:
            column.seal()
        logger.info(f"Wrote {self.k + 1} column lists for {self.m} strings")
        return ColumnSet(T=self.T, m=self.m, k=self.k, alphabet=alphabet)

    def discard(self):
        for column in self.T:
            column.delete()


def compute_columns(collection: StringCollection, workdir: Path, run_config: RunConfig) -> ColumnSet:
    """Write T_0..T_k for an in-memory collection in one pass over its rows."""
    Path(workdir).mkdir(parents=True, exist_ok=True)
    writer = ColumnWriter(workdir, collection.k, run_config)
    for codes in collection.rows:
        writer.add(codes)
    return writer.finish(collection.alphabet)


def stream_columns(source: BinaryIO, input_format: str, alphabet: Alphabet,
                   workdir: Path, run_config: RunConfig) -> ColumnSet:
    """Write T_0..T_k straight from the input stream without keeping rows."""
    Path(workdir).mkdir(parents=True, exist_ok=True)
    writer: Optional[ColumnWriter] = None
    try:
        for _, codes in _coded_rows(source, input_format, alphabet):
            if writer is None:
                writer = ColumnWriter(workdir, len(codes), run_config)
            writer.add(codes)
    except BaseException:
        if writer is not None:
            writer.discard()
        raise
    if writer is None:
        raise EmptyInputError("Input contains no strings")
    return writer.finish(alphabet)

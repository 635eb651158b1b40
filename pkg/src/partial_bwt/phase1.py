"""Phase 1: partial BWTs B_0..B_k by k projection passes.

B_l[i] is the symbol preceding the i-th smallest l-suffix. The sorted
l-suffix order is carried only implicitly, through N_l (which string each
l-suffix belongs to): N_l is the concatenation, in alphabet order, of the
projections of N_{l-1} on each preceding symbol. Bucket scans are stable,
so ties keep the order of N_{l-1}, i.e. string index order.
"""

import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

from src.config import RunConfig
from src.errors import ConfigError, ContractError, ListIOError
from src.extlist import (
    IOCounters,
    PassStats,
    ResidentTracker,
    SeqList,
    concatenate,
    create_writer,
    load_array,
    open_list,
    share_buffer,
    value_range,
)
from src.ingest import Alphabet, ColumnSet

logger = logging.getLogger(__name__)

# Digest of the columns a B_0..B_k set was built from
FINGERPRINT_FILE = "partial_bwts.sha256"

IterationCallback = Callable[[int, SeqList, SeqList], None]


@dataclass
class PartialBwtSet:
    """B_0..B_k, each of length m, over an alphabet of sigma symbols."""
    B: List[SeqList]
    m: int
    k: int
    sigma: int


def index_width(m: int, requested: Optional[int] = None) -> int:
    """Width of string-index lists (values 1..m)."""
    if requested is None:
        return 4 if m <= value_range(4)[1] else 8
    if m > value_range(requested)[1]:
        raise ConfigError(f"Integer width {requested} cannot hold string index {m}")
    return requested


def _bucket_paths(workdir: Path, prefix: str, sigma: int) -> List[Path]:
    return [workdir / f"{prefix}_{h}.bin" for h in range(sigma + 1)]


def columns_digest(columns: ColumnSet, chunk_size: int = 8192) -> str:
    """SHA256 over m, k, sigma and the raw bytes of T_0..T_k.

    Args:
        columns: T_0..T_k
        chunk_size: Read chunk size

    Returns:
        SHA256 hash as hex string (64 characters)
    """
    sha256_hash = hashlib.sha256(f"m={columns.m} k={columns.k} sigma={columns.alphabet.sigma}\n".encode())
    for column in columns.T:
        try:
            with open(column.path, "rb") as f:
                while chunk := f.read(chunk_size):
                    sha256_hash.update(chunk)
        except OSError as e:
            raise ListIOError(f"Cannot read list {column.path}: {e}") from e
    return sha256_hash.hexdigest()


def _project(
    B_prev: SeqList,
    N_prev: SeqList,
    sigma: int,
    workdir: Path,
    run_config: RunConfig,
    lookup: Optional[Sequence[int]] = None,
    counters: Optional[IOCounters] = None,
) -> Tuple[List[SeqList], Optional[List[SeqList]]]:
    if B_prev.length != N_prev.length:
        raise ContractError(
            f"{B_prev.path.name} has {B_prev.length} elements, {N_prev.path.name} has {N_prev.length}"
        )
    workdir = Path(workdir)
    open_lists = (sigma + 1) * (1 if lookup is None else 2) + 2
    per_list = share_buffer(run_config.buffer_bytes, open_lists)

    positions: List[SeqList] = []
    symbols: Optional[List[SeqList]] = None if lookup is None else []
    try:
        for path in _bucket_paths(workdir, "P", sigma):
            positions.append(create_writer(path, N_prev.element_width, role="P", counters=counters,
                                           buffer_bytes=per_list))
        if symbols is not None:
            for path in _bucket_paths(workdir, "PB", sigma):
                symbols.append(create_writer(path, 1, role="PB", counters=counters, buffer_bytes=per_list))

        with B_prev.reader(counters, "B", per_list) as preceding, \
                N_prev.reader(counters, "N", per_list) as origins:
            for c, q in zip(preceding, origins):
                if c > sigma:
                    raise ContractError(f"Symbol code {c} in {B_prev.path.name} outside alphabet of size {sigma}")
                positions[c].append(q)
                if symbols is not None:
                    symbols[c].append(lookup[q - 1])

        for bucket in positions + (symbols or []):
            bucket.seal()
    except BaseException:
        for bucket in positions + (symbols or []):
            bucket.delete()
        raise
    return positions, symbols


def project(
    B_prev: SeqList,
    N_prev: SeqList,
    alphabet: Alphabet,
    workdir: Path,
    run_config: RunConfig,
    counters: Optional[IOCounters] = None,
) -> List[SeqList]:
    """Split N_prev into buckets P(c_0)..P(c_sigma) by the symbol in B_prev.

    Args:
        B_prev: B_{l-1}
        N_prev: N_{l-1}
        alphabet: Symbol alphabet (fixes the bucket count)
        workdir: Where `P_<h>.bin` buckets are written

    Returns:
        sigma+1 sealed buckets; within each, positions keep their order in N_prev
    """
    positions, _ = _project(B_prev, N_prev, alphabet.sigma, workdir, run_config, counters=counters)
    return positions


def build_partial_bwts(
    columns: ColumnSet,
    workdir: Path,
    run_config: RunConfig,
    tracker: Optional[ResidentTracker] = None,
    iteration_stats: Optional[List[PassStats]] = None,
    on_iteration: Optional[IterationCallback] = None,
) -> PartialBwtSet:
    """Compute B_0..B_k from T_0..T_k.

    B_0 = T_0 and N_0 = 1..m. Iteration l projects (B_{l-1}, N_{l-1}) into
    buckets and, alongside each string index q, records T_l[q] in a companion
    bucket; concatenating both bucket families gives N_l and B_l = T_l[N_l[.]].
    Only T_l is resident during iteration l.

    Args:
        columns: T_0..T_k
        workdir: Work directory for B, N and bucket files
        run_config: Buffer and integer-width settings
        tracker: Optional resident-element tracker
        iteration_stats: If given, receives one PassStats per iteration (index 0 is setup)
        on_iteration: Called as on_iteration(l, N_l, B_l) for l = 0..k while N_l still exists

    Returns:
        PartialBwtSet with all k+1 lists sealed
    """
    workdir = Path(workdir)
    m, k, sigma = columns.m, columns.k, columns.alphabet.sigma
    tracker = tracker or ResidentTracker()
    width = index_width(m, run_config.int_width)
    handles = 2 * (sigma + 1) + 2
    fingerprint = workdir / FINGERPRINT_FILE
    fingerprint.unlink(missing_ok=True)

    counters = IOCounters()
    B = [concatenate([columns.T[0]], workdir / "B_0.bin", role="B", counters=counters,
                     buffer_bytes=run_config.buffer_bytes)]
    N_prev = create_writer(workdir / "N_0.bin", width, role="N", counters=counters,
                           buffer_bytes=run_config.buffer_bytes)
    for q in range(1, m + 1):
        N_prev.append(q)
    N_prev.seal()
    if iteration_stats is not None:
        iteration_stats.append(PassStats.from_counters(0, counters))
    if on_iteration is not None:
        on_iteration(0, N_prev, B[0])

    for l in range(1, k + 1):
        counters = IOCounters()
        tracker.acquire(m + handles, f"T_{l} and bucket handles")
        try:
            lookup = load_array(columns.T[l], counters, "T").tolist()

            positions, symbols = _project(B[l - 1], N_prev, sigma, workdir, run_config, lookup, counters)
            N_cur = concatenate(positions, workdir / f"N_{l}.bin", role="N", counters=counters,
                                buffer_bytes=run_config.buffer_bytes)
            B.append(concatenate(symbols, workdir / f"B_{l}.bin", role="B", counters=counters,
                                 buffer_bytes=run_config.buffer_bytes))

            N_prev.delete()
            N_prev = N_cur
            del lookup
        finally:
            tracker.release(m + handles)

        if on_iteration is not None:
            on_iteration(l, N_prev, B[l])
        if iteration_stats is not None:
            iteration_stats.append(PassStats.from_counters(l, counters))
        logger.debug(f"Phase 1 iteration {l}/{k}: {counters.elements_read} elements read")

    N_prev.delete()
    for path in _bucket_paths(workdir, "P", sigma) + _bucket_paths(workdir, "PB", sigma):
        path.unlink(missing_ok=True)
        path.with_suffix(".meta").unlink(missing_ok=True)

    try:
        fingerprint.write_text(columns_digest(columns) + "\n")
    except OSError as e:
        raise ListIOError(f"Cannot write {fingerprint}: {e}") from e

    logger.info(f"Phase 1 complete: {k + 1} partial BWTs of {m} symbols")
    return PartialBwtSet(B=B, m=m, k=k, sigma=sigma)


def load_partial_bwts(workdir: Path, columns: ColumnSet) -> Optional[PartialBwtSet]:
    """Reopen a complete B_0..B_k set left by an earlier build of the same columns, or None.

    The set is reused only if the fingerprint written at the end of that build
    matches the digest of `columns`.
    """
    workdir = Path(workdir)
    m, k, sigma = columns.m, columns.k, columns.alphabet.sigma
    fingerprint = workdir / FINGERPRINT_FILE
    try:
        stored = fingerprint.read_text().strip()
    except OSError:
        return None
    if stored != columns_digest(columns):
        logger.warning(f"Partial BWTs in {workdir} were built from different input, rebuilding")
        return None

    B = []
    for l in range(k + 1):
        path = workdir / f"B_{l}.bin"
        if not path.exists() or not path.with_suffix(".meta").exists():
            return None
        try:
            seq = open_list(path, role="B")
        except ListIOError as e:
            logger.warning(f"Ignoring unusable partial BWT {path.name}: {e}")
            return None
        if seq.length != m:
            return None
        B.append(seq)
    logger.info(f"Reusing partial BWTs B_0..B_{k} from {workdir}")
    return PartialBwtSet(B=B, m=m, k=k, sigma=sigma)

"""bwt-lcp command line: build, verify, stats."""

import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Tuple

import click

from src import config
from src.config import RunConfig
from src.errors import (
    BwtLcpError,
    ListIOError,
    MalformedEncodingError,
    MemoryBudgetError,
    OracleSizeError,
)
from src.extlist import PassStats, ResidentTracker, read_all
from src.ingest import Alphabet, ColumnSet, StringCollection, compute_columns, load_collection, stream_columns
from src.merge import (
    STATS_FILE,
    BuildResult,
    BuildStats,
    run_bwt_lcp,
    run_bwt_only,
    write_text_outputs,
)
from src.oracle import check_oracle_size, first_divergence, oracle_bwt_lcp
from src.partial_bwt import FINGERPRINT_FILE, PartialBwtSet, build_partial_bwts, load_partial_bwts

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_MISMATCH = 3
EXIT_GUARD = 4

# Encoding and LCP lists of the merge loop
MERGE_LISTS = ("I_cur", "L_cur", "I_next", "L_next")


def exit_code_for(error: BaseException) -> int:
    """Map an engine exception to the process exit status."""
    if isinstance(error, OracleSizeError):
        return EXIT_GUARD
    if isinstance(error, MalformedEncodingError):
        return EXIT_MISMATCH
    if isinstance(error, (ListIOError, OSError, MemoryBudgetError)):
        return EXIT_IO
    return EXIT_VALIDATION


@contextmanager
def stage(name: str) -> Iterator[None]:
    """Turn engine errors raised inside a pipeline stage into exit statuses."""
    try:
        yield
    except (BwtLcpError, OSError) as e:
        logger.debug(f"Stage {name} failed", exc_info=True)
        click.echo(f"❌ {name} failed: {e}", err=True)
        sys.exit(exit_code_for(e))


def intermediate_names(k: int, sigma: int) -> List[str]:
    """Stems of the working lists a build over k columns and sigma symbols creates."""
    names = [f"{prefix}_{l}" for prefix in ("T", "B", "N") for l in range(k + 1)]
    names += [f"{prefix}_{h}" for prefix in ("P", "PB", "IB", "LB") for h in range(sigma + 1)]
    return names + list(MERGE_LISTS)


def cleanup_intermediates(workdir: Path, k: int, sigma: int, keep: Iterable[Path] = ()) -> int:
    """Delete the working lists of one build; outputs, stats.txt and unrelated files stay.

    Args:
        workdir: Work directory of the build
        k: String length
        sigma: Alphabet size
        keep: Output paths that must survive even if they carry a working-list name

    Returns:
        Number of files removed
    """
    workdir = Path(workdir)
    kept = {Path(p).resolve() for p in keep}
    candidates = [workdir / f"{name}{suffix}" for name in intermediate_names(k, sigma)
                  for suffix in (".bin", ".meta")]
    candidates.append(workdir / FINGERPRINT_FILE)

    removed = 0
    for path in candidates:
        if not path.exists() or path.resolve() in kept or path.with_suffix(".bin").resolve() in kept:
            continue
        path.unlink()
        removed += 1
    logger.debug(f"Removed {removed} intermediate files from {workdir}")
    return removed


def _outputs(run_config: RunConfig) -> List[Path]:
    return [run_config.bwt_path, run_config.lcp_path]


def _run_pipeline(
    columns: ColumnSet,
    run_config: RunConfig,
    reuse_partial_bwts: bool = False,
) -> BuildResult:
    """Phase 1 then Phase 2, each under its own stage name."""
    workdir = run_config.workdir
    tracker = ResidentTracker(run_config.memory_limit(columns.m, columns.k, columns.alphabet.sigma))
    phase1: List[PassStats] = []

    with stage("phase 1"):
        partial: Optional[PartialBwtSet] = None
        if reuse_partial_bwts:
            partial = load_partial_bwts(workdir, columns)
        if partial is None:
            partial = build_partial_bwts(columns, workdir, run_config, tracker, phase1)

    with stage("phase 2"):
        run = run_bwt_only if run_config.bwt_only else run_bwt_lcp
        result = run(columns, workdir, run_config, tracker=tracker, partial=partial)
    result.stats.phase1 = phase1
    return result


def _compare(result: BuildResult, collection: StringCollection) -> List[Tuple[str, int, int, int]]:
    """Compare pipeline output with the oracle; returns (name, index, got, expected) per divergence."""
    bwt, lcp, encoding = oracle_bwt_lcp(collection)
    checks = [("BWT", read_all(result.bwt), bwt), ("I", read_all(result.encoding.seq), encoding)]
    if result.lcp is not None:
        checks.append(("LCP", read_all(result.lcp), lcp))

    mismatches = []
    for name, actual, expected in checks:
        index = first_divergence(actual, expected)
        if index is not None:
            got = actual[index] if index < len(actual) else None
            want = expected[index] if index < len(expected) else None
            mismatches.append((name, index, got, want))
    return mismatches


def _verify(result: BuildResult, collection: StringCollection) -> int:
    mismatches = _compare(result, collection)
    if not mismatches:
        checked = "BWT and I" if result.lcp is None else "BWT, LCP and I"
        click.echo(f"✅ {checked} match the reference sort ({len(result.bwt)} entries)")
        return EXIT_OK
    for name, index, got, want in mismatches:
        click.echo(f"❌ {name} diverges at position {index}: got {got}, expected {want}", err=True)
    return EXIT_MISMATCH


def _print_stats(stats: BuildStats):
    click.echo(f"\n{'=' * 60}")
    click.echo("📊 BUILD STATS")
    click.echo(f"{'=' * 60}")
    click.echo(f"Strings (m): {stats.m:,}")
    click.echo(f"Length (k): {stats.k}")
    click.echo(f"Alphabet size: {stats.sigma}")
    click.echo(f"Merge passes: {stats.pass_count}")
    if stats.max_lcp is not None:
        click.echo(f"Max LCP (l): {stats.max_lcp}")
    else:
        click.echo("Max LCP (l): not computed (BWT-only build)")
    click.echo(f"Bytes read: {stats.bytes_read:,}")
    click.echo(f"Bytes written: {stats.bytes_written:,}")
    click.echo(f"Peak resident elements: {stats.peak_resident_elements:,}")
    if stats.passes:
        click.echo()
        click.echo(stats.pass_table().to_string(index=False))
    click.echo()


def run_options(f):
    """Options shared by build and verify."""
    options = [
        click.option("--input", "input_path", required=True,
                     type=click.Path(exists=True, dir_okay=False, path_type=Path),
                     help="Input collection, one string per line or FASTA"),
        click.option("--format", "input_format", type=click.Choice(config.INPUT_FORMATS),
                     default="lines", show_default=True),
        click.option("--alphabet", default=config.DEFAULT_ALPHABET, show_default=True,
                     help="Symbols in lexicographic order, without '$'"),
        click.option("--workdir", type=click.Path(file_okay=False, path_type=Path),
                     default=config.WORKDIR, show_default=True),
        click.option("--out-bwt", type=click.Path(dir_okay=False, path_type=Path), default=None,
                     help="BWT output (default <workdir>/bwt.bin)"),
        click.option("--out-lcp", type=click.Path(dir_okay=False, path_type=Path), default=None,
                     help="LCP output (default <workdir>/lcp.bin)"),
        click.option("--text", "text_output", is_flag=True, help="Also write bwt.txt / lcp.txt"),
        click.option("--int-width", type=click.Choice(["1", "4", "8"]), default=None,
                     help="Width of string-index lists (default: auto)"),
        click.option("--buffer-bytes", type=int, default=config.BUFFER_BYTES, show_default=True),
        click.option("--keep-intermediates", is_flag=True, help="Keep T/B/N/I/L working files"),
        click.option("--max-oracle-size", type=int, default=config.MAX_ORACLE_SIZE, show_default=True,
                     help="Largest m(k+1) the reference sort accepts"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _make_config(**kwargs) -> RunConfig:
    width = kwargs.pop("int_width")
    with stage("config"):
        return RunConfig(int_width=int(width) if width else config.INT_WIDTH, **kwargs)


@click.group()
@click.option("--log-level", default=config.LOG_LEVEL, show_default=True,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False))
def cli(log_level: str):
    """External-memory BWT and LCP construction for string collections."""
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@cli.command()
@run_options
@click.option("--verify", is_flag=True, help="Compare the result with the reference sort")
@click.option("--bwt-only", is_flag=True, help="Skip the LCP array")
def build(**kwargs):
    """Build the BWT and LCP array of a collection."""
    run_config = _make_config(**kwargs)
    workdir = run_config.workdir

    with stage("ingest"):
        alphabet = Alphabet.from_string(run_config.alphabet)
        collection = None
        if run_config.verify:
            with open(run_config.input_path, "rb") as source:
                collection = load_collection(source, run_config.input_format, alphabet)
            check_oracle_size(collection, run_config.max_oracle_size)
            columns = compute_columns(collection, workdir, run_config)
        else:
            with open(run_config.input_path, "rb") as source:
                columns = stream_columns(source, run_config.input_format, alphabet, workdir, run_config)
    click.echo(f"📥 Loaded {columns.m:,} strings of length {columns.k} from {run_config.input_path}")

    result = _run_pipeline(columns, run_config)

    status = EXIT_OK
    with stage("output"):
        stats_path = result.stats.save(workdir)
        click.echo(f"✅ BWT: {result.bwt.path} ({len(result.bwt):,} symbols)")
        if result.lcp is not None:
            click.echo(f"✅ LCP: {result.lcp.path} ({len(result.lcp):,} values)")
        if run_config.text_output:
            for path in write_text_outputs(result, alphabet):
                click.echo(f"📝 {path}")
        summary = f"📊 {result.stats.pass_count} merge passes"
        if result.stats.max_lcp is not None:
            summary += f", max LCP {result.stats.max_lcp}"
        click.echo(f"{summary} (stats: {stats_path})")

        if collection is not None:
            status = _verify(result, collection)
        if not run_config.keep_intermediates:
            cleanup_intermediates(workdir, columns.k, columns.alphabet.sigma, _outputs(run_config))
    sys.exit(status)


@cli.command()
@run_options
def verify(**kwargs):
    """Run the pipeline and compare BWT, LCP and I with the reference sort.

    Partial BWTs left in the workdir by `build --keep-intermediates` are
    reused, so damaged B lists are reported as a mismatch.
    """
    run_config = _make_config(**kwargs)

    with stage("ingest"):
        alphabet = Alphabet.from_string(run_config.alphabet)
        with open(run_config.input_path, "rb") as source:
            collection = load_collection(source, run_config.input_format, alphabet)
        check_oracle_size(collection, run_config.max_oracle_size)
        columns = compute_columns(collection, run_config.workdir, run_config)

    result = _run_pipeline(columns, run_config, reuse_partial_bwts=True)

    with stage("output"):
        result.stats.save(run_config.workdir)
        status = _verify(result, collection)
        if not run_config.keep_intermediates:
            cleanup_intermediates(run_config.workdir, columns.k, columns.alphabet.sigma, _outputs(run_config))
    sys.exit(status)


@cli.command()
@click.option("--workdir", type=click.Path(file_okay=False, path_type=Path),
              default=config.WORKDIR, show_default=True)
def stats(workdir: Path):
    """Show the stats of the last build in a workdir."""
    path = Path(workdir) / STATS_FILE
    if not path.exists():
        click.echo(f"❌ No {STATS_FILE} in {workdir}; run build first", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        build_stats = BuildStats.load(workdir)
    except (KeyError, ValueError) as e:
        click.echo(f"❌ Unreadable {path}: {e}", err=True)
        sys.exit(EXIT_VALIDATION)
    _print_stats(build_stats)


def main():
    """Entry point for `python -m src.cli`."""
    cli(prog_name="bwt-lcp")


if __name__ == "__main__":
    main()

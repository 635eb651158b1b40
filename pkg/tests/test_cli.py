"""Tests for the build / verify / stats commands."""
import random

import pytest
from click.testing import CliRunner

from src.cli import cleanup_intermediates, cli, exit_code_for, intermediate_names
from src.errors import (
    AlphabetError,
    ConfigError,
    ListIOError,
    MalformedEncodingError,
    MemoryBudgetError,
    OracleSizeError,
)
from src.merge import BuildStats
from src.partial_bwt import FINGERPRINT_FILE

from conftest import FIG_BWT, FIG_LCP


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def workdir(tmp_path):
    return tmp_path / "work"


def invoke(runner, *args):
    return runner.invoke(cli, [str(a) for a in args])


class TestBuild:
    """Test the build command."""

    def test_three_read_example(self, runner, fig_input, workdir):
        """Test text outputs and pass count of the three-read example."""
        result = invoke(runner, "build", "--input", fig_input, "--workdir", workdir, "--text")
        assert result.exit_code == 0, result.output
        assert (workdir / "bwt.txt").read_text().strip() == FIG_BWT
        assert [int(v) for v in (workdir / "lcp.txt").read_text().split()] == FIG_LCP
        assert "3 merge passes, max LCP 2" in result.output
        assert BuildStats.load(workdir).pass_count == 3

    def test_single_string(self, runner, tmp_path, workdir):
        """Test one string gives k+1 outputs."""
        path = tmp_path / "one.txt"
        path.write_text("GATTACA\n")
        result = invoke(runner, "build", "--input", path, "--workdir", workdir, "--text")
        assert result.exit_code == 0, result.output
        assert len((workdir / "bwt.txt").read_text().strip()) == 8

    def test_unknown_character(self, runner, tmp_path, workdir):
        """Test a character outside the alphabet exits 1 naming the record."""
        path = tmp_path / "bad.txt"
        path.write_text("ACGT\nACNT\n")
        result = invoke(runner, "build", "--input", path, "--workdir", workdir)
        assert result.exit_code == 1
        assert "ingest failed" in result.output
        assert "record 2" in result.output

    def test_length_mismatch(self, runner, tmp_path, workdir):
        """Test unequal lengths exit 1."""
        path = tmp_path / "bad.txt"
        path.write_text("ACGT\nACG\n")
        assert invoke(runner, "build", "--input", path, "--workdir", workdir).exit_code == 1

    def test_empty_input(self, runner, tmp_path, workdir):
        """Test an empty file exits 1."""
        path = tmp_path / "empty.txt"
        path.write_text("\n")
        assert invoke(runner, "build", "--input", path, "--workdir", workdir).exit_code == 1

    def test_invalid_config(self, runner, fig_input, workdir):
        """Test a rejected setting exits 1 from the config stage."""
        result = invoke(runner, "build", "--input", fig_input, "--workdir", workdir, "--buffer-bytes", 4)
        assert result.exit_code == 1
        assert "config failed" in result.output

    def test_index_width_too_small(self, runner, tmp_path, workdir):
        """Test --int-width 1 with more than 255 strings fails in Phase 1."""
        path = tmp_path / "many.txt"
        path.write_text("AC\n" * 300)
        result = invoke(runner, "build", "--input", path, "--workdir", workdir, "--int-width", 1)
        assert result.exit_code == 1
        assert "phase 1 failed" in result.output

    def test_fasta(self, runner, tmp_path, workdir):
        """Test FASTA input."""
        path = tmp_path / "reads.fa"
        path.write_text(">r1\nTC\nGT\n>r2\nACCT\n>r3\nAACA\n")
        result = invoke(runner, "build", "--input", path, "--format", "fasta",
                        "--workdir", workdir, "--text")
        assert result.exit_code == 0, result.output
        assert (workdir / "bwt.txt").read_text().strip() == FIG_BWT

    def test_intermediates_removed(self, runner, fig_input, workdir):
        """Test only outputs and stats remain after a build."""
        invoke(runner, "build", "--input", fig_input, "--workdir", workdir)
        names = sorted(p.name for p in workdir.iterdir())
        assert names == ["bwt.bin", "bwt.meta", "lcp.bin", "lcp.meta", "stats.txt"]

    def test_keep_intermediates(self, runner, fig_input, workdir):
        """Test --keep-intermediates leaves T and B lists."""
        invoke(runner, "build", "--input", fig_input, "--workdir", workdir, "--keep-intermediates")
        assert (workdir / "B_2.bin").exists()
        assert (workdir / "T_0.bin").exists()

    def test_custom_outputs(self, runner, fig_input, tmp_path, workdir):
        """Test --out-bwt and --out-lcp."""
        result = invoke(runner, "build", "--input", fig_input, "--workdir", workdir,
                        "--out-bwt", tmp_path / "x.bwt", "--out-lcp", tmp_path / "x.lcp")
        assert result.exit_code == 0, result.output
        assert (tmp_path / "x.bwt").stat().st_size == 15

    def test_outputs_with_working_prefix_survive(self, runner, fig_input, workdir):
        """Test cleanup keeps outputs and user files whose names start like working lists."""
        workdir.mkdir(parents=True)
        (workdir / "T_reference.bin").write_bytes(b"keep")
        result = invoke(runner, "build", "--input", fig_input, "--workdir", workdir,
                        "--out-bwt", workdir / "B_final.bin", "--out-lcp", workdir / "L_final.bin")
        assert result.exit_code == 0, result.output
        assert (workdir / "B_final.bin").stat().st_size == 15
        assert (workdir / "L_final.bin").exists()
        assert (workdir / "T_reference.bin").read_bytes() == b"keep"
        assert not (workdir / "B_0.bin").exists()

    def test_build_with_verify(self, runner, fig_input, workdir):
        """Test build --verify compares with the reference sort."""
        result = invoke(runner, "build", "--input", fig_input, "--workdir", workdir, "--verify")
        assert result.exit_code == 0, result.output
        assert "match the reference sort" in result.output

    def test_bwt_only(self, runner, fig_input, workdir):
        """Test --bwt-only writes the BWT and no LCP."""
        result = invoke(runner, "build", "--input", fig_input, "--workdir", workdir,
                        "--bwt-only", "--text", "--verify")
        assert result.exit_code == 0, result.output
        assert (workdir / "bwt.txt").read_text().strip() == FIG_BWT
        assert not (workdir / "lcp.bin").exists()

    def test_deterministic(self, runner, fig_input, tmp_path):
        """Test two builds give identical outputs and stats."""
        for name in ("a", "b"):
            invoke(runner, "build", "--input", fig_input, "--workdir", tmp_path / name)
        for output in ("bwt.bin", "lcp.bin", "stats.txt"):
            assert (tmp_path / "a" / output).read_bytes() == (tmp_path / "b" / output).read_bytes()


class TestVerify:
    """Test the verify command."""

    def test_match(self, runner, fig_input, workdir):
        """Test the three-read example verifies."""
        result = invoke(runner, "verify", "--input", fig_input, "--workdir", workdir)
        assert result.exit_code == 0, result.output

    def test_corrupted_partial_bwt(self, runner, fig_input, workdir):
        """Test a damaged B_2 list is reported as a mismatch."""
        invoke(runner, "build", "--input", fig_input, "--workdir", workdir, "--keep-intermediates")
        assert (workdir / "B_2.bin").read_bytes() == bytes([1, 2, 2])
        (workdir / "B_2.bin").write_bytes(bytes([2, 1, 2]))
        result = invoke(runner, "verify", "--input", fig_input, "--workdir", workdir)
        assert result.exit_code == 3
        assert "diverges at position" in result.output or "phase 2 failed" in result.output

    def test_kept_lists_of_other_input(self, runner, fig_input, tmp_path, workdir):
        """Test partial BWTs kept from a different collection of the same shape are not reused."""
        other = tmp_path / "other.txt"
        other.write_text("GGGG\nCCCC\nTTTT\n")
        invoke(runner, "build", "--input", other, "--workdir", workdir, "--keep-intermediates")
        assert (workdir / FINGERPRINT_FILE).exists()
        result = invoke(runner, "verify", "--input", fig_input, "--workdir", workdir)
        assert result.exit_code == 0, result.output
        assert "match the reference sort" in result.output

    def test_guard(self, runner, fig_input, workdir):
        """Test inputs above --max-oracle-size exit 4."""
        result = invoke(runner, "verify", "--input", fig_input, "--workdir", workdir,
                        "--max-oracle-size", 10)
        assert result.exit_code == 4
        assert "--max-oracle-size" in result.output

    def test_random_collections(self, runner, tmp_path):
        """Test random collections verify."""
        rng = random.Random(3)
        for i in range(10):
            letters = rng.choice(["A", "AC", "ACGT"])
            m, k = rng.randint(1, 30), rng.randint(1, 12)
            path = tmp_path / f"r{i}.txt"
            path.write_text("".join("".join(rng.choice(letters) for _ in range(k)) + "\n" for _ in range(m)))
            result = invoke(runner, "verify", "--input", path, "--workdir", tmp_path / f"w{i}")
            assert result.exit_code == 0, result.output


class TestStats:
    """Test the stats command."""

    def test_after_build(self, runner, fig_input, workdir):
        """Test passes, max LCP and per-pass reads are shown."""
        invoke(runner, "build", "--input", fig_input, "--workdir", workdir)
        result = invoke(runner, "stats", "--workdir", workdir)
        assert result.exit_code == 0, result.output
        assert "Merge passes: 3" in result.output
        assert "Max LCP (l): 2" in result.output
        assert "45" in result.output

    def test_single_string(self, runner, tmp_path, workdir):
        """Test m=1, k=1 reports one pass and max LCP 0."""
        path = tmp_path / "a.txt"
        path.write_text("A\n")
        invoke(runner, "build", "--input", path, "--workdir", workdir)
        result = invoke(runner, "stats", "--workdir", workdir)
        assert "Merge passes: 1" in result.output
        assert "Max LCP (l): 0" in result.output

    def test_missing(self, runner, tmp_path):
        """Test a workdir without stats exits 1."""
        result = invoke(runner, "stats", "--workdir", tmp_path)
        assert result.exit_code == 1


class TestHelpers:
    """Test exit-code mapping and cleanup."""

    def test_exit_codes(self):
        """Test each error family maps to its status."""
        assert exit_code_for(AlphabetError("x")) == 1
        assert exit_code_for(ConfigError("x")) == 1
        assert exit_code_for(ListIOError("x")) == 2
        assert exit_code_for(MemoryBudgetError("x")) == 2
        assert exit_code_for(MalformedEncodingError("x")) == 3
        assert exit_code_for(OracleSizeError("x")) == 4

    def test_cleanup(self, tmp_path):
        """Test working files go and outputs stay."""
        names = ("T_0.bin", "B_1.meta", "IB_2.bin", "LB_0.bin", "I_cur.bin", FINGERPRINT_FILE,
                 "bwt.bin", "stats.txt", "T_9.bin", "B_final.bin", "notes.meta")
        for name in names:
            (tmp_path / name).write_text("")
        assert cleanup_intermediates(tmp_path, 4, 4) == 6
        remaining = sorted(p.name for p in tmp_path.iterdir())
        assert remaining == ["B_final.bin", "T_9.bin", "bwt.bin", "notes.meta", "stats.txt"]

    def test_cleanup_keeps_outputs(self, tmp_path):
        """Test an output that reuses a working-list name is not removed."""
        for name in ("B_2.bin", "B_2.meta", "B_3.bin"):
            (tmp_path / name).write_text("")
        assert cleanup_intermediates(tmp_path, 4, 4, keep=[tmp_path / "B_2.bin"]) == 1
        assert sorted(p.name for p in tmp_path.iterdir()) == ["B_2.bin", "B_2.meta"]

    def test_intermediate_names(self):
        """Test the names cover k+1 columns and sigma+1 buckets."""
        names = intermediate_names(2, 1)
        assert {"T_0", "T_2", "B_2", "N_2", "P_1", "PB_0", "IB_1", "LB_1", "I_next", "L_cur"} <= set(names)
        assert "T_3" not in names and "P_2" not in names

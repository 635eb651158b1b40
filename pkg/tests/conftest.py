"""Shared fixtures: the three-read example collection and random collections."""
import io
import random

import pytest

from src.config import RunConfig
from src.ingest import Alphabet, compute_columns, load_collection

# Three reads whose partial BWTs, interleaves and LCP values are worked out by hand
FIG_READS = ["TCGT", "ACCT", "AACA"]
FIG_BWT = "TTAC$A$AATCCGC$"
FIG_LCP = [-1, 0, 0, 0, 1, 1, 2, 0, 1, 1, 1, 0, 0, 1, 1]
FIG_I = [0, 0, 0, 1, 4, 3, 4, 2, 3, 3, 2, 2, 1, 1, 4]

ALPHABETS = {1: "A", 2: "AC", 4: "ACGT"}


def make_collection(strings, letters="ACGT", input_format="lines"):
    data = "".join(f"{s}\n" for s in strings).encode()
    return load_collection(io.BytesIO(data), input_format, Alphabet.from_string(letters))


def random_strings(rng: random.Random, m: int, k: int, letters: str):
    return ["".join(rng.choice(letters) for _ in range(k)) for _ in range(m)]


@pytest.fixture
def run_config(tmp_path):
    """Small buffers so multi-buffer code paths run on tiny inputs."""
    return RunConfig(workdir=tmp_path / "work", buffer_bytes=64)


@pytest.fixture
def fig_collection():
    return make_collection(FIG_READS)


@pytest.fixture
def fig_columns(fig_collection, run_config):
    return compute_columns(fig_collection, run_config.workdir, run_config)


@pytest.fixture
def fig_input(tmp_path):
    path = tmp_path / "reads.txt"
    path.write_text("".join(f"{s}\n" for s in FIG_READS))
    return path

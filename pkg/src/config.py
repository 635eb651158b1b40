"""Configuration for bwt-lcp."""
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from src.errors import ConfigError

# Load environment variables
load_dotenv()


def _env_flag(name: str, default: str = "0") -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


def _env_width(name: str) -> Optional[int]:
    raw = os.getenv(name, "auto").strip().lower()
    return None if raw in ("", "auto") else int(raw)


# Work directory for T/B/N/bucket/I/L lists
WORKDIR = Path(os.getenv("BWTLCP_WORKDIR", "./work")).expanduser()

# Alphabet without the sentinel; '$' is always code 0
DEFAULT_ALPHABET = os.getenv("BWTLCP_ALPHABET", "ACGT")

# I/O buffer per open list
BUFFER_BYTES = int(os.getenv("BWTLCP_BUFFER_BYTES", str(1 << 20)))

# Width of string-index lists (N_l); None picks 4, or 8 for m >= 2^32
INT_WIDTH = _env_width("BWTLCP_INT_WIDTH")

# Oracle guard, counted in suffixes m(k+1)
MAX_ORACLE_SIZE = int(os.getenv("BWTLCP_MAX_ORACLE_SIZE", "100000"))

# Resident budget m + MEMORY_BUDGET_FACTOR * (k + sigma + 1)
ENFORCE_MEMORY_BUDGET = _env_flag("BWTLCP_ENFORCE_MEMORY_BUDGET")
MEMORY_BUDGET_FACTOR = 4

LOG_LEVEL = os.getenv("BWTLCP_LOG_LEVEL", "INFO").upper()

# Input formats
INPUT_FORMATS = ("lines", "fasta")
ELEMENT_WIDTHS = (1, 4, 8)


@dataclass
class RunConfig:
    """Settings for one build / verify run."""
    workdir: Path = WORKDIR
    input_path: Optional[Path] = None
    input_format: str = "lines"
    alphabet: str = DEFAULT_ALPHABET
    out_bwt: Optional[Path] = None
    out_lcp: Optional[Path] = None
    text_output: bool = False
    int_width: Optional[int] = INT_WIDTH
    buffer_bytes: int = BUFFER_BYTES
    keep_intermediates: bool = False
    verify: bool = False
    bwt_only: bool = False
    max_oracle_size: int = MAX_ORACLE_SIZE
    enforce_memory_budget: bool = ENFORCE_MEMORY_BUDGET

    def __post_init__(self):
        self.workdir = Path(self.workdir)
        if self.input_path is not None:
            self.input_path = Path(self.input_path)
            if self.input_path.resolve() == self.workdir.resolve():
                raise ConfigError(f"Workdir must differ from input: {self.workdir}")
        if self.input_format not in INPUT_FORMATS:
            raise ConfigError(f"Unknown input format: {self.input_format}")
        if self.int_width is not None and self.int_width not in ELEMENT_WIDTHS:
            raise ConfigError(f"Integer width must be one of {ELEMENT_WIDTHS}, got {self.int_width}")
        if self.buffer_bytes < 8:
            raise ConfigError(f"Buffer too small: {self.buffer_bytes} bytes")
        if self.max_oracle_size < 1:
            raise ConfigError(f"Oracle guard must be positive: {self.max_oracle_size}")

    @property
    def bwt_path(self) -> Path:
        return self.out_bwt if self.out_bwt is not None else self.workdir / "bwt.bin"

    @property
    def lcp_path(self) -> Path:
        return self.out_lcp if self.out_lcp is not None else self.workdir / "lcp.bin"

    def memory_limit(self, m: int, k: int, sigma: int) -> Optional[int]:
        """Resident element budget, or None when enforcement is off."""
        if not self.enforce_memory_budget:
            return None
        return m + MEMORY_BUDGET_FACTOR * (k + sigma + 1)

"""Build statistics: pass count, max LCP, element and byte volumes.

Persisted as `stats.txt`, one `key=value` per line, so repeated builds of
the same input can be compared byte for byte.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from src.extlist import PassStats

STATS_FILE = "stats.txt"


def _roles_to_text(roles: Dict[str, int]) -> str:
    return ",".join(f"{role}:{count}" for role, count in sorted(roles.items()))


def _roles_from_text(text: str) -> Dict[str, int]:
    if not text:
        return {}
    return {role: int(count) for role, count in (item.split(":", 1) for item in text.split(","))}


def _pass_lines(prefix: str, stats: PassStats) -> List[str]:
    lines = [
        f"{prefix}_elements_read={stats.elements_read}",
        f"{prefix}_elements_written={stats.elements_written}",
        f"{prefix}_bytes_read={stats.bytes_read}",
        f"{prefix}_bytes_written={stats.bytes_written}",
        f"{prefix}_reads={_roles_to_text(stats.reads_by_role)}",
        f"{prefix}_writes={_roles_to_text(stats.writes_by_role)}",
    ]
    if stats.max_lcp is not None:
        lines.append(f"{prefix}_max_lcp={stats.max_lcp}")
    return lines


def _pass_from(values: Dict[str, str], prefix: str, index: int) -> PassStats:
    max_lcp = values.get(f"{prefix}_max_lcp")
    return PassStats(
        index=index,
        elements_read=int(values[f"{prefix}_elements_read"]),
        elements_written=int(values[f"{prefix}_elements_written"]),
        bytes_read=int(values[f"{prefix}_bytes_read"]),
        bytes_written=int(values[f"{prefix}_bytes_written"]),
        reads_by_role=_roles_from_text(values.get(f"{prefix}_reads", "")),
        writes_by_role=_roles_from_text(values.get(f"{prefix}_writes", "")),
        max_lcp=None if max_lcp is None else int(max_lcp),
    )


@dataclass
class BuildStats:
    """Measured counterparts of the complexity claims for one build."""
    m: int
    k: int
    sigma: int
    phase1: List[PassStats] = field(default_factory=list)
    passes: List[PassStats] = field(default_factory=list)
    output: Optional[PassStats] = None
    peak_resident_elements: int = 0
    lcp_computed: bool = True

    @property
    def pass_count(self) -> int:
        return len(self.passes)

    @property
    def max_lcp(self) -> Optional[int]:
        """l, the largest final LCP value (None for BWT-only builds)."""
        if not self.lcp_computed or not self.passes:
            return None
        return self.passes[-1].max_lcp

    def _all(self) -> List[PassStats]:
        return self.phase1 + self.passes + ([self.output] if self.output else [])

    @property
    def bytes_read(self) -> int:
        return sum(s.bytes_read for s in self._all())

    @property
    def bytes_written(self) -> int:
        return sum(s.bytes_written for s in self._all())

    @property
    def merge_bytes(self) -> int:
        return sum(s.bytes_read + s.bytes_written for s in self.passes)

    def to_text(self) -> str:
        lines = [
            f"m={self.m}",
            f"k={self.k}",
            f"sigma={self.sigma}",
            f"lcp_computed={int(self.lcp_computed)}",
            f"passes={self.pass_count}",
        ]
        if self.max_lcp is not None:
            lines.append(f"max_lcp={self.max_lcp}")
        lines += [
            f"bytes_read={self.bytes_read}",
            f"bytes_written={self.bytes_written}",
            f"peak_resident_elements={self.peak_resident_elements}",
            f"phase1_iterations={len(self.phase1)}",
        ]
        for stats in self.phase1:
            lines += _pass_lines(f"phase1_{stats.index}", stats)
        for stats in self.passes:
            lines += _pass_lines(f"pass_{stats.index}", stats)
        if self.output is not None:
            lines += _pass_lines("output", self.output)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BuildStats":
        values = dict(line.split("=", 1) for line in text.splitlines() if "=" in line)
        stats = cls(
            m=int(values["m"]),
            k=int(values["k"]),
            sigma=int(values["sigma"]),
            peak_resident_elements=int(values["peak_resident_elements"]),
            lcp_computed=values.get("lcp_computed", "1") == "1",
        )
        stats.phase1 = [_pass_from(values, f"phase1_{i}", i) for i in range(int(values["phase1_iterations"]))]
        stats.passes = [_pass_from(values, f"pass_{i}", i) for i in range(1, int(values["passes"]) + 1)]
        if "output_elements_read" in values:
            stats.output = _pass_from(values, "output", 0)
        return stats

    def save(self, workdir: Path) -> Path:
        path = Path(workdir) / STATS_FILE
        path.write_text(self.to_text())
        return path

    @classmethod
    def load(cls, workdir: Path) -> "BuildStats":
        return cls.from_text((Path(workdir) / STATS_FILE).read_text())

    def pass_table(self) -> pd.DataFrame:
        """Per-pass volumes as a table, one row per merge pass."""
        return pd.DataFrame(
            [
                {
                    "pass": s.index,
                    "max_lcp": s.max_lcp,
                    "elements_read": s.elements_read,
                    "elements_written": s.elements_written,
                    "bytes_read": s.bytes_read,
                    "bytes_written": s.bytes_written,
                }
                for s in self.passes
            ],
            columns=["pass", "max_lcp", "elements_read", "elements_written", "bytes_read", "bytes_written"],
        )

"""Symbol alphabet: characters to integer codes, sentinel first."""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

from src.errors import AlphabetError

SENTINEL = "$"
SENTINEL_CODE = 0
MAX_SIGMA = 255


@dataclass(frozen=True)
class Alphabet:
    """Ordered alphabet c_0 < c_1 < ... < c_sigma with c_0 = '$'."""
    characters: Tuple[str, ...]
    code_of: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        chars = self.characters
        if not chars or chars[0] != SENTINEL:
            raise AlphabetError(f"Alphabet must start with the sentinel '{SENTINEL}'")
        if len(chars) < 2:
            raise AlphabetError("Alphabet needs at least one symbol besides the sentinel")
        if len(chars) - 1 > MAX_SIGMA:
            raise AlphabetError(f"Alphabet has {len(chars) - 1} symbols, at most {MAX_SIGMA} supported")
        if SENTINEL in chars[1:]:
            raise AlphabetError(f"Sentinel '{SENTINEL}' cannot be an alphabet symbol")
        if len(set(chars)) != len(chars):
            raise AlphabetError(f"Duplicate characters in alphabet: {''.join(chars[1:])}")
        if any(len(c) != 1 for c in chars):
            raise AlphabetError("Alphabet characters must be single characters")
        object.__setattr__(self, "code_of", {c: code for code, c in enumerate(chars)})

    @classmethod
    def from_string(cls, letters: str) -> "Alphabet":
        """Build from the non-sentinel letters in their lexicographic order, e.g. 'ACGT'."""
        return cls((SENTINEL,) + tuple(letters))

    @property
    def sigma(self) -> int:
        return len(self.characters) - 1

    def encode(self, text: str, record: Optional[str] = None) -> bytes:
        """Map a string to symbol codes; lowercase falls back to uppercase.

        Raises:
            AlphabetError: On the sentinel or any character outside the alphabet
        """
        codes = bytearray(len(text))
        for i, ch in enumerate(text):
            code = self.code_of.get(ch)
            if code is None:
                code = self.code_of.get(ch.upper())
            if code is None or code == SENTINEL_CODE:
                where = f" in {record}" if record else ""
                raise AlphabetError(f"Character {ch!r} at position {i + 1}{where} is not in alphabet {self.letters}")
            codes[i] = code
        return bytes(codes)

    def decode(self, codes: Iterable[int]) -> str:
        return "".join(self.characters[c] for c in codes)

    @property
    def letters(self) -> str:
        return "".join(self.characters[1:])

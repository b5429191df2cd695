"""Binary patterns, pattern sets and Hamming distance.

Bit strings are written in display order: the leftmost character is the
highest qubit, so ``"0110"`` is the basis index ``6`` (qubit 0 is the
rightmost character).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InputError


def parse_bits(text: str) -> int:
    """Return the little-endian basis index of a display-order bit string."""
    text = text.strip()
    if not text or any(c not in "01" for c in text):
        raise InputError(f"not a bit string: {text!r}")
    return int(text, 2)


def format_bits(value: int, width: int) -> str:
    if value < 0 or value >= 1 << width:
        raise InputError(f"value {value} does not fit in {width} bits")
    return format(value, f"0{width}b") if width else ""


def hamming(a: int | str, b: int | str) -> int:
    """Number of differing bit positions between two patterns.

    Strings must have equal length; integers are compared as bit vectors.
    """
    if isinstance(a, str) or isinstance(b, str):
        if not (isinstance(a, str) and isinstance(b, str)):
            raise InputError("cannot compare a bit string with an integer")
        if len(a) != len(b):
            raise InputError(f"dimension mismatch: {len(a)} vs {len(b)}")
        a, b = parse_bits(a), parse_bits(b)
    return (a ^ b).bit_count()


@dataclass(frozen=True)
class PatternSet:
    """An ordered collection of ``k`` distinct ``m``-bit patterns."""

    m: int
    patterns: tuple[int, ...]

    def __post_init__(self):
        if self.m < 1:
            raise InputError("pattern dimension must be at least 1")
        if not self.patterns:
            raise InputError("pattern set is empty")
        for p in self.patterns:
            if not 0 <= p < 1 << self.m:
                raise InputError(f"pattern {p} does not fit in {self.m} bits")
        if len(set(self.patterns)) != len(self.patterns):
            raise InputError("patterns must be distinct")

    @classmethod
    def from_strings(cls, strings: Iterable[str]) -> PatternSet:
        strings = [s.strip() for s in strings]
        if not strings:
            raise InputError("pattern set is empty")
        widths = {len(s) for s in strings}
        if len(widths) != 1:
            raise InputError(f"patterns have mixed lengths {sorted(widths)}")
        return cls(widths.pop(), tuple(parse_bits(s) for s in strings))

    @property
    def k(self) -> int:
        return len(self.patterns)

    @property
    def n(self) -> int:
        return 1 << self.m

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)

    def __contains__(self, value: object) -> bool:
        return value in self.patterns

    def strings(self) -> list[str]:
        return [format_bits(p, self.m) for p in self.patterns]

    def index_of(self, value: int) -> int:
        return self.patterns.index(value)


def read_pattern_file(path: str | Path) -> PatternSet:
    """Parse a pattern file: one bit string per line, ``#`` comments, blanks skipped."""
    lines = Path(path).read_text().splitlines()
    return parse_pattern_lines(lines)


def parse_pattern_lines(lines: Sequence[str]) -> PatternSet:
    strings = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if any(c not in "01" for c in line):
            raise InputError(f"line {lineno}: not a bit string: {line!r}")
        strings.append(line)
    if not strings:
        raise InputError("no patterns found")
    return PatternSet.from_strings(strings)

"""Finite binary words with lexicographic order, the 2^-k metric, shift, and coding map.

Words stand in for truncated elements of the full binary shift space.  All
operations are pure and words are immutable, so everything here is safe to
share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple


class WordOrder(Enum):
    """Three-way outcome of a truncated lexicographic comparison.

    EQUAL_PREFIX means the two words agree on every index up to the shorter
    length; with finite truncations that is all we can certify, so it is kept
    distinct from genuine equality.
    """

    LESS = -1
    EQUAL_PREFIX = 0
    GREATER = 1


@dataclass(frozen=True)
class SymbolWord:
    """Immutable finite string over {0, 1}, stored as raw bytes of 0/1 values."""

    symbols: bytes

    def __post_init__(self) -> None:
        if any(b not in (0, 1) for b in self.symbols):
            raise ValueError("symbols must all be 0 or 1")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "SymbolWord":
        return cls(bytes(bits))

    @classmethod
    def from_string(cls, text: str) -> "SymbolWord":
        """Parse an ASCII '0'/'1' string, the serialization used in CLI output."""
        try:
            return cls(bytes(int(c) for c in text))
        except ValueError:
            raise ValueError(f"not a binary word: {text!r}") from None

    @classmethod
    def zeros(cls, n: int) -> "SymbolWord":
        return cls(bytes(n))

    @classmethod
    def ones(cls, n: int) -> "SymbolWord":
        return cls(b"\x01" * n)

    def to_string(self) -> str:
        return "".join(str(b) for b in self.symbols)

    def __str__(self) -> str:
        return self.to_string()

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return SymbolWord(self.symbols[i])
        return self.symbols[i]

    def __iter__(self):
        return iter(self.symbols)

    def shift(self) -> "SymbolWord":
        """Drop the leading symbol (the shift map on truncations)."""
        if not self.symbols:
            raise ValueError("cannot shift the empty word")
        return SymbolWord(self.symbols[1:])

    def prefix_int(self, m: int) -> int:
        """First m symbols read as a binary number (lex order = numeric order)."""
        v = 0
        for b in self.symbols[:m]:
            v = (v << 1) | b
        return v


def lex_compare(u: SymbolWord, v: SymbolWord) -> WordOrder:
    """Lexicographic comparison of truncated words.

    Returns LESS/GREATER on the first differing index within both lengths,
    EQUAL_PREFIX when no differing index exists within min(len(u), len(v)).
    """
    m = min(len(u), len(v))
    a, b = u.symbols[:m], v.symbols[:m]
    if a == b:
        return WordOrder.EQUAL_PREFIX
    return WordOrder.LESS if a < b else WordOrder.GREATER


def metric_d(u: SymbolWord, v: SymbolWord) -> float:
    """Ultrametric 2^-k where k is the first differing index (0-based); 0 if equal.

    Index 0 is included so that distinct words always get positive distance.
    """
    if len(u) != len(v):
        raise ValueError(f"metric_d needs equal lengths, got {len(u)} and {len(v)}")
    if u.symbols == v.symbols:
        return 0.0
    for k, (a, b) in enumerate(zip(u.symbols, v.symbols)):
        if a != b:
            return 2.0 ** (-k)
    raise AssertionError("unreachable")


def shift(u: SymbolWord) -> SymbolWord:
    return u.shift()


class CodingValue(NamedTuple):
    """Truncated coding-map value together with its geometric tail bound."""

    value: float
    tail_bound: float


def coding_map(a: float, u: SymbolWord) -> CodingValue:
    """Partial sum (1 - 1/a) * sum_k u_k a^-k for a in (1, 2).

    The omitted tail of the infinite series is at most a^-(len(u)-1), which is
    returned alongside the value.
    """
    if not 1.0 < a < 2.0:
        raise ValueError(f"coding map needs a in (1, 2), got {a}")
    s = 0.0
    for b in reversed(u.symbols):
        s = b + s / a
    n = len(u)
    tail = a ** (-(n - 1)) if n >= 1 else 1.0
    return CodingValue((1.0 - 1.0 / a) * s, tail)


def word_entropy_scale(count: int, n: int) -> float:
    """(1/n) ln(count); shared by the word-count entropy estimators."""
    if n <= 0 or count <= 0:
        raise ValueError("need positive count and length")
    return math.log(count) / n

"""Words over a finite alphabet, with an optional vacuum sentinel.

A word over alphabet size ``d`` holds symbols from ``{0, ..., d-1}``.  The
extra value ``d`` is reserved as the vacuum sentinel (a lost or undetected
signal), so vacuum-aware words are effectively words over a ``d+1``-letter
alphabet whose last character is "no detection".

Distances are returned as exact :class:`fractions.Fraction` values so that
threshold comparisons against sampling tolerances never suffer round-off;
raw mismatch counts are exposed separately for combinatorial work.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def vacuum_symbol(d: int) -> int:
    """Sentinel value used for a vacuum in words over alphabet size ``d``."""
    return d


@dataclass(frozen=True)
class Word:
    """Immutable symbol string over ``{0..d-1}`` plus the vacuum sentinel ``d``."""

    symbols: tuple[int, ...]
    d: int

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError(f"alphabet size must be >= 2, got {self.d}")
        if not isinstance(self.symbols, tuple):
            object.__setattr__(self, "symbols", tuple(self.symbols))
        for s in self.symbols:
            if not isinstance(s, int) or not 0 <= s <= self.d:
                raise ValueError(
                    f"symbol {s!r} outside alphabet 0..{self.d - 1} (+{self.d} for vacuum)"
                )

    @classmethod
    def parse(cls, text: str, d: int) -> "Word":
        """Build a word from a digit string; the character 'v' marks a vacuum."""
        syms = tuple(d if c == "v" else int(c) for c in text)
        return cls(syms, d)

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def has_vacuum(self) -> bool:
        return any(s == self.d for s in self.symbols)

    def take(self, indices: Iterable[int]) -> "Word":
        """Subword at the given 0-based positions, in sorted order."""
        idx = sorted(set(indices))
        if idx and not 0 <= idx[0] <= idx[-1] < len(self.symbols):
            raise ValueError(f"indices {idx} out of range for word of length {len(self)}")
        return Word(tuple(self.symbols[i] for i in idx), self.d)

    def drop(self, indices: Iterable[int]) -> "Word":
        """Subword on the complement of the given 0-based positions."""
        idx = set(indices)
        for i in idx:
            if not 0 <= i < len(self.symbols):
                raise ValueError(f"index {i} out of range for word of length {len(self)}")
        return Word(tuple(s for i, s in enumerate(self.symbols) if i not in idx), self.d)


def _check_pair(x: Word, y: Word) -> None:
    if len(x) == 0:
        raise ValueError("empty word")
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if x.d != y.d:
        raise ValueError(f"alphabet mismatch: {x.d} vs {y.d}")


def relative_hamming_weight(q: Word) -> Fraction:
    """Fraction of nonzero symbols of ``q``; vacuum symbols are rejected."""
    if len(q) == 0:
        raise ValueError("empty word")
    if q.has_vacuum:
        raise ValueError("relative weight is undefined for words containing a vacuum")
    return Fraction(sum(1 for s in q.symbols if s != 0), len(q))


def hamming_distance_count(x: Word, y: Word) -> int:
    """Number of positions where the vacuum-free words ``x`` and ``y`` differ."""
    _check_pair(x, y)
    if x.has_vacuum or y.has_vacuum:
        raise ValueError("words contain a vacuum; use loss_aware_distance")
    return sum(1 for a, b in zip(x.symbols, y.symbols) if a != b)


def hamming_distance(x: Word, y: Word) -> Fraction:
    """Normalized Hamming distance between vacuum-free words of equal length."""
    return Fraction(hamming_distance_count(x, y), len(x))


def loss_aware_distance_count(x: Word, y: Word) -> int:
    """Mismatch count where a vacuum on either side always counts as an error."""
    _check_pair(x, y)
    vac_x, vac_y = x.d, y.d
    return sum(
        1
        for a, b in zip(x.symbols, y.symbols)
        if a != b or a == vac_x or b == vac_y
    )


def loss_aware_distance(x: Word, y: Word) -> Fraction:
    """Normalized distance treating any vacuum symbol as an error."""
    return Fraction(loss_aware_distance_count(x, y), len(x))

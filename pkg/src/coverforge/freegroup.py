"""Reduced words in a free group.

A letter is a nonzero integer: ``g`` stands for the generator ``x_g`` and
``-g`` for its inverse.  Generators are numbered from 1.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for a in letters:
        if a == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def invert_letters(letters: Sequence[int]) -> tuple[int, ...]:
    return tuple(-a for a in reversed(letters))


class FreeWord:
    """An element of a free group, kept freely reduced."""

    __slots__ = ("_letters", "_hash")

    def __init__(self, letters: Iterable[int] = ()):
        self._letters = reduce_letters(letters)
        self._hash = hash(self._letters)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "FreeWord":
        """Build from ``(generator, exponent)`` pairs; exponents may be any integer."""
        letters: list[int] = []
        for g, e in pairs:
            if g < 1:
                raise ValueError(f"generator index must be positive, got {g}")
            letters.extend([g if e > 0 else -g] * abs(e))
        return cls(letters)

    @classmethod
    def gen(cls, g: int) -> "FreeWord":
        return cls((g,))

    @property
    def letters(self) -> tuple[int, ...]:
        return self._letters

    def pairs(self) -> list[tuple[int, int]]:
        """Letters as ``(generator, +-1)`` pairs."""
        return [(abs(a), 1 if a > 0 else -1) for a in self._letters]

    def generators(self) -> set[int]:
        return {abs(a) for a in self._letters}

    def inverse(self) -> "FreeWord":
        return FreeWord(invert_letters(self._letters))

    def conjugate(self, by: "FreeWord") -> "FreeWord":
        """``by * self * by^-1``."""
        return by * self * by.inverse()

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self._letters + other._letters)

    def __pow__(self, k: int) -> "FreeWord":
        base = self if k >= 0 else self.inverse()
        return FreeWord(base._letters * abs(k))

    def substitute(self, images: Sequence["FreeWord"]) -> "FreeWord":
        """Apply the endomorphism sending ``x_g`` to ``images[g-1]``."""
        out: list[int] = []
        for a in self._letters:
            img = images[abs(a) - 1]._letters
            out.extend(img if a > 0 else invert_letters(img))
        return FreeWord(out)

    def __len__(self) -> int:
        return len(self._letters)

    def __iter__(self):
        return iter(self._letters)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FreeWord) and self._letters == other._letters

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FreeWord({list(self._letters)})"

    def __str__(self) -> str:
        if not self._letters:
            return "1"
        return " ".join(f"x{a}" if a > 0 else f"x{-a}^-1" for a in self._letters)


def hurwitz_step(u: FreeWord, v: FreeWord, sign: int = 1) -> tuple[FreeWord, FreeWord]:
    """One positive (or negative) half-twist on an adjacent pair of loops.

    Positive: ``(u, v) -> (u v u^-1, u)``; negative is its inverse
    ``(u, v) -> (v, v^-1 u v)``.
    """
    if sign > 0:
        return u * v * u.inverse(), u
    return v, v.inverse() * u * v


def split_conjugate(word: FreeWord, gen: int) -> FreeWord | None:
    """If ``word == c x_gen c^-1`` return the shortest such ``c``, else None."""
    letters = word.letters
    n = len(letters)
    if n % 2 == 0:
        return None
    mid = n // 2
    if abs(letters[mid]) != gen or letters[mid] < 0:
        return None
    c = letters[:mid]
    if letters[mid + 1:] != invert_letters(c):
        return None
    return FreeWord(c)

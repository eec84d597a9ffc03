"""Permutations of a finite sheet set.

Sheets are stored 0-based.  Cycle notation in and out is 1-based, matching
the way coverings are written by hand: ``"(1 2)(3 4)"``.

Products compose left to right: ``(p * q)(s) == q(p(s))``.  This is the
order in which loops are traversed, so the monodromy of a word is the
product of its letters' permutations in reading order.
"""

from __future__ import annotations

import re
from collections import Counter
from typing import Iterable, Sequence


class Permutation:
    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        self.images = tuple(images)
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("images do not form a bijection of 0..n-1")
        self._hash = hash(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]], one_based: bool = True) -> "Permutation":
        images = list(range(degree))
        shift = 1 if one_based else 0
        for cyc in cycles:
            cyc = [c - shift for c in cyc]
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a] = b
        return cls(images)

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> "Permutation":
        cycles = [[int(t) for t in grp.split()] for grp in re.findall(r"\(([^)]*)\)", text)]
        if degree is None:
            degree = max((max(c) for c in cycles if c), default=0)
        return cls.from_cycles(degree, [c for c in cycles if c])

    @classmethod
    def transposition(cls, degree: int, a: int, b: int) -> "Permutation":
        """0-based transposition of ``a`` and ``b``."""
        images = list(range(degree))
        images[a], images[b] = b, a
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, s: int) -> int:
        return self.images[s]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        o = other.images
        return Permutation(o[a] for a in self.images)

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, a in enumerate(self.images):
            inv[a] = i
        return Permutation(inv)

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        out = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            out = out * base
        return out

    def conjugate_by(self, s: "Permutation") -> "Permutation":
        """Relabel sheets through ``s``: the result maps ``s(a)`` to ``s(self(a))``."""
        images = [0] * self.degree
        for a, b in enumerate(self.images):
            images[s.images[a]] = s.images[b]
        return Permutation(images)

    def is_identity(self) -> bool:
        return all(i == a for i, a in enumerate(self.images))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        """0-based cycles, each starting at its least element, sorted."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            nxt = self.images[start]
            while nxt != start:
                cyc.append(nxt)
                seen[nxt] = True
                nxt = self.images[nxt]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> dict[int, int]:
        """Map cycle length -> count, fixed points included under length 1."""
        return dict(sorted(Counter(len(c) for c in self.cycles(include_fixed=True)).items()))

    def support(self) -> list[int]:
        return [i for i, a in enumerate(self.images) if a != i]

    def order(self) -> int:
        from math import lcm

        return lcm(*(len(c) for c in self.cycles(include_fixed=True))) if self.degree else 1

    def is_involution(self) -> bool:
        return all(self.images[a] == i for i, a in enumerate(self.images))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Permutation({self})"

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(a + 1) for a in c) + ")" for c in cyc)

    def to_json(self) -> dict:
        return {"degree": self.degree, "images": [a + 1 for a in self.images], "cycles": str(self)}

    @classmethod
    def from_json(cls, data: dict) -> "Permutation":
        return cls(a - 1 for a in data["images"])

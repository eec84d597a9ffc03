"""Monodromy representations ``F_n -> S_d`` and the graphs that encode them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .freegroup import FreeWord
from .graph import Edge, EdgeColoredGraph, validate
from .permutation import Permutation


@dataclass(frozen=True)
class MonodromyRep:
    """Images of the standard loops ``x_1..x_n`` as permutations of the sheets."""

    gens: tuple[Permutation, ...]

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        if len({g.degree for g in self.gens}) > 1:
            raise ValueError("generator images have different degrees")

    @property
    def n(self) -> int:
        return len(self.gens)

    @property
    def degree(self) -> int:
        return self.gens[0].degree if self.gens else 0

    @cached_property
    def inverses(self) -> tuple[Permutation, ...]:
        return tuple(g.inverse() for g in self.gens)

    def image(self, letter: int) -> Permutation:
        return self.gens[letter - 1] if letter > 0 else self.inverses[-letter - 1]

    @cached_property
    def _arrays(self) -> dict[int, np.ndarray]:
        out = {}
        for g, (p, q) in enumerate(zip(self.gens, self.inverses), 1):
            out[g] = np.array(p.images, dtype=np.int64)
            out[-g] = np.array(q.images, dtype=np.int64)
        return out

    @cached_property
    def orbit_min(self) -> tuple[tuple[int, ...], ...]:
        """``orbit_min[i - 1][s]``: least sheet in the ``x_i``-orbit of ``s``."""
        out = []
        for g in self.gens:
            low = list(range(self.degree))
            for cyc in g.cycles():
                m = min(cyc)
                for s in cyc:
                    low[s] = m
            out.append(tuple(low))
        return tuple(out)

    def is_transitive(self) -> bool:
        if self.degree == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            s = stack.pop()
            for g in self.gens:
                t = g(s)
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return len(seen) == self.degree

    def to_json(self) -> dict:
        return {"n": self.n, "degree": self.degree, "gens": [g.to_json() for g in self.gens]}

    @classmethod
    def from_json(cls, data: dict) -> "MonodromyRep":
        return cls(tuple(Permutation.from_json(g) for g in data["gens"]))


def rep_from_graph(graph: EdgeColoredGraph, n: int | None = None) -> MonodromyRep:
    """``x_i`` swaps the ends of every ``i``-colored edge.

    Sheet ``k`` is the ``k``-th entry of ``graph.vertices``.
    """
    n = graph.num_colors() if n is None else n
    problems = validate(graph)
    if problems:
        raise ValueError(f"graph is not properly colored: {problems[0]}")
    index = {v: k for k, v in enumerate(graph.vertices)}
    images = [list(range(len(index))) for _ in range(n)]
    for e in graph.plain_edges:
        if not 1 <= e.color <= n:
            raise ValueError(f"color {e.color} outside 1..{n}")
        a, b = index[e.u], index[e.v]
        images[e.color - 1][a], images[e.color - 1][b] = b, a
    return MonodromyRep(tuple(Permutation(im) for im in images))


def graph_from_permutations(perms: Sequence[Permutation], colors: Sequence[int] | None = None, tag: str | None = None) -> EdgeColoredGraph:
    """Encode permutations as colored edges.

    Each 2-cycle contributes an undirected edge, each longer cycle one directed
    edge ``a -> p(a)`` per point.  Vertices are the sheets ``0..d-1``.
    """
    if not perms:
        return EdgeColoredGraph((), ())
    colors = list(colors) if colors is not None else list(range(1, len(perms) + 1))
    degree = perms[0].degree
    edges = []
    for c, p in zip(colors, perms):
        for cyc in p.cycles():
            if len(cyc) == 2:
                edges.append(Edge(cyc[0], cyc[1], c, False, tag))
            else:
                edges += [Edge(a, p(a), c, True, tag) for a in cyc]
    return EdgeColoredGraph(tuple(range(degree)), tuple(edges), max(colors, default=0))


def graph_from_rep(rep: MonodromyRep) -> EdgeColoredGraph:
    return graph_from_permutations(rep.gens)


def walk(rep: MonodromyRep, start: int, word: FreeWord | Sequence[int]) -> int:
    """Follow the lift of ``word`` from sheet ``start``; a letter with no edge at the
    current sheet leaves it in place."""
    s = start
    for a in word:
        s = rep.image(a).images[s]
    return s


def evaluate_word(rep: MonodromyRep, word: FreeWord | Sequence[int]) -> Permutation:
    """Monodromy of ``word``; letters act in reading order."""
    arrays = rep._arrays
    images = np.arange(rep.degree)
    for a in word:
        images = arrays[a][images]
    return Permutation(images.tolist())

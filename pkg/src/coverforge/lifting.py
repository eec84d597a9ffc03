"""Which powers of a half-arc-twist lift through a branched covering, and to what.

An arc between punctures ``p`` and ``q`` is described by the two loops that
run out along it and circle its ends: ``u_p = c_p x_p c_p^-1`` and
``u_q = c_q x_q c_q^-1``.  Together with the arc they bound a disk holding
nothing else, so the twist moves only these two loops.  A power ``k`` lifts
with the fiber over the basepoint fixed exactly when the monodromy of both
twisted loops is unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable

from .freegroup import FreeWord, hurwitz_step
from .graph import EdgeColoredGraph
from .monodromy import MonodromyRep, evaluate_word, walk
from .permutation import Permutation

K_CAP = 24

Point = tuple[int, int]
"""A preimage of a puncture: ``(puncture, least sheet of its orbit)``."""


@dataclass(frozen=True)
class ArcSpec:
    p: int
    q: int
    left_conj: FreeWord = field(default_factory=FreeWord)
    right_conj: FreeWord = field(default_factory=FreeWord)
    name: str = ""

    def __post_init__(self):
        if self.p == self.q:
            raise ValueError("an arc needs two distinct punctures")
        if min(self.p, self.q) < 1:
            raise ValueError("punctures are numbered from 1")

    @classmethod
    def standard(cls, i: int) -> "ArcSpec":
        """The straight arc between neighbouring punctures ``i`` and ``i+1``."""
        return cls(i, i + 1, name=f"alpha_{i}")

    @classmethod
    def conjugated(cls, p: int, q: int, conjugator: FreeWord, name: str = "") -> "ArcSpec":
        """Both loops conjugated by the same word."""
        return cls(p, q, conjugator, conjugator, name)

    @property
    def left_loop(self) -> FreeWord:
        return FreeWord.gen(self.p).conjugate(self.left_conj)

    @property
    def right_loop(self) -> FreeWord:
        return FreeWord.gen(self.q).conjugate(self.right_conj)

    @property
    def label(self) -> str:
        return self.name or f"arc({self.p},{self.q})"

    def to_json(self) -> dict:
        return {
            "name": self.label,
            "p": self.p,
            "q": self.q,
            "left_conj": list(self.left_conj.letters),
            "right_conj": list(self.right_conj.letters),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ArcSpec":
        return cls(data["p"], data["q"], FreeWord(data["left_conj"]), FreeWord(data["right_conj"]), data.get("name", ""))


@dataclass(frozen=True)
class TwistLetter:
    """One factor ``tau_arc^exponent``; ``arc`` is an ArcSpec downstairs or a
    pair of endpoint Points upstairs."""

    arc: ArcSpec | tuple
    exponent: int
    degree: int = 1
    note: str = ""

    def __post_init__(self):
        if self.exponent == 0:
            raise ValueError("twist exponents are nonzero")

    @property
    def label(self) -> str:
        if isinstance(self.arc, ArcSpec):
            return self.arc.label
        return "arc" + str(tuple(self.arc))

    def to_json(self) -> dict:
        arc = self.arc.to_json() if isinstance(self.arc, ArcSpec) else [list(pt) for pt in self.arc]
        out = {"arc": arc, "exponent": self.exponent, "degree": self.degree}
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class TwistWord:
    letters: tuple[TwistLetter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        return TwistWord(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"{t.label}^{t.exponent}" for t in self.letters)

    def to_json(self) -> list:
        return [t.to_json() for t in self.letters]


def braid_action(arc: ArcSpec, k: int) -> dict[int, FreeWord]:
    """Images of the arc's two loops under ``tau_arc^k``, keyed by puncture.

    Every other loop of the adapted generating set is fixed.  For a standard
    arc this is the usual braid substitution on ``x_p`` and ``x_q``.
    """
    u, v = arc.left_loop, arc.right_loop
    sign = 1 if k > 0 else -1
    for _ in range(abs(k)):
        u, v = hurwitz_step(u, v, sign)
    return {arc.p: u, arc.q: v}


def _twisted_perms(rep: MonodromyRep, arc: ArcSpec) -> tuple[Permutation, Permutation]:
    return evaluate_word(rep, arc.left_loop), evaluate_word(rep, arc.right_loop)


def lifts_rel_boundary(rep: MonodromyRep, arc: ArcSpec, k: int, cap: int = K_CAP) -> bool:
    if abs(k) > cap:
        raise ValueError(f"exponent {k} exceeds the cap {cap}")
    images = braid_action(arc, k)
    return (
        evaluate_word(rep, images[arc.p]) == evaluate_word(rep, arc.left_loop)
        and evaluate_word(rep, images[arc.q]) == evaluate_word(rep, arc.right_loop)
    )


@dataclass(frozen=True)
class ArcComponent:
    sheets: tuple[int, ...]
    left_points: tuple[Point, ...]
    right_points: tuple[Point, ...]
    ends: tuple[Point, ...]
    is_path: bool

    @property
    def degree(self) -> int:
        return len(self.sheets)

    def to_json(self, namer: Callable[[Point], str] | None = None) -> dict:
        name = namer or (lambda pt: f"p{pt[0]}:{pt[1] + 1}")
        return {
            "degree": self.degree,
            "sheets": [s + 1 for s in self.sheets],
            "over_p": [name(pt) for pt in self.left_points],
            "over_q": [name(pt) for pt in self.right_points],
            "ends": [name(pt) for pt in self.ends],
            "is_path": self.is_path,
        }


@dataclass
class LiftReport:
    arc: ArcSpec
    components: list[ArcComponent]
    min_exponent: int | None = None
    formula_exponent: int | None = None
    lifted: TwistWord | None = None
    marked: frozenset = frozenset()

    def meets_marked(self, comp: ArcComponent) -> tuple[Point, ...]:
        return tuple(pt for pt in comp.ends if pt in self.marked)

    def to_json(self, namer: Callable[[Point], str] | None = None) -> dict:
        comps = []
        for c in self.components:
            d = c.to_json(namer)
            if self.marked:
                d["meets_marked"] = [(namer or str)(pt) for pt in self.meets_marked(c)]
            comps.append(d)
        out = {"arc": self.arc.to_json(), "components": comps}
        if self.min_exponent is not None:
            out["min_lifting_exponent"] = self.min_exponent
            out["degree_plus_one_reading"] = self.formula_exponent
        if self.lifted is not None:
            out["lifted"] = self.lifted.to_json()
        return out


def point_of(rep: MonodromyRep, puncture: int, sheet: int, conj: FreeWord = FreeWord()) -> Point:
    """Preimage of ``puncture`` reached from ``sheet`` along ``conj``."""
    return (puncture, rep.orbit_min[puncture - 1][walk(rep, sheet, conj)])


def _orbits(perm: Permutation) -> list[tuple[int, ...]]:
    return perm.cycles(include_fixed=True)


def arc_preimage(rep: MonodromyRep, arc: ArcSpec) -> LiftReport:
    """Components of the preimage of the arc.

    Each sheet carries one lift of the arc's interior, joining the preimage of
    ``p`` it starts at to the preimage of ``q`` it ends at; components are the
    connected pieces of that bipartite graph.
    """
    a, b = _twisted_perms(rep, arc)
    # the point over p (or q) reached from a sheet is found by walking the conjugator
    move_p, move_q = evaluate_word(rep, arc.left_conj).images, evaluate_word(rep, arc.right_conj).images
    low_p, low_q = rep.orbit_min[arc.p - 1], rep.orbit_min[arc.q - 1]
    owner_a = {s: orb for orb in _orbits(a) for s in orb}
    owner_b = {s: orb for orb in _orbits(b) for s in orb}
    seen: set[int] = set()
    comps = []
    for start in range(rep.degree):
        if start in seen:
            continue
        stack, sheets = [start], []
        seen.add(start)
        while stack:
            s = stack.pop()
            sheets.append(s)
            for t in owner_a[s] + owner_b[s]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        sheets.sort()
        la = sorted({owner_a[s] for s in sheets})
        lb = sorted({owner_b[s] for s in sheets})
        to_pt_a = {orb: (arc.p, low_p[move_p[orb[0]]]) for orb in la}
        to_pt_b = {orb: (arc.q, low_q[move_q[orb[0]]]) for orb in lb}
        ends = [to_pt_a[o] for o in la if len(o) == 1] + [to_pt_b[o] for o in lb if len(o) == 1]
        # points + sheets: a tree has one fewer sheet than points
        is_path = all(len(o) <= 2 for o in la + lb) and len(la) + len(lb) == len(sheets) + 1
        comps.append(ArcComponent(tuple(sheets), tuple(to_pt_a.values()), tuple(to_pt_b.values()), tuple(ends), is_path))
    return LiftReport(arc, comps)


def min_lifting_exponent(rep: MonodromyRep, arc: ArcSpec, cap: int = K_CAP) -> LiftReport:
    """Smallest ``k >= 1`` for which the oracle says ``tau^k`` lifts.

    The report also carries the "degree + 1" reading: lcm of ``d + 1`` over
    ramified components with ``d`` sheets.
    """
    report = arc_preimage(rep, arc)
    for k in range(1, cap + 1):
        if lifts_rel_boundary(rep, arc, k, cap):
            report.min_exponent = k
            break
    else:
        raise ValueError(f"no power up to {cap} lifts")
    report.formula_exponent = math.lcm(*(c.degree + 1 for c in report.components if c.degree > 1)) if any(c.degree > 1 for c in report.components) else 1
    return report


def component_exponent(report: LiftReport) -> int:
    """lcm of component sheet counts: the exponent predicted for path components."""
    return math.lcm(*(c.degree for c in report.components))


def _two_colour_components(graph: EdgeColoredGraph, i: int) -> list[tuple[int, int]]:
    """(vertex count, edge count) of each component of the {i, i+1}-subgraph."""
    adj: dict = {v: [] for v in graph.vertices}
    for e in graph.plain_edges:
        if e.color in (i, i + 1):
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
    seen, out = set(), []
    for v in graph.vertices:
        if v in seen:
            continue
        stack, nv, deg = [v], 0, 0
        seen.add(v)
        while stack:
            x = stack.pop()
            nv += 1
            deg += len(adj[x])
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.append((nv, deg // 2))
    return out


def criterion_tau3(graph: EdgeColoredGraph, i: int) -> bool:
    """Every component of the ``{i, i+1}``-subgraph is a point or a two-edge path."""
    return all(nv == 1 or (nv == 3 and ne == 2) for nv, ne in _two_colour_components(graph, i))


def criterion_tau2(graph: EdgeColoredGraph, i: int) -> bool:
    """Every component of the ``{i, i+1}``-subgraph is a point or a single edge."""
    return all(nv <= 2 and ne == nv - 1 for nv, ne in _two_colour_components(graph, i))


def criterion_general(rep: MonodromyRep, arc: ArcSpec, power: int) -> bool:
    """Component test on the two-colored graph of the arc's loop monodromies.

    A path component with ``d`` vertices allows exactly the multiples of ``d``.
    """
    if power not in (2, 3):
        raise ValueError("power must be 2 or 3")
    a, b = _twisted_perms(rep, arc)
    if not (a.is_involution() and b.is_involution()):
        return False
    report = arc_preimage(rep, arc)
    return all(c.is_path and c.degree in (1, power) for c in report.components)


def lifted_word(
    rep: MonodromyRep, arc: ArcSpec, k: int, marked: Iterable[Point] = (), preimage: LiftReport | None = None
) -> LiftReport:
    """The upstairs twists that ``tau_arc^k`` lifts to.

    Each path component of degree ``d`` carries ``tau^(k/d)``.  With a marked
    set, components that touch no marked point are dropped; those touching
    exactly one are kept and flagged "one-end".  ``preimage`` may pass in a
    cached ``arc_preimage(rep, arc)``.
    """
    if not lifts_rel_boundary(rep, arc, k):
        raise ValueError(f"{arc.label}^{k} does not lift")
    base = preimage if preimage is not None else arc_preimage(rep, arc)
    report = replace(base, components=list(base.components))
    marked = frozenset(marked)
    report.marked = marked
    letters = []
    for c in report.components:
        if len(c.ends) != 2 or not c.is_path:
            raise ValueError("lift of a non-path component is not a twist")
        if k % c.degree:
            raise ValueError("component degree does not divide the exponent")
        hits = tuple(pt for pt in c.ends if pt in marked)
        note = ""
        if marked:
            if not hits:
                continue
            if len(hits) == 1:
                note = "one-end"
        letters.append(TwistLetter(tuple(sorted(c.ends)), k // c.degree, c.degree, note))
    report.lifted = TwistWord(tuple(letters))
    return report


def q_reduce(word: TwistWord) -> TwistWord:
    """Drop one-end letters; each must be a full twist (even exponent), which is
    trivial once only the marked points count."""
    out = []
    for t in word:
        if t.note == "one-end":
            if t.exponent % 2:
                raise ValueError(f"odd twist on {t.label} moves a marked point off the marked set")
            continue
        out.append(t)
    return TwistWord(tuple(out))

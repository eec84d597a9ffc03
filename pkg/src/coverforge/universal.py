"""The branched covering ``G_m`` as a universal construction device.

Everything here is for a fixed ``m >= 8``: the marked set ``Q`` (two regular
preimages of each of the first ``2m`` punctures), the downstairs arcs whose
twists generate, their braid words, and one construction stage that turns
a ``k``-component link braid into a ``(k-1)``-component branch braid whose
``Q``-lift contains a stabilization of the input.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .braid import (
    BraidWord,
    CombingTooLong,
    LinkStats,
    a_runs,
    artin_Aij,
    closure_components,
    comb_pure,
    cycle_braid,
    free_action,
    linking_matrix,
    normalize_cycles,
    perm_of,
    probably_same_braid,
    pure_to_a_word,
    realize_pair,
    same_braid,
    sub_braid,
)
from .freegroup import FreeWord, split_conjugate
from .graph import GmGraph, build_Gm
from .lifting import (
    ArcSpec,
    LiftReport,
    Point,
    TwistLetter,
    TwistWord,
    arc_preimage,
    lifted_word,
    lifts_rel_boundary,
    q_reduce,
)
from .monodromy import MonodromyRep, rep_from_graph, walk

log = logging.getLogger("coverforge.universal")

MIN_M = 8
COMB_BUDGET = 2000
WORD_CHECK_LIMIT = 300
PARTS = ("Q-", "Q0+", "Q0-", "Q+")


@dataclass
class CoveringDatum:
    m: int
    gm: GmGraph
    rep: MonodromyRep
    names: dict[Point, str]
    positions: dict[Point, int]
    parts: dict[str, tuple[Point, ...]]
    arcs: dict[str, ArcSpec] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return 2 * self.m

    @property
    def q_points(self) -> frozenset[Point]:
        return frozenset(self.positions)

    def namer(self, pt: Point) -> str:
        return self.names.get(pt) or f"{self.gm.name(pt[1])}({pt[0]})"

    def by_position(self) -> list[Point]:
        return sorted(self.positions, key=self.positions.get)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "sheets": self.rep.degree,
            "Q": [{"position": self.positions[pt], "point": self.names[pt]} for pt in self.by_position()],
            "parts": {k: [self.names[pt] for pt in v] for k, v in self.parts.items()},
            "arcs": {k: a.to_json() for k, a in self.arcs.items()},
        }


@lru_cache(maxsize=None)
def build_covering_datum(m: int) -> CoveringDatum:
    if m < MIN_M:
        raise ValueError(f"the universal covering needs m >= {MIN_M}, got {m}")
    gm = build_Gm(m)
    rep = rep_from_graph(gm.graph)
    v = gm.resolve
    # chain order: Q- , Q0+ , Q0- , Q+ ; consecutive points are joined by lifts
    parts = {
        "Q-": tuple((j, v(m + 1, m + 1)) for j in range(1, m + 1)),
        "Q0+": tuple((m + i, v(m + i, m + i - 2)) for i in range(1, m + 1)),
        "Q0-": tuple((j, v(j, j + 1)) for j in range(1, m + 1)),
        "Q+": tuple((m + i, v(m, m - 1)) for i in range(1, m + 1)),
    }
    labels = {
        "Q-": lambda p: f"v^{m + 1}_{m + 1}({p})",
        "Q0+": lambda p: f"v^{p}_{p - 2}({p})",
        "Q0-": lambda p: f"v^{p}_{p + 1}({p})",
        "Q+": lambda p: f"v^{m}_{m - 1}({p})",
    }
    names, positions = {}, {}
    for base, part in enumerate(PARTS):
        for off, pt in enumerate(parts[part], start=1):
            if rep.gens[pt[0] - 1](pt[1]) != pt[1]:
                raise AssertionError(f"{pt} is a branch point")
            names[pt] = labels[part](pt[0])
            positions[pt] = base * m + off
    datum = CoveringDatum(m, gm, rep, names, positions, parts)
    n = 2 * m
    for i in range(1, n):
        datum.arcs[f"alpha_{i}"] = ArcSpec.standard(i)
    datum.arcs["alpha_0"] = ArcSpec(1, n, name="alpha_0")
    for i in range(1, n):
        if i != m:
            datum.arcs[f"gamma_{i}"] = gamma_arc(i, m)
    return datum


def beta_word(i: int, m: int) -> FreeWord:
    """The loop that ``gamma_i`` is surgered along, read from ``p_{i+1}``'s side
    for ``i < m`` and from ``p_i``'s side for ``i > m``."""
    if not (1 <= i < 2 * m and i != m):
        raise ValueError(f"no beta loop for i={i}")
    if i < m:
        c = list(range(i + 1, 2 * m))
        core = [2 * m, 2 * m - 5]
    else:
        c = list(range(i, 1, -1))
        core = [1, 6]
    return FreeWord(c + core + [-a for a in reversed(c)])


def gamma_arc(i: int, m: int) -> ArcSpec:
    """``alpha_i`` after surgery along its beta loop.

    For ``i < m`` the loop around ``p_{i+1}`` is conjugated by ``beta_i``.  For
    ``i > m`` the loop around ``p_i`` is conjugated by the mirror image of
    ``beta_{2m-i}``, which visits the same punctures as ``beta_i``.
    """
    if i < m:
        return ArcSpec(i, i + 1, FreeWord(), beta_word(i, m), name=f"gamma_{i}")
    c = list(range(i, 1, -1))
    mirror = FreeWord([-a for a in c] + [-1, -6] + list(reversed(c)))
    return ArcSpec(i, i + 1, mirror, FreeWord(), name=f"gamma_{i}")


def arc_pair(arc: ArcSpec) -> tuple[FreeWord, FreeWord]:
    return arc.left_loop, arc.right_loop


def arc_from_pair(u: FreeWord, v: FreeWord, n: int, name: str = "") -> ArcSpec:
    """Read an adapted pair of conjugates of generators back as an arc."""
    ends = []
    for w in (u, v):
        g = abs(w.letters[len(w) // 2])
        c = split_conjugate(w, g)
        if c is None:
            raise ValueError(f"{w} is not a conjugate of a generator")
        ends.append((g, c))
    (p, cp), (q, cq) = ends
    return ArcSpec(p, q, cp, cq, name)


def arc_image(h: BraidWord, i: int, name: str = "") -> ArcSpec:
    """The arc ``h(alpha_i)``."""
    im = free_action(h)
    return arc_from_pair(FreeWord.gen(i).substitute(im), FreeWord.gen(i + 1).substitute(im), h.strands, name)


# ---- properties a surgery arc must have ----


def ends_of(report: LiftReport, marked) -> tuple[list, list]:
    """Preimage components meeting ``marked``: (both ends marked, one end marked)."""
    both, one = [], []
    for c in report.components:
        hits = [e for e in c.ends if e in marked]
        if len(hits) == 2:
            both.append(c)
        elif hits:
            one.append(c)
    return both, one


def alpha_bar_ends(datum: CoveringDatum, i: int) -> tuple[Point, Point]:
    """Ends of the degree-1 lift of ``alpha_i`` on ``Q``."""
    m = datum.m
    side = datum.parts["Q-"] if i < m else datum.parts["Q+"]
    k = i if i < m else i - m
    return tuple(sorted((side[k - 1], side[k])))


def surgery_checks(datum: CoveringDatum, arc: ArcSpec, i: int) -> dict[str, bool]:
    """The conditions that let ``tau_arc^2`` lift to ``tau^2`` of the lift of ``alpha_i`` on ``Q``."""
    report = _preimage(datum.m, arc) if datum is build_covering_datum(datum.m) else arc_preimage(datum.rep, arc)
    both, one = ends_of(report, datum.q_points)
    checks = {
        "degrees_1_or_2": all(c.degree in (1, 2) for c in report.components),
        "square_lifts": lifts_rel_boundary(datum.rep, arc, 2),
        "three_meet_Q": len(both) + len(one) == 3,
        "one_with_both_ends": len(both) == 1 and len(one) == 2,
        "degree_one_on_Q": all(c.degree == 1 for c in both + one),
        "ends_as_alpha_bar": len(both) == 1 and tuple(sorted(both[0].ends)) == alpha_bar_ends(datum, i),
    }
    return checks


def gamma_braid_formula(m: int, i: int) -> BraidWord:
    """Closed form of a braid ``h`` with ``h(alpha_i) = gamma_i``."""
    n = 2 * m
    if i < m:
        letters = (
            [-a for a in range(i + 1, n - 1)]
            + [-a for a in range(n - 2, n - 6, -1)]
            + [n - 6, n - 6]
            + list(range(n - 5, n))
            + list(range(n - 1, i, -1))
        )
    else:
        letters = list(range(i - 1, 1, -1)) + [-a for a in range(6, 1, -1)] + [-2] + list(range(3, 7)) + [-1, -1]
        letters += [-a for a in range(2, i)]
    return BraidWord(n, tuple(letters))


def realizes(h: BraidWord, arc: ArcSpec, i: int) -> bool:
    im = free_action(h)
    return (FreeWord.gen(i).substitute(im), FreeWord.gen(i + 1).substitute(im)) == arc_pair(arc)


@lru_cache(maxsize=None)
def gamma_braid(m: int, i: int) -> BraidWord:
    """``h`` with ``h(alpha_i) = gamma_i``: the closed form, checked against the
    free-group action, else found by greedy search."""
    arc = gamma_arc(i, m)
    h = gamma_braid_formula(m, i)
    if realizes(h, arc, i):
        return h
    return realize_pair(*arc_pair(arc), i, 2 * m)


@lru_cache(maxsize=None)
def surgery_arc(m: int, i: int) -> tuple[ArcSpec, tuple[int, int, int] | None]:
    """The arc used for the ``gamma_i`` family, and the full twist added to it.

    This is ``gamma_i`` when it has all the required properties (second entry
    ``None``).  Otherwise it is ``h * A_ac^e (alpha_i)`` with ``h(alpha_i) =
    gamma_i``: ``gamma_i`` pushed once more around a pair of punctures, taking
    the first ``(a, c, e)`` in a fixed search order that passes every check.
    """
    datum = build_covering_datum(m)
    arc = datum.arcs[f"gamma_{i}"]
    if all(surgery_checks(datum, arc, i).values()):
        return arc, None
    n = 2 * m
    h = gamma_braid(m, i)
    order = [(i - 1, i, 1), (i + 1, i + 2, -1), (i - 1, i, -1), (i + 1, i + 2, 1)]
    order += [(a, c, e) for a in range(1, n) for c in range(a + 1, n + 1) for e in (1, -1)]
    for a, c, e in order:
        if not 1 <= a < c <= n:
            continue
        cand = arc_image(h * artin_Aij(a, c, n) ** e, i, f"gamma'_{i}")
        if all(surgery_checks(datum, cand, i).values()):
            log.info("gamma_%d replaced by h*A_%d,%d^%d", i, a, c, e)
            return cand, (a, c, e)
    raise RuntimeError(f"no replacement arc found for gamma_{i}")


def surgery_braid(m: int, i: int) -> BraidWord:
    """``h`` with ``h(alpha_i)`` the arc of :func:`surgery_arc`."""
    h = gamma_braid(m, i)
    extra = surgery_arc(m, i)[1]
    if extra is None:
        return h
    a, c, e = extra
    return h * artin_Aij(a, c, 2 * m) ** e


# ---- lifts of the beta loops at the vertices of the triple arcs ----

# (table, case, condition, start, expected end); ``*`` marks the rows where a
# tricycle of beta_i meets a triple arc.  Index expressions use k, i, m, j=k-2m.
GOLDEN_TABLES: tuple[tuple[int, str, str, str, str], ...] = (
    (1, "k != 1", "k != 1", "v^{k}_{i}", "v^{k}_{0}"),
    (1, "k = 1", "k == 1", "v^{1}_{i}", "v^{4*m+1}_{4}"),
    (2, "k=i+2 and m<i<2m-2", "k == i+2 and m < i < 2*m-2", "v^{i+2}_{i-1}", "v^{i+2}_{i-1}"),
    (2, "k=i and m+1<i<2m", "k == i and m+1 < i < 2*m", "v^{i}_{i-1}", "v^{2*m+i-1}_{4}"),
    (2, "k=2m and i=2m-1", "k == 2*m and i == 2*m-1", "v^{2*m}_{2*m-2}", "v^{2*m}_{2*m-2}"),
    (2, "k=i+1 and m<i<2m", "k == i+1 and m < i < 2*m", "v^{i+1}_{i-1}", "v^{2*m+i+1}_{4}"),
    (2, "k=4m+2 and i=2m-6", "k == 4*m+2 and i == 2*m-6", "v^{4*m+2}_{2*m-7}", "v^{4*m+2}_{2*m-7}"),
    (2, "k=2m+j, i=2m-5, j not 2,6,7, j<=m", "i == 2*m-5 and 1 <= j <= m and j not in (2, 6, 7)", "v^{k}_{2*m-6}", "v^{k}_{2*m-6}"),
    (2, "k=2m+2, i=2m-5 *", "k == 2*m+2 and i == 2*m-5", "v^{2*m+2}_{2*m-6}", "v^{1}_{2*m-5}"),
    (2, "k=2m+6, i=2m-5", "k == 2*m+6 and i == 2*m-5", "v^{2*m+6}_{2*m-6}", "v^{4}_{2}"),
    (2, "k=2m+7, i=2m-5", "k == 2*m+7 and i == 2*m-5", "v^{2*m+7}_{2*m-6}", "v^{6}_{4}"),
    (2, "v^k_i not identified", "lone(k, i)", "v^{k}_{i-1}", "v^{k}_{i-1}"),
    (3, "k=i+3 and m<i<2m-4", "k == i+3 and m < i < 2*m-4", "v^{i+3}_{i+1}", "v^{i+3}_{i+1}"),
    (3, "k=i+3 and i=2m-4", "k == i+3 and i == 2*m-4", "v^{2*m-1}_{2*m-3}", "v^{2*m-1}_{2*m-3}"),
    (3, "k=i+3 and i=2m-3", "k == i+3 and i == 2*m-3", "v^{2*m}_{2*m-2}", "v^{2*m}_{2*m-2}"),
    (3, "k=i+1 and m<i<2m-1", "k == i+1 and m < i < 2*m-1", "v^{i+1}_{i+1}", "v^{2*m+i}_{4}"),
    (3, "k=i+1 and i=2m-1", "k == i+1 and i == 2*m-1", "v^{2*m}_{2*m}", "v^{4*m-1}_{4}"),
    (3, "k=4m+2 and i=2m-7", "k == 4*m+2 and i == 2*m-7", "v^{4*m+2}_{2*m-6}", "v^{4*m+2}_{2*m-6}"),
    (3, "k=2m+j, i=2m-6, j not 2,6,7, j<m", "i == 2*m-6 and 1 <= j < m and j not in (2, 6, 7)", "v^{k}_{2*m-5}", "v^{4*m-1}_{4}"),
    (3, "k=2m+2, i=2m-6 *", "k == 2*m+2 and i == 2*m-6", "v^{2*m+2}_{2*m-5}", "v^{1}_{2*m-6}"),
    (3, "k=2m+6, i=2m-6", "k == 2*m+6 and i == 2*m-6", "v^{2*m+6}_{2*m-5}", "v^{5}_{2}"),
    (3, "k=2m+7, i=2m-6", "k == 2*m+7 and i == 2*m-6", "v^{2*m+7}_{2*m-5}", "v^{7}_{4}"),
    (3, "v^k_{i+1} not identified", "lone(k, i+1)", "v^{k}_{i+1}", "v^{k}_{i+1}"),
)

_VERTEX = re.compile(r"v\^\{([^}]*)\}_\{([^}]*)\}")


@dataclass(frozen=True)
class TableRow:
    table: int
    case: str
    k: int
    i: int
    start: str
    expected: str
    computed: str

    @property
    def ok(self) -> bool:
        return self.expected == self.computed

    def to_json(self) -> dict:
        return {"table": self.table, "case": self.case, "k": self.k, "i": self.i, "start": self.start,
                "expected": self.expected, "computed": self.computed, "ok": self.ok}


def _vertex(datum: CoveringDatum, template: str, env: dict) -> int:
    a, b = _VERTEX.fullmatch(template).groups()
    return datum.gm.resolve(eval(a, {"__builtins__": {}}, env), eval(b, {"__builtins__": {}}, env))


def lift_tables(datum: CoveringDatum) -> list[TableRow]:
    """Walk ``beta_i`` from every start vertex the golden rows name, ``m < i < 2m``."""
    m, gm = datum.m, datum.gm
    lone = lambda k, i: len(gm.classes[gm.resolve(k, i)]) == 1  # noqa: E731
    rows = []
    for table, case, cond, start, end in GOLDEN_TABLES:
        for i in range(m + 1, 2 * m):
            word = beta_word(i, m)
            for k in range(1, gm.n_copies + 1):
                env = {"k": k, "i": i, "m": m, "j": k - 2 * m, "lone": lone}
                if not eval(cond, {"__builtins__": {}}, env):
                    continue
                s = _vertex(datum, start, env)
                e = walk(datum.rep, s, word)
                rows.append(TableRow(table, case, k, i, str(gm.name(s)), str(gm.name(_vertex(datum, end, env))), str(gm.name(e))))
    return rows


# ---- Q-reduced transformation pairs ----


def expected_lift(m: int, name: str) -> dict[str, tuple[int, int]]:
    """Chain positions joined by the named lifts of a downstairs arc.

    Keys: ``"tilde"`` (lift on Q0, or the two lifts of ``alpha_m``) and ``"bar"``
    (lift on Q+ or Q-).
    """
    i = int(name.rpartition("_")[2])
    if i == 0:
        return {"bar": (2 * m, 2 * m + 1)}
    if i == m:
        return {"tilde1": (m, m + 1), "tilde2": (3 * m, 3 * m + 1)}
    if i > m:
        t = i - m
        return {"tilde": (m + t, m + t + 1), "bar": (3 * m + t, 3 * m + t + 1)}
    return {"tilde": (2 * m + i, 2 * m + i + 1), "bar": (i, i + 1)}


@dataclass
class TransformationPair:
    family: int
    down: TwistWord
    up: TwistWord
    expected: tuple[tuple[tuple[int, int], int], ...]
    observed: tuple[tuple[tuple[int, int], int], ...]

    @property
    def ok(self) -> bool:
        return self.expected == self.observed

    def to_json(self, datum: CoveringDatum) -> dict:
        return {
            "family": self.family,
            "down": self.down.to_json(),
            "up": [{"ends": [datum.namer(pt) for pt in t.arc], "exp": t.exponent, "degree": t.degree} for t in self.up],
            "expected_positions": [list(p) + [e] for p, e in self.expected],
            "ok": self.ok,
        }


def up_positions(datum: CoveringDatum, word: TwistWord) -> tuple[tuple[tuple[int, int], int], ...]:
    out = []
    for t in word:
        a, b = sorted(datum.positions[pt] for pt in t.arc)
        out.append(((a, b), t.exponent))
    return tuple(sorted(out))


def q_lift(datum: CoveringDatum, arc: ArcSpec, k: int) -> TwistWord:
    pre = _preimage(datum.m, arc)
    return q_reduce(lifted_word(datum.rep, arc, k, datum.q_points, preimage=pre).lifted)


@lru_cache(maxsize=None)
def _preimage(m: int, arc: ArcSpec) -> LiftReport:
    return arc_preimage(build_covering_datum(m).rep, arc)


def basic_pairs(datum: CoveringDatum, replace_failing: bool = True) -> list[TransformationPair]:
    """The four families of pairs (downstairs power, Q-reduced lift).

    The ``gamma_i`` family uses :func:`surgery_arc` when ``replace_failing``;
    otherwise a ``gamma_i`` whose square does not lift raises ``ValueError``.
    """
    m, n = datum.m, datum.n
    specs: list[tuple[int, ArcSpec, int, tuple]] = []
    for i in range(1, n):
        e = expected_lift(m, f"alpha_{i}")
        if i == m:
            specs.append((2, datum.arcs[f"alpha_{m}"], 3, ((e["tilde1"], 1), (e["tilde2"], 1))))
        else:
            specs.append((1, datum.arcs[f"alpha_{i}"], 3, ((e["tilde"], 1), (e["bar"], 3))))
    specs.append((3, datum.arcs["alpha_0"], 2, ((expected_lift(m, "alpha_0")["bar"], 2),)))
    for i in range(1, n):
        if i == m:
            continue
        arc = surgery_arc(m, i)[0] if replace_failing else datum.arcs[f"gamma_{i}"]
        specs.append((4, arc, 2, ((expected_lift(m, f"gamma_{i}")["bar"], 2),)))
    pairs = []
    for family, arc, k, expected in specs:
        if not lifts_rel_boundary(datum.rep, arc, k):
            raise ValueError(f"{arc.label}^{k} does not lift to the cover of G_{m}")
        up = q_lift(datum, arc, k)
        down = TwistWord((TwistLetter(arc, k),))
        pairs.append(TransformationPair(family, down, up, tuple(sorted(expected)), up_positions(datum, up)))
    return pairs


# ---- one construction stage ----

Letter = tuple[str, int]


def _arc_for(m: int, u: int) -> int:
    """Downstairs arc lifting to the crossing of strands ``u, u+1`` (``u != m``)."""
    return m + u if u < m else u - m


def _inverse(word: list[Letter]) -> list[Letter]:
    return [(a, -k) for a, k in reversed(word)]


def _merge(word: list[Letter]) -> list[Letter]:
    out: list[Letter] = []
    for a, k in word:
        if out and out[-1][0] == a:
            k += out.pop()[1]
        if k:
            out.append((a, k))
    return out


def _gamma_name(m: int, i: int) -> str:
    return surgery_arc(m, i)[0].name


def block_word(m: int, u: int) -> list[Letter]:
    """Downstairs word whose Q-lift is ``sigma_u`` on Q0 plus its copy on Q+ or Q-."""
    a = _arc_for(m, u)
    return [(f"alpha_{a}", 3), (_gamma_name(m, a), -2)]


def d_word(m: int, s: int, t: int) -> list[Letter]:
    """Downstairs word whose Q-lift is the full twist ``A_st`` on Q0."""
    if s <= m < t:
        down = [(f"alpha_{_arc_for(m, u)}", 3) for u in range(t - 1, m, -1)]
        up = [(f"alpha_{_arc_for(m, u)}", -3) for u in range(s, m)]
        pre = down + up
        return pre + [("alpha_0", 2)] + _inverse(pre)
    lam = [(f"alpha_{_arc_for(m, u)}", -3) for u in range(s, t - 1)]
    a = _arc_for(m, t - 1)
    return lam + [(f"alpha_{a}", 6), (_gamma_name(m, a), -6)] + _inverse(lam)


def _arc_by_name(m: int, name: str) -> ArcSpec:
    if name.startswith("gamma"):
        return surgery_arc(m, int(name.rpartition("_")[2]))[0]
    return build_covering_datum(m).arcs[name]


@lru_cache(maxsize=None)
def lifted_letters(m: int, name: str, k: int) -> tuple[int, ...]:
    """Q-braid letters (positions on the chain) of the lift of ``tau_name^k``."""
    datum = build_covering_datum(m)
    out = []
    for (a, b), e in up_positions(datum, q_lift(datum, _arc_by_name(m, name), k)):
        if b != a + 1:
            raise ValueError(f"lift of {name}^{k} joins non-adjacent Q points {a}, {b}")
        out.extend([a if e > 0 else -a] * abs(e))
    return tuple(out)


@lru_cache(maxsize=None)
def _twist_power(m: int, name: str, k: int) -> BraidWord:
    n = 2 * m
    kind, _, idx = name.partition("_")
    i = int(idx)
    if kind == "alpha" and i > 0:
        return BraidWord(n, (i,)) ** k
    if kind == "alpha":
        h = BraidWord(n, tuple(-j for j in range(n - 1, 1, -1)))
        i = 1
    else:
        h = gamma_braid(m, i) if kind == "gamma" else surgery_braid(m, i)
    return (h * BraidWord(n, (i,)) ** k * h.inverse()).free_reduce()


def twist_braid(m: int, name: str) -> BraidWord:
    """Braid word of the half twist on a named downstairs arc."""
    return _twist_power(m, name, 1)


@dataclass
class StageResult:
    m: int
    input: BraidWord
    normalized: BraidWord
    bounds: tuple[int, ...]
    combed: list[tuple[int, int, int]]
    branch_word: list[Letter]
    branch_braid: BraidWord
    lifted_braid: BraidWord
    components_before: int
    components_after: int
    checks: dict[str, bool]
    link_input: LinkStats
    link_lifted: LinkStats
    check_methods: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "input": self.input.to_text(),
            "normalized": self.normalized.to_text(),
            "blocks": list(self.bounds),
            "combed": [list(r) for r in self.combed],
            "branch_word": [{"arc": a, "exp": k} for a, k in self.branch_word],
            "branch_braid": self.branch_braid.to_text(),
            "lifted_braid_on_Q": self.lifted_braid.to_text(),
            "components_before": self.components_before,
            "components_after": self.components_after,
            "checks": self.checks,
            "check_methods": self.check_methods,
            "link_input": self.link_input.to_json(),
            "link_lifted_Q0": self.link_lifted.to_json(),
        }


def _q0_sublink(q: BraidWord, m: int, normalized: BraidWord) -> LinkStats:
    """Linking data of the components of ``q`` through Q0, ordered like the
    components of ``normalized`` they contain."""
    full = linking_matrix(q)
    q0 = set(range(m, 3 * m))
    picked = [c for c, strands in enumerate(full.component_strands) if q0 & set(strands)]
    # Q0 position m+1+s (1-based) carries strand s+1 of the input
    order = sorted(picked, key=lambda c: min(s - m for s in full.component_strands[c] if s in q0))
    idx = np.ix_(order, order)
    return LinkStats(
        len(order),
        full.linking_matrix[idx],
        sum(full.component_writhe[c] for c in order) + int(np.triu(full.linking_matrix[idx], 1).sum()) * 2,
        None,
        tuple(full.component_strands[c] for c in order),
        tuple(full.component_writhe[c] for c in order),
    )


def _same(a: BraidWord, b: BraidWord, methods: dict, key: str) -> bool:
    """Exact word-problem check for short words; free-group images can grow
    exponentially, so longer ones are compared by fingerprint."""
    a, b = a.free_reduce(), b.free_reduce()
    if max(len(a), len(b)) <= WORD_CHECK_LIMIT:
        methods[key] = "exact"
        return same_braid(a, b)
    methods[key] = "fingerprint"
    return probably_same_braid(a, b)


def construct_stage(L: BraidWord) -> StageResult:
    """One step: a branch braid with one component fewer whose Q-lift contains ``L``."""
    before = closure_components(L)
    if before < 2:
        raise ValueError("a stage needs a braid whose closure has at least two components")
    normalized, bounds = normalize_cycles(L, min_half=MIN_M)
    m = bounds[1]
    n = 2 * m
    if normalized.strands != n:
        raise AssertionError("normalization did not reach 2m strands")
    datum = build_covering_datum(m)
    blocks = cycle_braid(bounds)
    pure = (blocks.inverse() * normalized).free_reduce()
    try:
        combed = comb_pure(pure, max_len=COMB_BUDGET)
    except CombingTooLong:
        log.info("combing exceeded %d letters; using the uncombed A-word", COMB_BUDGET)
        combed = a_runs(pure_to_a_word(pure))
    word: list[Letter] = []
    for u in blocks.letters:
        word += block_word(m, u)
    for s, t, e in combed:
        d = d_word(m, s, t)
        word += (d if e > 0 else _inverse(d)) * abs(e)
    word = _merge(word)
    joined = word + [(f"alpha_{m}", 3)]
    log.info("stage m=%d: %d blocks, %d combed runs, %d downstairs letters", m, len(bounds) - 1, len(combed), len(joined))

    q_letters: list[int] = []
    for name, k in word:
        q_letters.extend(lifted_letters(m, name, k))
    q_pre = BraidWord(4 * m, tuple(q_letters))
    q_full = BraidWord(4 * m, q_pre.letters + lifted_letters(m, f"alpha_{m}", 3))

    branch_letters: list[int] = []
    for name, k in joined:
        branch_letters.extend(_twist_power(m, name, k).letters)
    branch = BraidWord(n, tuple(branch_letters)).free_reduce()
    after = closure_components(branch)

    link_in = linking_matrix(normalized)
    link_q = _q0_sublink(q_full, m, normalized)
    q0 = sub_braid(q_pre, range(m, 3 * m))
    methods: dict[str, str] = {}
    checks = {
        "components_drop_by_one": after == before - 1,
        "q0_equals_input": _same(q0, normalized, methods, "q0_equals_input"),
        "q0_permutation": perm_of(q0) == perm_of(normalized),
        "q_plus_is_first_block": _same(sub_braid(q_pre, range(3 * m, 4 * m)), cycle_braid((0, m)), methods, "q_plus_is_first_block"),
        "q_minus_is_other_blocks": _same(
            sub_braid(q_pre, range(m)), cycle_braid(tuple(b - m for b in bounds[1:])), methods, "q_minus_is_other_blocks"
        ),
        "q0_components": link_q.components == link_in.components,
        "q0_linking": bool(np.array_equal(link_q.linking_matrix, link_in.linking_matrix)),
        "q0_self_linking": link_q.component_self_linking == link_in.component_self_linking,
    }
    return StageResult(m, L, normalized, bounds, combed, joined, branch, q_full, before, after, checks, link_in, link_q, methods)


@dataclass
class TowerResult:
    input: BraidWord
    stages: list[StageResult]
    final: BraidWord

    @cached_property
    def final_components(self) -> int:
        return self.stages[-1].components_after if self.stages else closure_components(self.final)

    @property
    def ok(self) -> bool:
        return self.final_components == 1 and all(s.ok for s in self.stages)

    def to_json(self) -> dict:
        return {
            "input": self.input.to_text(),
            "components": closure_components(self.input),
            "stages": [s.to_json() for s in self.stages],
            "final_branch_knot": self.final.to_text(),
            "final_components": self.final_components,
            "ok": self.ok,
        }


def iterate_to_knot(L: BraidWord, max_stages: int | None = None) -> TowerResult:
    """Repeat :func:`construct_stage` until the branch braid closes to a knot."""
    stages: list[StageResult] = []
    cur, count = L, closure_components(L)
    while count > 1:
        if max_stages is not None and len(stages) >= max_stages:
            break
        st = construct_stage(cur)
        stages.append(st)
        cur, count = st.branch_braid, st.components_after
    return TowerResult(L, stages, cur)

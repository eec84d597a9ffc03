"""Braid words, their closures, and pure-braid combing.

A letter ``i`` is the positive crossing ``sigma_i`` (left strand over right,
both travelling upward) and ``-i`` its inverse.  Strand positions and
permutations are 1-based in text, 0-based inside ``Permutation``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .freegroup import FreeWord, hurwitz_step
from .permutation import Permutation


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        letters = tuple(map(int, self.letters))
        object.__setattr__(self, "letters", letters)
        if self.strands < 1:
            raise ValueError("a braid needs at least one strand")
        if letters and (max(letters) >= self.strands or -min(letters) >= self.strands or 0 in letters):
            bad = next(a for a in letters if a == 0 or abs(a) >= self.strands)
            raise ValueError(f"letter {bad} out of range for {self.strands} strands")

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.strands != self.strands:
            raise ValueError("strand counts differ")
        return BraidWord(self.strands, self.letters + other.letters)

    def __pow__(self, k: int) -> "BraidWord":
        base = self if k >= 0 else self.inverse()
        return BraidWord(self.strands, base.letters * abs(k))

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-a for a in reversed(self.letters)))

    def mirror(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-a for a in self.letters))

    def free_reduce(self) -> "BraidWord":
        out: list[int] = []
        for a in self.letters:
            if out and out[-1] == -a:
                out.pop()
            else:
                out.append(a)
        return BraidWord(self.strands, tuple(out))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(str(a) for a in self.letters)

    def to_text(self) -> str:
        return f"strands {self.strands}\n{self}\n"

    @classmethod
    def parse(cls, text: str, strands: int | None = None) -> "BraidWord":
        """Read ``"1 -2 1"``, optionally preceded by a ``strands N`` header line."""
        header = re.search(r"strands\s+(\d+)", text)
        body = re.sub(r"strands\s+\d+", " ", text)
        letters = tuple(int(t) for t in body.replace(",", " ").split())
        if strands is None:
            strands = int(header.group(1)) if header else max((abs(a) for a in letters), default=0) + 1
        return cls(strands, letters)

    def to_json(self) -> dict:
        return {"strands": self.strands, "letters": list(self.letters)}

    @classmethod
    def from_json(cls, data: dict) -> "BraidWord":
        return cls(data["strands"], tuple(data["letters"]))


def perm_of(b: BraidWord) -> Permutation:
    """Where each starting position ends up: ``sigma_i`` swaps ``i`` and ``i+1``."""
    pos_of = list(range(b.strands))
    at = list(range(b.strands))
    for a in b.letters:
        i = abs(a) - 1
        at[i], at[i + 1] = at[i + 1], at[i]
    for p, s in enumerate(at):
        pos_of[s] = p
    return Permutation(pos_of)


def closure_components(b: BraidWord) -> int:
    return len(perm_of(b).cycles(include_fixed=True))


def stabilize_pos(b: BraidWord) -> BraidWord:
    """Add a strand and one positive crossing with the last strand."""
    return BraidWord(b.strands + 1, b.letters + (b.strands,))


def conjugate(b: BraidWord, c: BraidWord) -> BraidWord:
    """``c b c^-1``."""
    return c * b * c.inverse()


def permutation_braid(perm: Permutation) -> BraidWord:
    """The positive braid in which each pair of strands crosses at most once and
    the strand starting at ``s`` ends at ``perm(s)``."""
    n = perm.degree
    arrangement = list(range(n))
    target = perm.inverse().images
    letters = []
    # bubble sort toward the target arrangement; each swap is one crossing
    rank = {s: target.index(s) for s in range(n)}
    changed = True
    while changed:
        changed = False
        for i in range(n - 1):
            if rank[arrangement[i]] > rank[arrangement[i + 1]]:
                arrangement[i], arrangement[i + 1] = arrangement[i + 1], arrangement[i]
                letters.append(i + 1)
                changed = True
    return BraidWord(max(n, 1), tuple(letters))


def artin_Aij(i: int, j: int, n: int) -> BraidWord:
    """Strands ``i < j`` wrap once around each other, ``j`` passing over the
    strands in between."""
    if not 1 <= i < j <= n:
        raise ValueError(f"need 1 <= i < j <= n, got ({i}, {j}, {n})")
    up = tuple(range(j - 1, i, -1))
    return BraidWord(n, up + (i, i) + tuple(-a for a in reversed(up)))


def free_action(b: BraidWord) -> tuple[FreeWord, ...]:
    """Images of ``x_1..x_n`` under the braid, one Hurwitz move per letter.

    The action is faithful, so two words give the same braid exactly when
    these tuples agree.
    """
    images = [FreeWord.gen(g) for g in range(1, b.strands + 1)]
    for a in b.letters:
        i = abs(a) - 1
        images[i], images[i + 1] = hurwitz_step(images[i], images[i + 1], 1 if a > 0 else -1)
    return tuple(images)


def same_braid(a: BraidWord, b: BraidWord) -> bool:
    return a.strands == b.strands and free_action(a) == free_action(b)


def _strand_tracks(b: BraidWord):
    """Yield (sign, strand at left position, strand at right position) per crossing."""
    at = list(range(b.strands))
    for a in b.letters:
        i = abs(a) - 1
        yield (1 if a > 0 else -1), at[i], at[i + 1]
        at[i], at[i + 1] = at[i + 1], at[i]


@dataclass(frozen=True)
class LinkStats:
    components: int
    linking_matrix: np.ndarray
    writhe: int
    self_linking: int | None
    component_strands: tuple[tuple[int, ...], ...]
    component_writhe: tuple[int, ...]

    @property
    def component_self_linking(self) -> tuple[int, ...]:
        """``writhe - strands`` of each component taken alone."""
        return tuple(w - len(s) for w, s in zip(self.component_writhe, self.component_strands))

    def to_json(self) -> dict:
        return {
            "components": self.components,
            "linking_matrix": self.linking_matrix.tolist(),
            "writhe": self.writhe,
            "self_linking": self.self_linking,
            "component_strands": [[s + 1 for s in c] for c in self.component_strands],
            "component_self_linking": list(self.component_self_linking),
        }


def linking_matrix(b: BraidWord) -> LinkStats:
    """Signed crossing counts of the closure.

    Components are ordered by their least starting position.
    """
    cycles = perm_of(b).cycles(include_fixed=True)
    comp = {s: c for c, cyc in enumerate(cycles) for s in cyc}
    k = len(cycles)
    twice = np.zeros((k, k), dtype=int)
    own = [0] * k
    writhe = 0
    for sign, s, t in _strand_tracks(b):
        writhe += sign
        cs, ct = comp[s], comp[t]
        if cs == ct:
            own[cs] += sign
        else:
            twice[cs, ct] += sign
            twice[ct, cs] += sign
    if np.any(twice % 2):
        raise AssertionError("odd crossing count between closed components")
    sl = writhe - b.strands if k == 1 else None
    return LinkStats(k, twice // 2, writhe, sl, tuple(cycles), tuple(own))


def sub_braid(b: BraidWord, keep: Iterable[int]) -> BraidWord:
    """Delete every strand whose starting position (0-based) is not in ``keep``."""
    keep = set(keep)
    kept = [s in keep for s in range(b.strands)]  # indexed by position
    # before[p]: kept strands at positions < p; a crossing at i changes only before[i+1]
    before = [0]
    for k in kept:
        before.append(before[-1] + k)
    letters = []
    for a in b.letters:
        i = abs(a) - 1
        if kept[i] and kept[i + 1]:
            rank = before[i] + 1
            letters.append(rank if a > 0 else -rank)
        elif kept[i] != kept[i + 1]:
            kept[i], kept[i + 1] = kept[i + 1], kept[i]
            before[i + 1] = before[i] + kept[i]
    return BraidWord(max(len(keep), 1), tuple(letters))


def normalize_cycles(b: BraidWord, min_half: int | None = None) -> tuple[BraidWord, tuple[int, ...]]:
    """Conjugate so the cycles of the permutation are consecutive blocks.

    Blocks are ordered longest first (ties by least strand).  With ``min_half``
    set, also stabilize positively until the first block is exactly half of
    the strands and at least ``min_half`` long; the first block grows, then
    the last, each in place.  Returns the new braid and the block boundaries
    ``0 = r_0 < r_1 < ... < r_k = n``.  A knot is only conjugated.
    """
    cur, bounds = _canonical_layout(b)
    if min_half is None or len(bounds) == 2:
        return cur, bounds
    bounds = list(bounds)
    first = bounds[1]
    half = max(min_half, first, cur.strands - first)
    while bounds[1] < half:
        cur = grow_block(cur, bounds[1])
        bounds = [bounds[0]] + [r + 1 for r in bounds[1:]]
    while bounds[-1] < 2 * half:
        cur = grow_block(cur, bounds[-1])
        bounds[-1] += 1
    return cur, tuple(bounds)


def grow_block(b: BraidWord, r: int) -> BraidWord:
    """Positive stabilization that lengthens the block ending at position ``r``.

    A new strand is threaded in at position ``r+1`` behind every other strand,
    then joined by one positive crossing at the top.  A block cycling
    ``.. -> r -> start`` becomes ``.. -> r -> r+1 -> start``.
    """
    p = r + 1
    letters = [r] if r >= 1 else []
    for a in b.letters:
        i = abs(a)
        if i < r:
            letters.append(a)
        elif i > r:
            letters.append(a + 1 if a > 0 else a - 1)
        else:
            letters += [-p, a, p]
    return BraidWord(b.strands + 1, tuple(letters))


def _ordered_cycles(p: Permutation) -> list[tuple[int, ...]]:
    return sorted(p.cycles(include_fixed=True), key=lambda c: (-len(c), c[0]))


def _conjugate_to(b: BraidWord, new_label: Sequence[int]) -> BraidWord:
    """Conjugate ``b`` so that strand ``s`` is renamed ``new_label[s]``."""
    c = permutation_braid(Permutation(new_label))
    return (c.inverse() * b * c).free_reduce()


def _canonical_layout(b: BraidWord) -> tuple[BraidWord, tuple[int, ...]]:
    p = perm_of(b)
    label = [0] * b.strands
    bounds = [0]
    nxt = 0
    for cyc in _ordered_cycles(p):
        for old in cyc:
            label[old] = nxt
            nxt += 1
        bounds.append(nxt)
    return _conjugate_to(b, label), tuple(bounds)


# ---- pure braids as words in the generators A_ij ----

ALetter = tuple[int, int, int]
"""``(i, j, e)`` is ``A_ij^e`` with ``e = +-1``."""


def _reduce_a(word: Iterable[ALetter]) -> list[ALetter]:
    out: list[ALetter] = []
    for a in word:
        if out and out[-1][:2] == a[:2] and out[-1][2] == -a[2]:
            out.pop()
        else:
            out.append(a)
    return out


def _inv_a(word: Sequence[ALetter]) -> list[ALetter]:
    return [(i, j, -e) for i, j, e in reversed(word)]


def _conj_a(x: Sequence[ALetter], a: ALetter) -> list[ALetter]:
    return list(x) + [a] + _inv_a(x)


def _sigma_conj_letter(k: int, eps: int, a: ALetter) -> list[ALetter]:
    """``sigma_k^eps A_ij^e sigma_k^-eps`` as an A-word."""
    i, j, e = a
    if k == i - 1:
        out = _conj_a([(k, i, 1)], (k, j, 1)) if eps > 0 else [(k, j, 1)]
    elif k == i and j > i + 1:
        out = [(i + 1, j, 1)] if eps > 0 else _conj_a([(i, i + 1, -1)], (i + 1, j, 1))
    elif k == j - 1 and i < j - 1:
        out = _conj_a([(i, j, -1)], (i, j - 1, 1)) if eps > 0 else [(i, j - 1, 1)]
    elif k == j:
        out = [(i, j + 1, 1)] if eps > 0 else _conj_a([(i, j, 1)], (i, j + 1, 1))
    else:
        out = [(i, j, 1)]
    return out if e > 0 else _inv_a(out)


def sigma_conjugate(k: int, eps: int, word: Sequence[ALetter]) -> list[ALetter]:
    out: list[ALetter] = []
    for a in word:
        out.extend(_sigma_conj_letter(k, eps, a))
    return _reduce_a(out)


def _a_conj_top(r: int, s: int, delta: int, a: ALetter) -> list[ALetter]:
    """``A_rs^delta A_in^e A_rs^-delta`` inside the free group on ``A_1n..A_(n-1)n``."""
    i, n, e = a
    if delta > 0:
        x = {r: [(s, n, -1)], s: [(s, n, -1), (r, n, -1)]}.get(i)
        if x is None and r < i < s:
            x = [(s, n, -1), (r, n, -1), (s, n, 1), (r, n, 1)]
    else:
        x = {r: [(r, n, 1), (s, n, 1)], s: [(r, n, 1)]}.get(i)
        if x is None and r < i < s:
            x = [(r, n, 1), (s, n, 1), (r, n, -1), (s, n, -1)]
    out = _conj_a(x or [], (i, n, 1))
    return out if e > 0 else _inv_a(out)


def pure_to_a_word(b: BraidWord) -> list[ALetter]:
    """Rewrite a pure braid word in the ``A_ij``.

    Every prefix is completed by the positive permutation braid of its
    permutation; the pieces between consecutive completions are either trivial
    or a conjugate of ``sigma_i^(+-2)`` by a positive permutation braid.
    """
    if not perm_of(b).is_identity():
        raise ValueError("braid is not pure")
    n = b.strands
    at = list(range(n))
    cache: dict = {}
    out: list[ALetter] = []
    for a in b.letters:
        i = abs(a) - 1
        s, t = at[i], at[i + 1]
        at[i], at[i + 1] = t, s
        if (s < t) == (a > 0):
            continue
        arrangement = tuple(at) if a > 0 else (tuple(at[:i]) + (s, t) + tuple(at[i + 2:]))
        key = (arrangement, i, a > 0)
        if key not in cache:
            pos = [0] * n
            for p, strand in enumerate(arrangement):
                pos[strand] = p
            r = permutation_braid(Permutation(pos))
            word = [(i + 1, i + 2, 1 if a > 0 else -1)]
            for k in reversed(r.letters):
                word = sigma_conjugate(k, 1, word)
            cache[key] = word
        out.extend(cache[key])
    return _reduce_a(out)


class CombingTooLong(ValueError):
    pass


def comb_a_word(word: Sequence[ALetter], n: int, max_len: int | None = None) -> list[ALetter]:
    """Reorder into ``U_2 U_3 ... U_n`` where ``U_j`` holds only ``A_ij``, i < j.

    Combing can grow the word exponentially; past ``max_len`` letters in any
    factor it raises :class:`CombingTooLong`.
    """
    factors: list[list[ALetter]] = []
    rest = list(word)
    for top in range(n, 1, -1):
        prefix: list[ALetter] = []
        u: list[ALetter] = []
        for a in rest:
            if a[1] == top:
                u = _reduce_a(u + [a])
            else:
                prefix.append(a)
                r, s, e = a
                moved: list[ALetter] = []
                for x in u:
                    moved.extend(_a_conj_top(r, s, -e, x))
                u = _reduce_a(moved)
                if max_len is not None and len(u) > max_len:
                    raise CombingTooLong(f"combing factor U_{top} exceeded {max_len} letters")
        factors.append(u)
        rest = prefix
    return [a for f in reversed(factors) for a in f]


def comb_pure(b: BraidWord, max_len: int | None = None) -> list[tuple[int, int, int]]:
    """Artin combing: ``(i, j, exponent)`` runs with ``j`` non-decreasing, whose
    product of ``A_ij^exponent`` is the input braid."""
    return a_runs(comb_a_word(pure_to_a_word(b), b.strands, max_len))


def a_runs(word: Iterable[ALetter]) -> list[tuple[int, int, int]]:
    """Merge neighbouring powers of the same ``A_ij``."""
    runs: list[list[int]] = []
    for i, j, e in word:
        if runs and runs[-1][:2] == [i, j]:
            runs[-1][2] += e
        else:
            runs.append([i, j, e])
    return [tuple(r) for r in runs if r[2]]


def uncomb(runs: Iterable[tuple[int, int, int]], n: int) -> BraidWord:
    letters: list[int] = []
    for i, j, e in runs:
        letters.extend((artin_Aij(i, j, n) ** e).letters)
    return BraidWord(n, tuple(letters))


def cycle_braid(bounds: Sequence[int], n: int | None = None) -> BraidWord:
    """Positive braid whose permutation cycles each block ``r_{i-1}+1 .. r_i`` upward."""
    n = bounds[-1] if n is None else n
    letters: list[int] = []
    for lo, hi in zip(bounds, bounds[1:]):
        letters.extend(range(hi - 1, lo, -1))
    return BraidWord(n, tuple(letters))


@lru_cache(maxsize=8)
def _move_words(n: int) -> tuple[dict, dict]:
    moves: dict[tuple, BraidWord] = {}
    for j in range(1, n):
        for e in (1, -1):
            moves[("s", j, e)] = BraidWord(n, (j * e,))
    for a in range(1, n):
        for c in range(a + 1, n + 1):
            over = artin_Aij(a, c, n)
            under = over.mirror().inverse()
            for e in (1, -1):
                moves[("o", a, c, e)] = over**e
                moves[("u", a, c, e)] = under**e
    return moves, {k: free_action(w) for k, w in moves.items()}


def _pair_score(u: FreeWord, v: FreeWord, i: int) -> tuple[int, int]:
    # length first, then how far the middle letters sit from x_i, x_{i+1}
    cu, cv = u.letters[len(u) // 2], v.letters[len(v) // 2]
    return len(u) + len(v), abs(abs(cu) - i) + abs(abs(cv) - i - 1)


def realize_pair(u: FreeWord, v: FreeWord, i: int, n: int, limit: int = 400) -> BraidWord:
    """A braid ``h`` with ``h(x_i) = u`` and ``h(x_{i+1}) = v``.

    Greedy: repeatedly apply the half twist or full twist that shortens the
    pair most, or failing that, slides its punctures toward ``i, i+1``.
    Raises ``ValueError`` if the pair gets stuck before reaching
    ``(x_i, x_{i+1})``.
    """
    moves, acts = _move_words(n)
    target = (FreeWord.gen(i), FreeWord.gen(i + 1))
    applied = []
    for _ in range(limit):
        if (u, v) == target:
            g = BraidWord(n)
            for k in reversed(applied):
                g = g * moves[k]
            return g.inverse()
        cur = _pair_score(u, v, i)
        shorter = sideways = None
        for k, im in acts.items():
            u2, v2 = u.substitute(im), v.substitute(im)
            score = _pair_score(u2, v2, i)
            if score[0] < cur[0] and (shorter is None or score[0] < shorter[0][0]):
                shorter = (score, k, u2, v2)
            elif score[0] == cur[0] and score[1] < cur[1] and (sideways is None or score < sideways[0]):
                sideways = (score, k, u2, v2)
        best = shorter or sideways
        if best is None:
            break
        _, k, u, v = best
        applied.append(k)
    raise ValueError("pair is not reached by greedy shortening")


_PRIMES = (2**61 - 1, 2**31 - 1, 1_000_000_007, 998_244_353)


def _mat_mul(a, b, p):
    return (
        (a[0] * b[0] + a[1] * b[2]) % p,
        (a[0] * b[1] + a[1] * b[3]) % p,
        (a[2] * b[0] + a[3] * b[2]) % p,
        (a[2] * b[1] + a[3] * b[3]) % p,
    )


def _mat_inv(a, p):
    # determinant is 1
    return (a[3], -a[1] % p, -a[2] % p, a[0])


def braid_fingerprint(b: BraidWord, seed: int = 0) -> tuple:
    """The free action evaluated in ``SL_2(F_p)`` for a few primes, with random
    images of the generators.

    Equal braids always agree; different braids agree only by an unlikely
    coincidence in every prime at once.
    """
    import random

    out = []
    for p in _PRIMES:
        rng = random.Random(f"{seed}:{p}:{b.strands}")
        images = []
        for _ in range(b.strands):
            x, y, z = (rng.randrange(1, p) for _ in range(3))
            # (x, y; z, (1 + y z) / x) has determinant 1
            images.append((x, y, z, (1 + y * z) * pow(x, -1, p) % p))
        for a in b.letters:
            i = abs(a) - 1
            u, v = images[i], images[i + 1]
            if a > 0:
                images[i], images[i + 1] = _mat_mul(_mat_mul(u, v, p), _mat_inv(u, p), p), u
            else:
                images[i], images[i + 1] = v, _mat_mul(_mat_mul(_mat_inv(v, p), u, p), v, p)
        out.append(tuple(images))
    return tuple(out)


def probably_same_braid(a: BraidWord, b: BraidWord, seed: int = 0) -> bool:
    return a.strands == b.strands and braid_fingerprint(a, seed) == braid_fingerprint(b, seed)

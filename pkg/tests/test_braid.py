import random

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from coverforge.braid import (
    BraidWord,
    CombingTooLong,
    artin_Aij,
    braid_fingerprint,
    closure_components,
    comb_a_word,
    comb_pure,
    cycle_braid,
    free_action,
    grow_block,
    linking_matrix,
    normalize_cycles,
    perm_of,
    permutation_braid,
    probably_same_braid,
    pure_to_a_word,
    realize_pair,
    same_braid,
    stabilize_pos,
    sub_braid,
    uncomb,
)
from coverforge.freegroup import FreeWord
from coverforge.permutation import Permutation


def braids(max_strands=5, max_len=10):
    return st.integers(2, max_strands).flatmap(
        lambda n: st.lists(st.integers(1, n - 1).flatmap(lambda a: st.sampled_from([a, -a])), max_size=max_len).map(
            lambda w: BraidWord(n, tuple(w))
        )
    )


def make_pure(b: BraidWord) -> BraidWord:
    return b * permutation_braid(perm_of(b)).inverse()


def test_permutations():
    assert perm_of(BraidWord(3)).is_identity()
    assert perm_of(BraidWord(2, (1,))) == Permutation.parse("(1 2)", 2)
    assert perm_of(cycle_braid((0, 3))).cycle_type() == {3: 1}


def test_closure_components():
    assert closure_components(BraidWord(2, (1, 1))) == 2
    assert closure_components(BraidWord(2, (1,))) == 1
    assert closure_components(BraidWord(3, (1, 2))) == 1


def test_parse_and_text():
    b = BraidWord.parse("strands 4\n1 -2 3\n")
    assert b == BraidWord(4, (1, -2, 3))
    assert BraidWord.parse(b.to_text()) == b
    assert BraidWord.parse("1 1").strands == 2
    with pytest.raises(ValueError):
        BraidWord(2, (2,))


def test_normalize_keeps_canonical_braid():
    b = BraidWord(3, (1, 2, 1, 2))  # perm is a 3-cycle already laid out
    out, bounds = normalize_cycles(b)
    assert bounds == (0, 3)
    assert perm_of(out) == perm_of(b)


def test_normalize_moves_fixed_strand_last():
    out, bounds = normalize_cycles(BraidWord(3, (2,)))
    assert bounds == (0, 2, 3)
    assert perm_of(out) == Permutation.parse("(1 2)", 3)


def test_normalize_stabilizes_to_half():
    out, bounds = normalize_cycles(BraidWord(3, (1,)), min_half=8)
    assert out.strands == 16 and bounds == (0, 8, 16)
    p = perm_of(out)
    assert sorted(len(c) for c in p.cycles(include_fixed=True)) == [8, 8]
    assert set(p.cycles(include_fixed=True)[0]) == set(range(8))


def test_combing_examples():
    assert comb_pure(BraidWord(2, (1, 1))) == [(1, 2, 1)]
    b = artin_Aij(1, 3, 3) * artin_Aij(2, 3, 3)
    assert comb_pure(b) == [(1, 3, 1), (2, 3, 1)]


def test_comb_budget():
    rng = random.Random(1)
    w = BraidWord(6, tuple(rng.choice([1, -1]) * rng.randint(1, 5) for _ in range(60)))
    with pytest.raises(CombingTooLong):
        comb_a_word(pure_to_a_word(make_pure(w)), 6, max_len=3)


def test_pure_to_a_word_rejects_non_pure():
    with pytest.raises(ValueError):
        pure_to_a_word(BraidWord(2, (1,)))


def test_hopf_linking():
    stats = linking_matrix(BraidWord(2, (1, 1)))
    assert stats.components == 2
    assert stats.linking_matrix.tolist() == [[0, 1], [1, 0]]
    assert stats.component_self_linking == (-1, -1)


def test_mirror_negates_linking():
    b = BraidWord(4, (1, 1, 3, -2, 3, 3, 2, 1, 1))
    a, m = linking_matrix(b), linking_matrix(b.mirror())
    assert np.array_equal(a.linking_matrix, -m.linking_matrix)


def test_sub_braid():
    b = BraidWord(3, (1, 2, 2, 1))
    assert sub_braid(b, [0, 2]) == BraidWord(2, (1, 1))


@settings(max_examples=150, deadline=None)
@given(braids(4, 8))
def test_combing_recomposes(b):
    pure = make_pure(b)
    assert perm_of(pure).is_identity()
    runs = comb_pure(pure)
    assert [j for _, j, _ in runs] == sorted(j for _, j, _ in runs)
    assert same_braid(uncomb(runs, pure.strands), pure)


@settings(max_examples=100, deadline=None)
@given(braids(5, 12))
def test_free_action_detects_inverse(b):
    assert same_braid(b * b.inverse(), BraidWord(b.strands))


@settings(max_examples=100, deadline=None)
@given(braids(5, 12), braids(5, 12))
def test_fingerprint_agrees_with_exact_check(a, b):
    assume(a.strands == b.strands)
    assert probably_same_braid(a, b) == same_braid(a, b)


def test_fingerprint_sees_braid_relation():
    assert braid_fingerprint(BraidWord(3, (1, 2, 1))) == braid_fingerprint(BraidWord(3, (2, 1, 2)))
    assert braid_fingerprint(BraidWord(3, (1, 2))) != braid_fingerprint(BraidWord(3, (2, 1)))


def _link_data(b):
    s = linking_matrix(b)
    off = sorted(int(x) for x in s.linking_matrix[np.triu_indices(s.components, 1)])
    return s.components, off, sorted(s.component_self_linking)


@settings(max_examples=60, deadline=None)
@given(braids(5, 10), st.integers(2, 9))
def test_normalize_preserves_link_data(b, half):
    out, bounds = normalize_cycles(b, min_half=half)
    assert _link_data(out) == _link_data(b)
    cycles = perm_of(out).cycles(include_fixed=True)
    assert sorted(len(c) for c in cycles) == sorted(hi - lo for lo, hi in zip(bounds, bounds[1:]))
    if len(bounds) > 2:
        assert bounds[1] >= half and out.strands == 2 * bounds[1]


@settings(max_examples=60, deadline=None)
@given(braids(5, 10), st.data())
def test_grow_block_lengthens_one_cycle(b, data):
    out, bounds = normalize_cycles(b)
    r = data.draw(st.sampled_from(bounds[1:]))
    grown = grow_block(out, r)
    lengths = sorted(hi - lo + (hi == r) for lo, hi in zip(bounds, bounds[1:]))
    assert sorted(len(c) for c in perm_of(grown).cycles(include_fixed=True)) == lengths
    assert _link_data(grown) == _link_data(out)


@settings(max_examples=60, deadline=None)
@given(braids(5, 10))
def test_stabilization_keeps_self_linking(b):
    assert _link_data(stabilize_pos(b)) == _link_data(b)


@settings(max_examples=60, deadline=None)
@given(braids(6, 6), st.data())
def test_realize_pair_inverts_free_action(h, data):
    i = data.draw(st.integers(1, h.strands - 1))
    im = free_action(h)
    u, v = FreeWord.gen(i).substitute(im), FreeWord.gen(i + 1).substitute(im)
    g = realize_pair(u, v, i, h.strands)
    img = free_action(g)
    assert (FreeWord.gen(i).substitute(img), FreeWord.gen(i + 1).substitute(img)) == (u, v)


def _sub_braid_slow(b, keep):
    keep = set(keep)
    at = list(range(b.strands))
    letters = []
    for a in b.letters:
        i = abs(a) - 1
        if at[i] in keep and at[i + 1] in keep:
            rank = sum(1 for p in range(i) if at[p] in keep) + 1
            letters.append(rank if a > 0 else -rank)
        at[i], at[i + 1] = at[i + 1], at[i]
    return BraidWord(max(len(keep), 1), tuple(letters))


@settings(max_examples=100, deadline=None)
@given(braids(7, 20), st.data())
def test_sub_braid_matches_direct_count(b, data):
    keep = data.draw(st.sets(st.integers(0, b.strands - 1), min_size=1))
    assert sub_braid(b, keep) == _sub_braid_slow(b, keep)

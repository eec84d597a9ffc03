import pytest

from coverforge.braid import BraidWord, closure_components, perm_of, same_braid
from coverforge.freegroup import FreeWord
from coverforge.lifting import criterion_general
from coverforge.monodromy import evaluate_word
from coverforge.permutation import Permutation
from coverforge.universal import (
    GOLDEN_TABLES,
    arc_image,
    arc_pair,
    basic_pairs,
    beta_word,
    block_word,
    build_covering_datum,
    construct_stage,
    d_word,
    expected_lift,
    gamma_arc,
    gamma_braid,
    iterate_to_knot,
    lift_tables,
    lifted_letters,
    realizes,
    surgery_arc,
    surgery_checks,
    twist_braid,
)

KNOWN_TABLE_DIFFS = {
    "k=2m and i=2m-1",
    "k=2m+6, i=2m-6",
    "k=2m+7, i=2m-6",
    "k=2m+j, i=2m-6, j not 2,6,7, j<m",
}


@pytest.mark.parametrize("m", [8, 9, 10, 11, 12])
def test_q_has_two_points_per_puncture(m):
    d = build_covering_datum(m)
    assert len(d.q_points) == 4 * m
    punctures = [pt[0] for pt in d.q_points]
    assert all(punctures.count(p) == 2 for p in range(1, 2 * m + 1))
    assert sorted(d.positions.values()) == list(range(1, 4 * m + 1))


def test_named_points():
    d = build_covering_datum(8)
    names = set(d.names.values())
    assert {"v^1_2(1)", "v^9_9(1)"} <= names
    # input strand s sits at chain position m + s
    for s in range(1, 9):
        assert d.names[d.by_position()[8 + s - 1]] == f"v^{8 + s}_{6 + s}({8 + s})"
        assert d.names[d.by_position()[16 + s - 1]] == f"v^{s}_{s + 1}({s})"


def test_small_m_rejected():
    with pytest.raises(ValueError):
        build_covering_datum(7)


@pytest.mark.parametrize("m", [8, 9, 10])
def test_beta_cycle_type(m):
    rep = build_covering_datum(m).rep
    for i in range(1, 2 * m):
        if i == m:
            continue
        p = evaluate_word(rep, beta_word(i, m))
        assert {k: v for k, v in p.cycle_type().items() if k > 1} == {2: 8 * m + 2, 3: 1}
        assert len((p * p).support()) == 3


def test_beta_reflects_to_partner():
    m = 8
    d = build_covering_datum(m)
    s = d.gm.reflection()
    for i in range(1, m):
        mirrored = FreeWord([2 * m + 1 - a if a > 0 else -(2 * m + 1 + a) for a in beta_word(i, m)])
        assert mirrored == beta_word(2 * m - i, m)
        p, q = evaluate_word(d.rep, beta_word(i, m)), evaluate_word(d.rep, mirrored)
        assert all(q(s[v]) == s[p(v)] for v in range(d.rep.degree))


def test_beta_range():
    with pytest.raises(ValueError):
        beta_word(8, 8)
    with pytest.raises(ValueError):
        beta_word(16, 8)


def test_gamma_arcs():
    m = 8
    d = build_covering_datum(m)
    failing = set()
    for i in range(1, 2 * m):
        if i == m:
            continue
        checks = surgery_checks(d, gamma_arc(i, m), i)
        assert criterion_general(d.rep, gamma_arc(i, m), 2) == checks["square_lifts"]
        if not all(checks.values()):
            failing.add(i)
            assert not checks["square_lifts"] and not checks["degrees_1_or_2"]
    assert failing == {6, 2 * m - 6}


@pytest.mark.parametrize("m", [8, 9, 10])
def test_replacement_arcs_pass_every_check(m):
    d = build_covering_datum(m)
    for i in (6, 2 * m - 6):
        arc, extra = surgery_arc(m, i)
        assert extra is not None
        assert all(surgery_checks(d, arc, i).values())


@pytest.mark.parametrize("m", [8, 9, 10, 15])
def test_gamma_braid_realizes_gamma(m):
    for i in range(1, 2 * m):
        if i != m:
            assert realizes(gamma_braid(m, i), gamma_arc(i, m), i)


def test_arc_image_round_trip():
    h = gamma_braid(8, 3)
    assert arc_pair(arc_image(h, 3)) == arc_pair(gamma_arc(3, 8))


def test_golden_tables_have_all_rows():
    assert len(GOLDEN_TABLES) == 23
    assert {t for t, *_ in GOLDEN_TABLES} == {1, 2, 3}


@pytest.mark.parametrize("m", [8, 9, 10])
def test_tables(m):
    rows = lift_tables(build_covering_datum(m))
    asterisk = [r for r in rows if r.case.endswith("*")]
    assert len(asterisk) == 2 and all(r.ok for r in asterisk)
    assert {r.case for r in rows if not r.ok} <= KNOWN_TABLE_DIFFS
    assert sum(r.ok for r in rows) > 0.9 * len(rows)


def test_expected_lift_layout():
    m = 8
    assert expected_lift(m, "alpha_0") == {"bar": (16, 17)}
    assert expected_lift(m, "alpha_8") == {"tilde1": (8, 9), "tilde2": (24, 25)}
    assert expected_lift(m, "alpha_9") == {"tilde": (9, 10), "bar": (25, 26)}
    assert expected_lift(m, "alpha_1") == {"tilde": (17, 18), "bar": (1, 2)}


def test_basic_pairs():
    d = build_covering_datum(8)
    pairs = basic_pairs(d)
    assert len(pairs) == 15 + 1 + 14
    assert all(p.ok for p in pairs)
    first = next(p for p in pairs if p.family == 1 and p.down.letters[0].arc.name == "alpha_9")
    assert sorted((t.exponent, t.degree) for t in first.up) == [(1, 3), (3, 1)]
    with pytest.raises(ValueError):
        basic_pairs(d, replace_failing=False)


def test_block_and_d_words_lift_to_chain_letters():
    m = 8
    for u in range(1, 2 * m):
        if u == m:
            continue
        letters = [a for name, k in block_word(m, u) for a in lifted_letters(m, name, k)]
        copy = 3 * m + u if u < m else u - m
        assert same_braid(BraidWord(4 * m, tuple(letters)), BraidWord(4 * m, (m + u, copy)))
    assert d_word(m, 1, 9)[len(d_word(m, 1, 9)) // 2] == ("alpha_0", 2)


def test_twist_braids_are_conjugates_of_generators():
    m = 8
    for name in ("alpha_0", "alpha_3", "gamma_3", "gamma_12"):
        arc = surgery_arc(m, int(name[6:]))[0] if name.startswith("gamma") else build_covering_datum(m).arcs[name]
        assert perm_of(twist_braid(m, name)) == Permutation.transposition(2 * m, arc.p - 1, arc.q - 1)


def test_stage_on_hopf_link():
    st = construct_stage(BraidWord(2, (1, 1)))
    assert st.m == 8
    assert st.ok, st.checks
    assert closure_components(st.branch_braid) == 1


def test_stage_rejects_knot():
    with pytest.raises(ValueError):
        construct_stage(BraidWord(2, (1,)))


def test_tower_on_knot_is_empty():
    t = iterate_to_knot(BraidWord(3, (1, 2)))
    assert t.stages == [] and t.final == BraidWord(3, (1, 2)) and t.ok


def test_tower_on_unlink():
    t = iterate_to_knot(BraidWord(2))
    assert len(t.stages) == 1 and t.ok
    assert t.to_json()["final_components"] == 1

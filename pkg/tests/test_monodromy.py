from hypothesis import given, settings, strategies as st

from coverforge.freegroup import FreeWord
from coverforge.graph import Edge, EdgeColoredGraph, build_Gm, build_Lm
from coverforge.monodromy import (
    MonodromyRep,
    evaluate_word,
    graph_from_permutations,
    graph_from_rep,
    rep_from_graph,
    walk,
)
from coverforge.permutation import Permutation
from coverforge.universal import beta_word


def test_six_vertex_example():
    edges = [Edge(1, 2, 1), Edge(3, 4, 1), Edge(2, 5, 2), Edge(2, 3, 3), Edge(2, 6, 4)]
    g = EdgeColoredGraph(tuple(range(1, 7)), tuple(edges), 4)
    rep = rep_from_graph(g)
    expected = ["(1 2)(3 4)", "(2 5)", "(2 3)", "(2 6)"]
    assert rep.gens == tuple(Permutation.parse(t, 6) for t in expected)


def test_single_edge():
    assert rep_from_graph(build_Lm(1)).gens == (Permutation.parse("(1 2)", 2),)


def test_gm_generators_count_edges():
    gm = build_Gm(8)
    rep = rep_from_graph(gm.graph)
    assert rep.n == 16 and rep.degree == 545
    for i, g in enumerate(rep.gens, 1):
        assert g.is_involution()
        assert len(g.cycles()) == sum(1 for e in gm.graph.edges if e.color == i)


def test_graph_from_permutations():
    g = graph_from_permutations([Permutation.parse("(1 2)", 2)])
    assert [(e.u, e.v, e.color, e.directed) for e in g.edges] == [(0, 1, 1, False)]
    g = graph_from_permutations([Permutation.parse("(1 2 3)", 3)])
    assert len(g.edges) == 3 and all(e.directed for e in g.edges)


def test_beta_permutation_as_edges():
    rep = rep_from_graph(build_Gm(8).graph)
    perm = evaluate_word(rep, beta_word(10, 8))
    g = graph_from_permutations([perm], tag="beta")
    assert sum(not e.directed for e in g.edges) == 66
    assert sum(e.directed for e in g.edges) == 3
    assert all(e.tag == "beta" for e in g.edges)


def test_empty_word_is_identity():
    rep = rep_from_graph(build_Lm(3))
    assert evaluate_word(rep, FreeWord()).is_identity()


def test_walk_follows_colors_in_order():
    rep = rep_from_graph(build_Lm(4))
    assert walk(rep, 0, [1, 2, 3, 4]) == 4
    assert walk(rep, 0, [2, 1]) == 1


def test_json_round_trip():
    rep = rep_from_graph(build_Lm(4))
    assert MonodromyRep.from_json(rep.to_json()) == rep
    assert rep.is_transitive()


words = st.lists(st.integers(1, 5).flatmap(lambda g: st.sampled_from([g, -g])), max_size=12)


@settings(max_examples=100, deadline=None)
@given(words, words)
def test_evaluation_is_a_homomorphism(u, v):
    rep = rep_from_graph(build_Lm(5))
    assert evaluate_word(rep, u + v) == evaluate_word(rep, u) * evaluate_word(rep, v)


@settings(max_examples=100, deadline=None)
@given(words, st.integers(0, 5))
def test_walk_agrees_with_evaluation(u, s):
    rep = rep_from_graph(build_Lm(5))
    assert walk(rep, s, u) == evaluate_word(rep, u)(s)


def test_rep_round_trips_through_graph():
    rep = rep_from_graph(build_Lm(6))
    assert rep_from_graph(graph_from_rep(rep)) == rep

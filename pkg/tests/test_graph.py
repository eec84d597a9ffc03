import random

import pytest
from hypothesis import given, settings, strategies as st

from coverforge.graph import (
    ColorReflection,
    Edge,
    EdgeColoredGraph,
    VertexName,
    build_Gm,
    build_Lm,
    build_Lm2,
    check_color_symmetry,
    color_subgraph,
    disjoint_union,
    is_consecutive_colored,
    is_tree,
    random_consecutive_tree,
    to_dot,
    validate,
    wedge,
)


def six_vertex_example():
    # x1 = (1 2)(3 4), x2 = (2 5), x3 = (2 3), x4 = (2 6), sheets 1..6
    edges = [Edge(1, 2, 1), Edge(3, 4, 1), Edge(2, 5, 2), Edge(2, 3, 3), Edge(2, 6, 4)]
    return EdgeColoredGraph(tuple(range(1, 7)), tuple(edges), 4)


def test_small_graphs_validate():
    assert validate(build_Lm(2)) == []
    assert validate(six_vertex_example()) == []


def test_two_same_colored_edges_at_a_vertex():
    g = EdgeColoredGraph((0, 1, 2), (Edge(0, 1, 1), Edge(1, 2, 1)))
    assert len(validate(g)) == 1


def test_is_tree():
    assert is_tree(build_Lm(5))
    assert not is_tree(disjoint_union(build_Lm(1), build_Lm(1)))


def test_color_subgraph():
    sub = color_subgraph(build_Lm(4), {1, 2})
    assert len(sub.vertices) == 5
    assert sorted(e.color for e in sub.edges) == [1, 2]
    assert len(sub.components()) == 3
    empty = color_subgraph(build_Lm(4), set())
    assert empty.edges == () and len(empty.vertices) == 5


def test_consecutive():
    assert all(is_consecutive_colored(build_Lm(n)) for n in range(1, 9))
    g = EdgeColoredGraph(tuple(range(4)), (Edge(0, 1, 1), Edge(2, 3, 2)))
    assert not is_consecutive_colored(g, 2)


def test_wedge():
    g = wedge(build_Lm(5), 0, build_Lm(5), 3)
    assert validate(g) == [] and is_tree(g)
    assert is_consecutive_colored(g)
    with pytest.raises(ValueError):
        wedge(build_Lm(5), 2, build_Lm(5), 4)  # colors {2,3} against {4,5}


def test_color_symmetry_of_path():
    m = 6
    g = build_Lm(m)
    assert check_color_symmetry(g, {v: m - v for v in g.vertices}, ColorReflection.reversal(m))
    two = build_Lm(2)
    assert not check_color_symmetry(two, {v: v for v in two.vertices}, ColorReflection.reversal(2))


def test_builders():
    g = build_Lm(2)
    assert len(g.vertices) == 3 and g.colors == {1, 2}
    alt = build_Lm2(4)
    assert len(alt.vertices) == 5
    assert [e.color for e in sorted(alt.edges, key=lambda e: min(e.u, e.v))] == [1, 2, 1, 2]
    assert len(build_Lm(1).edges) == 1


@pytest.mark.parametrize("m", [8, 9, 10, 11, 12])
def test_gm_structure(m):
    gm = build_Gm(m)
    assert len(gm.graph.vertices) == (4 * m + 2) * (2 * m + 1) - (4 * m + 1)
    assert len(gm.graph.edges) == 2 * m * (4 * m + 2)
    assert validate(gm.graph) == []
    assert is_tree(gm.graph)
    assert is_consecutive_colored(gm.graph)
    assert check_color_symmetry(gm.graph, gm.reflection(), gm.color_reflection())


def test_gm_names_resolve():
    gm = build_Gm(8)
    assert gm.resolve(1, 2) == gm.ids[VertexName(1, 2)]
    assert gm.name(gm.resolve(1, 0)) <= VertexName(1, 0)
    with pytest.raises(ValueError):
        build_Gm(7)


def test_json_round_trip():
    g = six_vertex_example()
    assert EdgeColoredGraph.from_json(g.to_json()).edge_keys() == g.edge_keys()


def test_dot_lists_every_edge():
    text = to_dot(build_Lm(3))
    assert text.startswith("graph G {") and text.count(" -- ") == 3


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_random_trees_are_consecutive_trees(seed):
    g = random_consecutive_tree(random.Random(seed))
    assert validate(g) == []
    assert is_tree(g)
    assert is_consecutive_colored(g)
    assert len(g.vertices) <= 40

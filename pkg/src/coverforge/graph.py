"""Edge-colored graphs encoding branched coverings of the disk.

Colors are 1-based: in the linear graph ``L_m`` the edge ``[v_i, v_{i+1}]``
carries color ``i + 1``.  Vertex ids are plain integers.  Tagged edges
(``tag is not None``) record extra loops drawn on top of a covering graph and
are exempt from the proper-coloring rule.
"""

from __future__ import annotations

import json
import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, NamedTuple


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    color: int
    directed: bool = False
    tag: str | None = None

    def key(self) -> tuple:
        a, b = (self.u, self.v) if self.directed else tuple(sorted((self.u, self.v)))
        return (a, b, self.color, self.directed, self.tag)


@dataclass(frozen=True)
class EdgeColoredGraph:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    n_colors: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))

    @property
    def colors(self) -> set[int]:
        return {e.color for e in self.edges if e.tag is None}

    @property
    def plain_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.tag is None and not e.directed]

    def num_colors(self) -> int:
        if self.n_colors is not None:
            return self.n_colors
        return max(self.colors, default=0)

    def colors_at(self, v: int) -> set[int]:
        return {e.color for e in self.plain_edges if v in (e.u, e.v)}

    def neighbours(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for e in self.edges:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        return adj

    def components(self) -> list[list[int]]:
        """Connected components (edge direction ignored), each sorted."""
        adj = self.neighbours()
        seen: set[int] = set()
        out = []
        for v in self.vertices:
            if v in seen:
                continue
            stack, comp = [v], []
            seen.add(v)
            while stack:
                a = stack.pop()
                comp.append(a)
                for b in adj[a]:
                    if b not in seen:
                        seen.add(b)
                        stack.append(b)
            out.append(sorted(comp))
        return out

    def relabel(self, mapping: Mapping[int, int]) -> "EdgeColoredGraph":
        return EdgeColoredGraph(
            tuple(mapping[v] for v in self.vertices),
            tuple(Edge(mapping[e.u], mapping[e.v], e.color, e.directed, e.tag) for e in self.edges),
            self.n_colors,
        )

    def edge_keys(self) -> set[tuple]:
        return {e.key() for e in self.edges}

    def to_json(self) -> dict:
        return {
            "colors": self.num_colors(),
            "vertices": list(self.vertices),
            "edges": [
                {"u": e.u, "v": e.v, "color": e.color, "directed": e.directed, "tag": e.tag}
                for e in self.edges
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "EdgeColoredGraph":
        if isinstance(data, str):
            data = json.loads(data)
        edges = tuple(
            Edge(int(e["u"]), int(e["v"]), int(e["color"]), bool(e.get("directed", False)), e.get("tag"))
            for e in data["edges"]
        )
        return cls(tuple(int(v) for v in data["vertices"]), edges, data.get("colors"))


def validate(graph: EdgeColoredGraph) -> list[str]:
    """Return every violation of the edge-coloring rules; empty means valid."""
    problems = []
    vset = set(graph.vertices)
    if len(vset) != len(graph.vertices):
        problems.append("duplicate vertex ids")
    seen: dict[tuple[int, int], Edge] = {}
    plain_pairs: set[tuple[int, int]] = set()
    for e in graph.edges:
        if e.u not in vset or e.v not in vset:
            problems.append(f"edge {e.u}-{e.v} has an endpoint outside the vertex set")
            continue
        if e.color < 1:
            problems.append(f"edge {e.u}-{e.v} has non-positive color {e.color}")
        if graph.n_colors is not None and e.tag is None and e.color > graph.n_colors:
            problems.append(f"edge {e.u}-{e.v} color {e.color} exceeds {graph.n_colors}")
        if e.tag is not None or e.directed:
            continue
        if e.u == e.v:
            problems.append(f"loop at {e.u}")
            continue
        pair = tuple(sorted((e.u, e.v)))
        if pair in plain_pairs:
            problems.append(f"parallel untagged edges between {pair[0]} and {pair[1]}")
        plain_pairs.add(pair)
        for x in (e.u, e.v):
            other = seen.get((x, e.color))
            if other is not None:
                problems.append(f"vertex {x} meets two edges of color {e.color}")
            seen[(x, e.color)] = e
    return problems


def is_tree(graph: EdgeColoredGraph) -> bool:
    return len(graph.components()) == 1 and len(graph.edges) == len(graph.vertices) - 1


def color_subgraph(graph: EdgeColoredGraph, colors: Iterable[int]) -> EdgeColoredGraph:
    keep = set(colors)
    return EdgeColoredGraph(graph.vertices, tuple(e for e in graph.edges if e.color in keep and e.tag is None), graph.n_colors)


def is_consecutive_colored(graph: EdgeColoredGraph, n: int | None = None) -> bool:
    """Each ``{i, i+1}``-subgraph component is an isolated vertex or a two-edge path colored ``i, i+1``."""
    n = graph.num_colors() if n is None else n
    for i in range(1, n):
        sub = color_subgraph(graph, (i, i + 1))
        by_vertex: dict[int, list[Edge]] = defaultdict(list)
        for e in sub.edges:
            by_vertex[e.u].append(e)
            by_vertex[e.v].append(e)
        for comp in sub.components():
            if len(comp) == 1:
                continue
            edges = {e.key(): e for v in comp for e in by_vertex[v]}
            if len(comp) != 3 or sorted(e.color for e in edges.values()) != [i, i + 1]:
                return False
    return True


def wedge(
    g1: EdgeColoredGraph,
    v1: int,
    g2: EdgeColoredGraph,
    v2: int,
    consecutive: bool = True,
) -> EdgeColoredGraph:
    """One-point union of ``g1`` and ``g2`` gluing ``v2`` onto ``v1``.

    ``g2`` is relabeled to sit above the ids of ``g1``.  With ``consecutive``
    the colors around the two glue points must also differ by at least 2,
    which keeps a consecutive coloring consecutive.
    """
    c1, c2 = g1.colors_at(v1), g2.colors_at(v2)
    clash = c1 & c2
    if clash:
        raise ValueError(f"glue points share colors {sorted(clash)}")
    if consecutive:
        near = sorted({a for a in c1 for b in c2 if abs(a - b) == 1})
        if near:
            raise ValueError(f"glue points carry adjacent colors near {near}")
    offset = max(g1.vertices, default=-1) + 1
    mapping = {v: v + offset for v in g2.vertices}
    mapping[v2] = v1
    moved = g2.relabel(mapping)
    n = None
    if g1.n_colors is not None or g2.n_colors is not None:
        n = max(g1.n_colors or 0, g2.n_colors or 0)
    verts = g1.vertices + tuple(v for v in moved.vertices if v != v1)
    return EdgeColoredGraph(verts, g1.edges + moved.edges, n)


@dataclass(frozen=True)
class ColorReflection:
    n: int
    map: tuple[int, ...]  # map[c - 1] is the image of color c

    def __post_init__(self):
        if sorted(self.map) != list(range(1, self.n + 1)):
            raise ValueError("color reflection must permute 1..n")
        if any(self.map[self.map[c] - 1] != c + 1 for c in range(self.n)):
            raise ValueError("color reflection must be an involution")

    def __call__(self, c: int) -> int:
        return self.map[c - 1]

    @classmethod
    def reversal(cls, n: int) -> "ColorReflection":
        """The reflection ``c -> n + 1 - c``."""
        return cls(n, tuple(n + 1 - c for c in range(1, n + 1)))


def check_color_symmetry(graph: EdgeColoredGraph, s: Mapping[int, int] | Callable[[int], int], f: ColorReflection) -> bool:
    sv = s if callable(s) else s.__getitem__
    if any(sv(sv(v)) != v for v in graph.vertices):
        return False
    if sorted(sv(v) for v in graph.vertices) != sorted(graph.vertices):
        return False
    keys = {(min(e.u, e.v), max(e.u, e.v), e.color) for e in graph.plain_edges}
    for a, b, c in keys:
        x, y = sv(a), sv(b)
        if (min(x, y), max(x, y), f(c)) not in keys:
            return False
    return True


def build_Lm(m: int) -> EdgeColoredGraph:
    """The path ``v_0 - ... - v_m`` with edge ``[v_i, v_{i+1}]`` colored ``i + 1``."""
    if m < 1:
        raise ValueError("L_m needs m >= 1")
    return EdgeColoredGraph(tuple(range(m + 1)), tuple(Edge(i, i + 1, i + 1) for i in range(m)), m)


def build_Lm2(m: int) -> EdgeColoredGraph:
    """The path with ``m`` edges colored alternately 1, 2, 1, ..."""
    if m < 1:
        raise ValueError("L_(m,2) needs m >= 1")
    return EdgeColoredGraph(tuple(range(m + 1)), tuple(Edge(i, i + 1, 1 + i % 2) for i in range(m)), 2)


def disjoint_union(g1: EdgeColoredGraph, g2: EdgeColoredGraph) -> EdgeColoredGraph:
    offset = max(g1.vertices, default=-1) + 1
    moved = g2.relabel({v: v + offset for v in g2.vertices})
    n = max(g1.num_colors(), g2.num_colors())
    return EdgeColoredGraph(g1.vertices + moved.vertices, g1.edges + moved.edges, n)


class VertexName(NamedTuple):
    """``v_index`` in the copy ``L^copy``."""

    copy: int
    index: int

    def __str__(self) -> str:
        return f"v^{self.copy}_{self.index}"


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            lo, hi = min(ra, rb), max(ra, rb)
            self.parent[hi] = lo


def gm_identifications(m: int) -> list[tuple[str, VertexName, VertexName]]:
    """The gluing rules I1-I6 as explicit vertex pairs."""
    V = VertexName
    pairs = []
    for i in range(1, m):
        pairs.append(("I1", V(i, i - 1), V(i + 1, i + 2)))
    for i in range(m + 1, 2 * m):
        pairs.append(("I2", V(i, i - 2), V(i + 1, i + 1)))
    pairs.append(("I3", V(1, 2), V(2 * m, 2 * m - 2)))
    for i in range(1, m + 1):
        pairs.append(("I4", V(i, i), V(2 * m + i, 2 * m - 5)))
    for i in range(m + 1, 2 * m + 1):
        pairs.append(("I5", V(i, i - 1), V(2 * m + i, 5)))
    pairs.append(("I6", V(1, 0), V(4 * m + 1, 6)))
    pairs.append(("I6", V(4 * m + 2, 2 * m - 6), V(2 * m, 2 * m)))
    return pairs


@dataclass(frozen=True)
class GmGraph:
    """The glued tree ``G_m`` with its vertex-name resolver."""

    m: int
    graph: EdgeColoredGraph
    ids: dict = field(repr=False)  # VertexName -> vertex id
    names: tuple[VertexName, ...] = field(repr=False)  # vertex id -> least name in its class
    classes: tuple[tuple[VertexName, ...], ...] = field(repr=False)

    @property
    def n_copies(self) -> int:
        return 4 * self.m + 2

    def resolve(self, copy: int, index: int) -> int:
        return self.ids[VertexName(copy, index)]

    def name(self, vertex: int) -> VertexName:
        return self.names[vertex]

    def reflection(self) -> dict[int, int]:
        """Vertex involution pairing ``L^i <-> L^{2m+1-i}``, ``L^{2m+i} <-> L^{4m+1-i}``,
        ``L^{4m+1} <-> L^{4m+2}`` and reversing each copy."""
        m = self.m

        def mirror_copy(k: int) -> int:
            if k <= 2 * m:
                return 2 * m + 1 - k
            if k <= 4 * m:
                return 6 * m + 1 - k
            return 8 * m + 3 - k

        s = {}
        for name, vid in self.ids.items():
            img = self.ids[VertexName(mirror_copy(name.copy), 2 * m - name.index)]
            if s.setdefault(vid, img) != img:
                raise AssertionError("copy-pairing reflection does not descend to G_m")
        return s

    def color_reflection(self) -> ColorReflection:
        return ColorReflection.reversal(2 * self.m)

    def h_vertices(self) -> list[int]:
        """The vertex set ``VH``: three consecutive vertices from each of ``L^1..L^{2m}``."""
        m = self.m
        names = []
        for i in range(m + 1, 2 * m + 1):
            names += [VertexName(i, i - 2), VertexName(i, i - 1), VertexName(i, i)]
        for i in range(1, m + 1):
            names += [VertexName(i, i - 1), VertexName(i, i), VertexName(i, i + 1)]
        return sorted({self.ids[n] for n in names})

    def h_subgraph(self) -> EdgeColoredGraph:
        """Subgraph induced by ``VH``."""
        keep = set(self.h_vertices())
        edges = tuple(e for e in self.graph.edges if e.u in keep and e.v in keep)
        return EdgeColoredGraph(tuple(sorted(keep)), edges, self.graph.n_colors)


def build_Gm(m: int) -> GmGraph:
    """Glue ``4m + 2`` copies of ``L_{2m}`` along I1-I6 (``m >= 8``)."""
    if m < 8:
        raise ValueError("G_m is defined for m >= 8")
    n_copies, length = 4 * m + 2, 2 * m
    uf = _UnionFind()
    all_names = [VertexName(k, i) for k in range(1, n_copies + 1) for i in range(length + 1)]
    for name in all_names:
        uf.find(name)
    for _, a, b in gm_identifications(m):
        uf.union(a, b)
    classes_by_root: dict[VertexName, list[VertexName]] = defaultdict(list)
    for name in all_names:
        classes_by_root[uf.find(name)].append(name)
    roots = sorted(classes_by_root)
    root_id = {r: i for i, r in enumerate(roots)}
    ids = {name: root_id[uf.find(name)] for name in all_names}
    edges = []
    seen = set()
    for k in range(1, n_copies + 1):
        for i in range(length):
            a, b = ids[VertexName(k, i)], ids[VertexName(k, i + 1)]
            key = (min(a, b), max(a, b))
            if key in seen or a == b:
                raise AssertionError(f"identifications merged edge {key} of copy {k}")
            seen.add(key)
            edges.append(Edge(a, b, i + 1))
    graph = EdgeColoredGraph(tuple(range(len(roots))), tuple(edges), length)
    classes = tuple(tuple(sorted(classes_by_root[r])) for r in roots)
    return GmGraph(m, graph, ids, tuple(roots), classes)


_PALETTE = [
    "red", "blue", "green", "orange", "purple", "brown", "magenta", "cyan",
    "gold", "gray40", "darkgreen", "navy", "maroon", "olive", "teal", "black",
]


def to_dot(graph: EdgeColoredGraph, labels: Mapping[int, str] | None = None, name: str = "G") -> str:
    """Graphviz text.  Edges at each vertex are emitted in increasing color
    order, the order a planar drawing lists them clockwise."""
    lines = [f"graph {name} {{", "  node [shape=point];"]
    for v in graph.vertices:
        label = labels[v] if labels and v in labels else None
        lines.append(f'  {v} [xlabel="{label}"];' if label else f"  {v};")
    for e in sorted(graph.edges, key=lambda e: (e.color, e.u, e.v)):
        pen = _PALETTE[(e.color - 1) % len(_PALETTE)]
        attrs = [f'color="{pen}"', f'label="{e.tag or e.color}"']
        if e.directed:
            attrs.append("dir=forward")
        if e.tag:
            attrs.append("style=dashed")
        lines.append(f"  {e.u} -- {e.v} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def colored_path(first: int, last: int) -> EdgeColoredGraph:
    """Path ``v_0 .. v_k`` whose edges carry the colors ``first .. last`` in order."""
    k = last - first + 1
    return EdgeColoredGraph(tuple(range(k + 1)), tuple(Edge(j, j + 1, first + j) for j in range(k)))


def random_consecutive_tree(rng: random.Random, max_vertices: int = 40, max_color: int = 8) -> EdgeColoredGraph:
    """Wedge copies of ``L_n`` (random ``n``) while the colors at the glue
    points stay at least 2 apart, so the result is consecutive-colored."""
    n = rng.randint(2, max_color)
    piece = build_Lm(n)
    g = piece
    for _ in range(200):
        if len(g.vertices) + n > max_vertices:
            break
        try:
            g = wedge(g, rng.choice(g.vertices), piece, rng.choice(piece.vertices))
        except ValueError:
            continue
    return g

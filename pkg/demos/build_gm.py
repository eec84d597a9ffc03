"""Build the glued tree G_m and print its basic invariants."""

import sys

from coverforge.graph import build_Gm, check_color_symmetry, is_consecutive_colored, is_tree

m = int(sys.argv[1]) if len(sys.argv) > 1 else 8
gm = build_Gm(m)
g = gm.graph
print(f"G_{m}: {len(g.vertices)} vertices, {len(g.edges)} edges, {g.num_colors()} colors")
print("tree:", is_tree(g))
print("consecutive coloring:", is_consecutive_colored(g))
print("color symmetry:", check_color_symmetry(g, gm.reflection(), gm.color_reflection()))
v = gm.resolve(m + 1, m + 1)
print(f"v^{m + 1}_{m + 1} is vertex {v}, least name {gm.name(v)}")

"""Which powers of the half twist on a standard arc lift to the cover of L_(m,2)?"""

from coverforge.graph import build_Lm2
from coverforge.lifting import ArcSpec, lifts_rel_boundary, min_lifting_exponent
from coverforge.monodromy import rep_from_graph

for m in range(1, 6):
    rep = rep_from_graph(build_Lm2(m))
    arc = ArcSpec.standard(1)
    top = 3 * (m + 1)
    report = min_lifting_exponent(rep, arc, cap=top)
    lifts = [k for k in range(1, top + 1) if lifts_rel_boundary(rep, arc, k, cap=top)]
    degrees = sorted(c.degree for c in report.components)
    print(f"m={m}: component degrees {degrees}, lifts at k={lifts}, least {report.min_exponent}")

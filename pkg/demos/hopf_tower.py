"""Turn the Hopf link into a knot by one stage of the branched-cover construction."""

import json

from coverforge.braid import BraidWord, closure_components
from coverforge.universal import iterate_to_knot

hopf = BraidWord(2, (1, 1))
tower = iterate_to_knot(hopf)
print("input components:", closure_components(hopf))
for n, stage in enumerate(tower.stages, 1):
    print(f"stage {n}: m={stage.m}, {stage.components_before} -> {stage.components_after} components")
    print(json.dumps(stage.checks, indent=1))
print("final branch braid has", tower.final.strands, "strands; knot:", tower.final_components == 1)

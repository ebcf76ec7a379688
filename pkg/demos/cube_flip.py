"""A (2,2) flip read off a 4-dimensional polytope, plus its fan-side shadow.

Run with ``python3 demos/cube_flip.py``.
"""

import json
import pathlib

from qtoric.cli import parse_scalar, polytope_from_json
from qtoric.fan_cobordism import cobordism_from_polytope, cobordism_index, merged_face_counts, transition_fan
from qtoric.polytopes import (
    catastrophe_polytope,
    classify_cobordism,
    cobordism_surgery,
    flip_index,
    normal_fan,
    slice_polytope,
    transition_polytope,
)

DATA = pathlib.Path(__file__).parent / "data"
W = polytope_from_json(json.loads((DATA / "cube_flip.json").read_text()))
P, Q = (0, 0, 0, 1), (0, 0, 0, -1)

print("W:", len(W.vertices), "vertices,", len(W.facets), "facets, f-vector", W.f_vector())
cob = classify_cobordism(W, P, Q)
print("kind:", cob.kind, " interior vertices:", [i + 1 for i in cob.interior_vertices])
a, b = flip_index(cob)
print("index:", (a, b))
print("surgery:", cobordism_surgery(cob, 0))

print("\nslices along the last axis")
for t in ("-1/2", "0", "1/2"):
    S = slice_polytope(W, parse_scalar(t))
    print(f"  t={t:>4}: {len(S.vertices)} vertices, simple={S.is_simple()}, non-simple={S.non_simple_vertices()}")

C = catastrophe_polytope(cob)
T = transition_polytope(cob)
print("\ncatastrophe slice:", len(C.vertices), "vertices; transition:", len(T.vertices), "vertices, simple", T.is_simple())
print("normal fan of the transition:", len(normal_fan(T).max_cones), "maximal cones")

fc = cobordism_from_polytope(W, P, Q)
print("\nfan cobordism index:", cobordism_index(fc))
print("merged cone face counts:", merged_face_counts(fc))
tr = transition_fan(fc)
print("merged cone subdivided into", len(tr.subdivision), "cones; diamond edges valid:", all(m.meta["report"].ok for m in tr.edges.values()))

"""The cobordism between P^2 and its blow-up, and a walk to an irrational weight.

Run with ``python3 demos/p2_cobordism.py``.
"""

from fractions import Fraction

from qtoric.exactreal import sqrt_field, to_float
from qtoric.fan_core import Calibration, QuantumFan
from qtoric.fan_cobordism import (
    blowup_cobordism,
    catastrophe,
    cobordism_index,
    deform_cobordism,
    ray_counts,
    reverse_cobordism,
    slice_family,
    transition_fan,
    validate_cobordism,
)

root2 = sqrt_field(2).gen()
p2 = QuantumFan(Calibration([(1, 0), (0, 1), (-1, -1), (0, -1)], {3}), [{0, 1}, {1, 2}, {2, 0}])

c = blowup_cobordism(p2, (2, 0), (1, 1))
print("valid:", validate_cobordism(c).ok)
print("index (a, b):", cobordism_index(c), " reversed:", cobordism_index(reverse_cobordism(c)))
print("ray counts:", ray_counts(c))
print("total fan has", len(c.total.max_cones), "maximal cones")

cat = catastrophe(c)
print("\nmerged cone at t = 0 (1-based):", sorted(j + 1 for j in cat.merged))
for t in (-1, 0, 1):
    fan = slice_family(c, t)
    print(f"  slice t={t:>2}: {sorted(sorted(j + 1 for j in s) for s in fan.max_cones)}")

tr = transition_fan(c)
print("\ntransition fan subdivides the merged cone into", len(tr.subdivision), "cones")
for name, m in sorted(tr.edges.items()):
    print(f"  {name:<20} birational: {m.meta['report'].ok}")

print("\n== moving the new ray from (0,-1) toward (sqrt2-1, -1); t is sqrt 2")
for k in range(1, 7):
    eps = Fraction(1, 2**k)
    cols = [(1, 0), (0, 1), (-1, -1), (eps * (root2 - 1), -1)]
    d = deform_cobordism(c, cols, side=1)
    dist = d.meta["frobenius_sq"]
    print(f"  eps=1/{2**k:<3} index {cobordism_index(d)}  |lift|^2 / eps^2 = {dist / (eps * eps)}  (~{to_float(dist):.6f})")

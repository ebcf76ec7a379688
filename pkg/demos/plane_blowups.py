"""Weighted blow-ups of the plane cone, from integer weights to sqrt(2).

Run with ``python3 demos/plane_blowups.py``.
"""

from fractions import Fraction

from qtoric.blowup import (
    blowup_fibers_reduced,
    blown_up_fan,
    fiber_strata,
    irrational_blowup,
    is_natural_blowup_valid,
    rational_zigzag,
    standard_plane_spec,
)
from qtoric.exactreal import sqrt_field
from qtoric.fan_maps import validate_birational

root2 = sqrt_field(2).gen()


def show(v):
    return "(" + ", ".join(str(x) for x in v) + ")"


print("== which weights give an honest toric morphism? (t is sqrt 2)")
for w in [(1, 1), (2, 3), (Fraction(1, 2), 1), (1, root2)]:
    spec = standard_plane_spec(w)
    fan = blown_up_fan(spec)
    print(f"  weights {show(w):<10} new ray {show(spec.alpha()):<10} cones {len(fan.max_cones)}  natural: {is_natural_blowup_valid(spec)}")

# the irrational one still exists as a birational map of quantum fans
b = irrational_blowup(standard_plane_spec((1, root2)))
report, witness = validate_birational(b)
print("\n== sqrt(2) blow-up as a birational morphism")
print("  valid:", report.ok, " exceptional rays (1-based):", sorted(j + 1 for j in witness.source_exceptional))

print("\n== rational weights factor through a common denominator")
legs = rational_zigzag((Fraction(1, 2), Fraction(2, 3)))
print(f"  N = {legs.N}; dashed map column: {show(legs.H.column(2))}")

print("\n== fibers of monomial maps")
for stratum in fiber_strata([[2, 0], [1, 3]], None):
    print("  over the torus:", stratum.descriptor)
for stratum in fiber_strata([[0, 2], [3, 0]], [1]):
    print("  over (0, w2):  ", stratum.descriptor)

print("\n== reduced exceptional fibers")
for v in [(1, 1), (1, 2), (1, 1, 1), (2, 2, 1)]:
    print(f"  {v}: {blowup_fibers_reduced(v)}")

"""Listing candidate singular hyperplanes and probing one of them.

Run: python3 demos/singularity_atlas.py
"""
from mzeta import (PrincipalPattern, Shape, cancellation_check, character, hyperplanes_l,
                   hyperplanes_zeta, principal_character, singular_planes_at)


def show(planes):
    for p in planes:
        lhs = " + ".join(f"s{i}" for i in p.subset)
        print(f"  {lhs} = {p.constant:<3d} [{p.family}]")


print("shape (1,2), constants within 3:")
show(hyperplanes_zeta(Shape(1, 2), 3))

print("\nshape (2,3), constants within 1:")
show(hyperplanes_zeta(Shape(2, 3), 1))

# The enumeration is bounded, but membership is decided by family predicates,
# so far-away planes are still recognised.
print("\nplanes through (1, 2, -43):")
show(singular_planes_at("zeta", Shape(1, 2), [1, 2, -43]))

# With characters only principal ones contribute poles.
chi = character(4, 1)
print("\nL-version, both characters non-principal mod 4:", hyperplanes_l(Shape(1, 2), PrincipalPattern.of([chi, chi]), 3))
print("L-version, last one principal:")
show(hyperplanes_l(Shape(1, 2), PrincipalPattern.of([chi, principal_character(4)]), 3))

# Approaching s_3 = 1 the zeta version blows up like 1/t, the L version stays finite.
plane = hyperplanes_zeta(Shape(1, 2), 1)[0]
for kind, chis in (("zeta", None), ("L", [chi, chi])):
    rep = cancellation_check(kind, Shape(1, 2), plane, [2, 2, 1], chis)
    print(f"\n{kind}: pole order near {plane.subset} = {plane.constant}: {rep.pole_order_raw:.3f}"
          f"  bounded product: {rep.bounded_product}")

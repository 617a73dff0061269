"""Lifting a holomorphic Poisson structure to the blow-up, and a structure that refuses.

Run: python demos/02_poisson_blowup.py
"""

from gcx.errors import NotDegenerate
from gcx.liealg import LieAlgebraSC
from gcx.poisson import (
    Center,
    HoloBivector,
    conormal_algebra,
    exceptional_divisor_poisson,
    lift_poisson,
    linear_poisson,
    submanifold_conditions,
    verify_lift,
)
from gcx.poly import Chart, Poly

c2 = Chart((), ("z1", "z2"))
sigma = HoloBivector(c2, {("z1", "z2"): Poly.gen(c2, "z1")})
Z = Center(c2, ("z1", "z2"))
print("sigma:", sigma)
print("conditions:", submanifold_conditions(sigma, Z).to_dict())
print("conormal Lie algebra at the origin:", conormal_algebra(sigma, Z))

atlas = lift_poisson(sigma, Z)
for ch in atlas.to_dict()["charts"]:
    print(f"chart {ch['index']}: coords {ch['coords']}, brackets {ch['brackets']}")
print("pushforward and overlaps agree:", bool(verify_lift(sigma, atlas)))
print("exceptional divisor is Poisson:", exceptional_divisor_poisson(atlas))

# so(3): the origin is a Poisson submanifold but the conormal algebra is not degenerate
c3 = Chart((), ("z1", "z2", "z3"))
so3 = linear_poisson(c3, LieAlgebraSC.so3().c)
try:
    lift_poisson(so3, Center(c3, c3.holo_coords))
except NotDegenerate as exc:
    print("\nso(3):", exc, exc.details)

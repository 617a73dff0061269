"""Pure spinors of the three standard structures and how their type jumps.

Run: python demos/01_spinors_and_types.py
"""

from gcx.exterior import Form, PolyVector
from gcx.gca import annihilator, nondegenerate_at, standard_structure, structure_convert, type_at
from gcx.poly import Chart, Poly

# symplectic R^4
r4 = Chart(("x1", "x2", "x3", "x4"))
omega = Form.blade(r4, ("x1", "x2")) + Form.blade(r4, ("x3", "x4"))
J, line = standard_structure("symplectic", r4, omega=omega)
p = {"x1": 1, "x2": 0, "x3": 2, "x4": -1}
print("symplectic spinor:", line.generator)
print("  pure:", annihilator(line.generator, p)[1], " nondegenerate:", nondegenerate_at(line.generator, p))
print("  type from spinor / from J:", type_at(line, p), type_at(J, p))
print("  Poisson bivector of J:", structure_convert("poisson_from_j", J, p))

# holomorphic Poisson C^2 with sigma = z1 d/dz1 ^ d/dz2
c2 = Chart((), ("z1", "z2"))
sigma = PolyVector.blade(c2, ("z1", "z2"), Poly.gen(c2, "z1"))
J, line = standard_structure("holo_poisson", c2, sigma=sigma)
print("\nholomorphic Poisson spinor exp(sigma) dz1 dz2:", line.generator)
for pt in ({"z1": 1, "z2": 0}, {"z1": 0, "z2": 1}):
    print(f"  at {pt}: type {type_at(line, pt)} (J says {type_at(J, pt)})")
print("  the type jumps from 0 to 2 on z1 = 0; it never equals 1")

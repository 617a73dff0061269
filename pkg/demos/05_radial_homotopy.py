"""A primitive for a closed form that vanishes along the zero section.

Run: python demos/05_radial_homotopy.py
"""

from gcx.exterior import ext_d, radial_homotopy, vanishes_along_base
from gcx.parse import parse_expr
from gcx.poly import Chart

ch = Chart(("x",), ("z",))
beta = parse_expr("z*zbar*x*dx + z^2*dzbar", ch, "form")
alpha = ext_d(beta)
eta = radial_homotopy(alpha, ["z"])
print("alpha =", alpha)
print("eta   =", eta)
print("d eta == alpha:", ext_d(eta) == alpha)
print("eta vanishes to second order along z = 0:", vanishes_along_base(eta, ["z"], order=2))

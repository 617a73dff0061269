"""Degenerate Lie algebras: only abelian ones and the model [f, e_i] = e_i.

Run: python demos/03_lie_algebras.py
"""

from gcx.liealg import LieAlgebraSC, change_basis, classify_degenerate, degeneracy, degeneracy_field_compare

for name, g in [("so(3)", LieAlgebraSC.so3()), ("heisenberg", LieAlgebraSC.heisenberg()),
                ("model(4)", LieAlgebraSC.model(4))]:
    print(f"{name:>10}: {degeneracy(g).to_dict()}")

# a model algebra hidden behind a basis change is still recognised
P = [[1, 2, 0], [0, 1, 1], [1, 0, 1]]
g = change_basis(LieAlgebraSC.model(3), P)
print("\ndisguised algebra:", g)
print("classification:", classify_degenerate(g).to_dict())

# the complex model algebra is degenerate, its underlying real algebra is not
print("\nfield comparison for complex model(2):", degeneracy_field_compare(LieAlgebraSC.model(2)).to_dict())

"""Lie algebras given by structure constants, and their degeneracy.

``c[i][j][m]`` is the ``e_m`` coefficient of ``[e_i, e_j]``.  A Lie
algebra is degenerate when ``x^y^z -> [x,y]z + [y,z]x + [z,x]y`` is the
zero map into the symmetric square.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .errors import InvalidInput, NotDegenerateInput, NotJacobi
from .poly import ONE, ZERO, GaussRat, format_scalar, format_terms

Vec = List[GaussRat]


class LieAlgebraSC:
    """Finite-dimensional Lie algebra over the reals or the complex numbers."""

    def __init__(self, n: int, constants, field: str = "complex"):
        if field not in ("real", "complex"):
            raise InvalidInput("field must be 'real' or 'complex'")
        self.n = n
        self.field = field
        c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        if isinstance(constants, dict):
            for (i, j), vec in constants.items():
                for m, v in enumerate(vec):
                    c[i][j][m] = GaussRat.coerce(v)
                    c[j][i][m] = -GaussRat.coerce(v)
        else:
            for i in range(n):
                for j in range(n):
                    for m in range(n):
                        c[i][j][m] = GaussRat.coerce(constants[i][j][m])
        for i in range(n):
            for j in range(n):
                for m in range(n):
                    if c[i][j][m] != -c[j][i][m]:
                        raise InvalidInput(f"structure constants not antisymmetric at ({i},{j},{m})")
                    if field == "real" and not c[i][j][m].is_real():
                        raise InvalidInput("real Lie algebra with complex structure constants")
        self.c = c

    # construction helpers --------------------------------------------
    @classmethod
    def from_brackets(cls, n: int, brackets: Dict[Tuple[int, int], Dict[int, object]], field: str = "complex"):
        """``brackets[(i, j)] = {m: coeff}`` for ``i != j`` (0-based)."""
        c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for (i, j), img in brackets.items():
            for m, v in img.items():
                c[i][j][m] = c[i][j][m] + GaussRat.coerce(v)
                c[j][i][m] = c[j][i][m] - GaussRat.coerce(v)
        return cls(n, c, field)

    @classmethod
    def abelian(cls, n: int, field: str = "complex"):
        return cls(n, [[[0] * n for _ in range(n)] for _ in range(n)], field)

    @classmethod
    def model(cls, n: int, field: str = "complex"):
        """``e_0..e_{n-2}`` and ``f = e_{n-1}`` with ``[f, e_i] = e_i``."""
        f = n - 1
        return cls.from_brackets(n, {(f, i): {i: 1} for i in range(n - 1)}, field)

    @classmethod
    def heisenberg(cls, field: str = "complex"):
        return cls.from_brackets(3, {(0, 1): {2: 1}}, field)

    @classmethod
    def so3(cls, field: str = "complex"):
        return cls.from_brackets(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}}, field)

    # algebra -------------------------------------------------------------
    def bracket(self, x: Sequence, y: Sequence) -> Vec:
        n = self.n
        out = [ZERO] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j] or i == j:
                    continue
                f = x[i] * y[j]
                row = self.c[i][j]
                for m in range(n):
                    if row[m]:
                        out[m] = out[m] + f * row[m]
        return out

    def basis(self, i: int) -> Vec:
        return [ONE if k == i else ZERO for k in range(self.n)]

    def is_abelian(self) -> bool:
        return not any(x for plane in self.c for row in plane for x in row)

    def scaled(self, t) -> "LieAlgebraSC":
        t = GaussRat.coerce(t)
        return LieAlgebraSC(self.n, [[[x * t for x in row] for row in plane] for plane in self.c], self.field)

    def __eq__(self, other):
        return isinstance(other, LieAlgebraSC) and self.n == other.n and self.c == other.c

    def __str__(self):
        parts = []
        for i, j in combinations(range(self.n), 2):
            img = self.c[i][j]
            if any(img):
                txt = format_terms([(f"e{m + 1}", v) for m, v in enumerate(img) if v])
                parts.append(f"[e{i + 1},e{j + 1}] = {txt}")
        return "; ".join(parts) or "abelian"

    def __repr__(self):
        return f"LieAlgebraSC(n={self.n}, {self})"


# ----------------------------------------------------------------------
# Jacobi and degeneracy
# ----------------------------------------------------------------------

@dataclass
class JacobiSC:
    ok: bool
    triple: Optional[Tuple[int, int, int]] = None
    value: Optional[str] = None

    def __bool__(self):
        return self.ok


def jacobi_sc(g: LieAlgebraSC) -> JacobiSC:
    for i, j, m in combinations(range(g.n), 3):
        a, b, c = g.basis(i), g.basis(j), g.basis(m)
        s = [
            x + y + z
            for x, y, z in zip(g.bracket(g.bracket(a, b), c), g.bracket(g.bracket(b, c), a), g.bracket(g.bracket(c, a), b))
        ]
        if any(s):
            return JacobiSC(False, (i + 1, j + 1, m + 1), vector_str(s))
    return JacobiSC(True)


def vector_str(v: Sequence[GaussRat]) -> str:
    return format_terms([(f"e{m + 1}", x) for m, x in enumerate(v) if x])


def sym_product(u: Sequence, w: Sequence) -> Dict[Tuple[int, int], GaussRat]:
    """``u w`` in the basis ``e_p e_q`` (``p <= q``) of the symmetric square."""
    n = len(u)
    out: Dict[Tuple[int, int], GaussRat] = {}
    for p in range(n):
        if not u[p]:
            continue
        for q in range(n):
            if not w[q]:
                continue
            key = (p, q) if p <= q else (q, p)
            out[key] = out.get(key, ZERO) + u[p] * w[q]
    return {k: v for k, v in out.items() if v}


def sym_add(*terms: Dict[Tuple[int, int], GaussRat]) -> Dict[Tuple[int, int], GaussRat]:
    out: Dict[Tuple[int, int], GaussRat] = {}
    for t in terms:
        for k, v in t.items():
            out[k] = out.get(k, ZERO) + v
    return {k: v for k, v in out.items() if v}


def sym_str(s: Dict[Tuple[int, int], GaussRat]) -> str:
    items = []
    for (p, q), v in sorted(s.items()):
        mono = f"e{p + 1}^2" if p == q else f"e{p + 1}*e{q + 1}"
        items.append((mono, v))
    return format_terms(items)


@dataclass
class DegeneracyResult:
    degenerate: bool
    obstructions: Dict[Tuple[int, int, int], Dict[Tuple[int, int], GaussRat]] = field(default_factory=dict)

    def __bool__(self):
        return self.degenerate

    def to_dict(self) -> dict:
        return {
            "degenerate": self.degenerate,
            "obstructions": {
                f"e{i + 1}^e{j + 1}^e{m + 1}": sym_str(s) for (i, j, m), s in sorted(self.obstructions.items())
            },
        }


def degeneracy_map(g: LieAlgebraSC, x, y, z) -> Dict[Tuple[int, int], GaussRat]:
    return sym_add(
        sym_product(g.bracket(x, y), z),
        sym_product(g.bracket(y, z), x),
        sym_product(g.bracket(z, x), y),
    )


def degeneracy(g: LieAlgebraSC, check_jacobi: bool = True) -> DegeneracyResult:
    """Evaluate the degeneracy map on every basis triple ``i < j < m``."""
    if check_jacobi:
        res = jacobi_sc(g)
        if not res:
            raise NotJacobi("structure constants fail the Jacobi identity", triple=list(res.triple), value=res.value)
    obs = {}
    for i, j, m in combinations(range(g.n), 3):
        img = degeneracy_map(g, g.basis(i), g.basis(j), g.basis(m))
        if img:
            obs[(i, j, m)] = img
    return DegeneracyResult(not obs, obs)


# ----------------------------------------------------------------------
# classification
# ----------------------------------------------------------------------

@dataclass
class Classification:
    kind: str  # "abelian", "model" or "failure"
    n: int
    basis: Optional[List[Vec]] = None  # model basis e_1..e_{n-1}, f as vectors
    witness: Optional[str] = None

    def label(self) -> str:
        return f"model({self.n})" if self.kind == "model" else self.kind

    def to_dict(self) -> dict:
        out = {"classification": self.label()}
        if self.basis is not None:
            out["basis"] = [vector_str(v) for v in self.basis]
        if self.witness:
            out["witness"] = self.witness
        return out


def classify_degenerate(g: LieAlgebraSC, check: bool = True) -> Classification:
    """Abelian, or the model algebra ``[f, e_i] = e_i``, or a concrete violation."""
    if check and not degeneracy(g):
        raise NotDegenerateInput("algebra is not degenerate")
    n = g.n
    if g.is_abelian():
        return Classification("abelian", n)
    images = [g.bracket(g.basis(i), g.basis(j)) for i, j in combinations(range(n), 2)]
    D = linalg.row_space([v for v in images if any(v)])
    if len(D) != n - 1:
        return Classification("failure", n, witness=f"derived algebra has dimension {len(D)}, expected {n - 1}")
    for a, b in combinations(D, 2):
        if any(g.bracket(a, b)):
            return Classification("failure", n, witness="derived algebra is not abelian")
    f = next(g.basis(i) for i in range(n) if not linalg.in_span(g.basis(i), D))
    lam = None
    for d in D:
        img = g.bracket(f, d)
        # ad_f d must be a multiple of d
        k = next(p for p in range(n) if d[p])
        t = img[k] / d[k]
        if [t * x for x in d] != img:
            return Classification("failure", n, witness="ad_f is not scalar on the derived algebra")
        if lam is None:
            lam = t
        elif t != lam:
            return Classification("failure", n, witness="ad_f has distinct eigenvalues on the derived algebra")
    if not lam:
        return Classification("failure", n, witness="ad_f vanishes on the derived algebra")
    f = [x / lam for x in f]
    return Classification("model", n, basis=[list(d) for d in D] + [f])


# ----------------------------------------------------------------------
# basis change, complexification and realification
# ----------------------------------------------------------------------

def change_basis(g: LieAlgebraSC, P: Sequence[Sequence], field: Optional[str] = None) -> LieAlgebraSC:
    """Structure constants in the basis ``e'_i = sum_k P[k][i] e_k``."""
    n = g.n
    P = [[GaussRat.coerce(x) for x in row] for row in P]
    Pinv = linalg.inverse(P)
    if Pinv is None:
        raise InvalidInput("basis change matrix is singular")
    cols = [[P[k][i] for k in range(n)] for i in range(n)]
    c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            img = linalg.matvec(Pinv, g.bracket(cols[i], cols[j]))
            c[i][j] = img
            c[j][i] = [-x for x in img]
    fld = field or ("complex" if any(not x.is_real() for row in P for x in row) else g.field)
    return LieAlgebraSC(n, c, fld)


def complexify(g: LieAlgebraSC) -> LieAlgebraSC:
    return LieAlgebraSC(g.n, g.c, "complex")


def realify(g: LieAlgebraSC) -> LieAlgebraSC:
    """Underlying real algebra with basis ``e_1..e_n, i e_1..i e_n``."""
    n = g.n
    N = 2 * n
    c = [[[ZERO] * N for _ in range(N)] for _ in range(N)]
    for i in range(N):
        for j in range(N):
            # (i^s e_a)(i^t e_b) bracket = i^(s+t) [e_a, e_b]
            a, s = i % n, i // n
            b, t = j % n, j // n
            unit = GaussRat(1) if (s + t) == 0 else (GaussRat(0, 1) if s + t == 1 else GaussRat(-1))
            for m in range(n):
                v = g.c[a][b][m] * unit
                c[i][j][m] = c[i][j][m] + GaussRat(v.re)
                c[i][j][n + m] = c[i][j][n + m] + GaussRat(v.im)
    return LieAlgebraSC(N, c, "real")


@dataclass
class FieldComparison:
    real_degenerate: Optional[bool]
    complex_degenerate: bool
    realification_degenerate: Optional[bool]
    pattern: str

    def to_dict(self) -> dict:
        return {
            "degenerate_over_R": self.real_degenerate,
            "degenerate_over_C": self.complex_degenerate,
            "realification_degenerate": self.realification_degenerate,
            "pattern": self.pattern,
        }


def degeneracy_field_compare(g: LieAlgebraSC) -> FieldComparison:
    """Degeneracy over R and over C, and of the realification for complex algebras."""
    res = jacobi_sc(g)
    if not res:
        raise NotJacobi("structure constants fail the Jacobi identity", triple=list(res.triple))
    if g.field == "real":
        r = degeneracy(g, check_jacobi=False).degenerate
        c = degeneracy(complexify(g), check_jacobi=False).degenerate
        pattern = "equivalent" if r == c else "mismatch"
        return FieldComparison(r, c, None, pattern)
    c = degeneracy(g, check_jacobi=False).degenerate
    rr = degeneracy(realify(g), check_jacobi=False).degenerate
    if rr and not c:
        pattern = "violation: realification degenerate but complex algebra is not"
    elif rr == c:
        pattern = "both" if c else "neither"
    else:
        pattern = "complex only"
    return FieldComparison(None, c, rr, pattern)

"""Generalized complex linear algebra and calculus on a chart.

Sections of the generalized tangent bundle are :class:`GenSection`
objects ``X + xi``.  Pointwise linear algebra happens in the *complex
frame* of the chart: the ``N = chart.nvars`` vector generators
``d/dx, d/dz, d/dzbar`` followed by the ``N`` covector generators
``dx, dz, dzbar``.  A vector in that frame is a tuple of ``2N``
:class:`GaussRat` entries.  :func:`real_frame_matrix` converts to the
real frame ``(x, Re z, Im z)`` where realness can be checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from . import linalg
from .errors import (
    ChartMismatch,
    DegeneratePair,
    InvalidInput,
    InvalidJ,
    NotAComplexStructure,
    NotClosed,
    RankDrop,
    ZeroSpinorAtPoint,
)
from .exterior import (
    Form,
    PolyVector,
    bits,
    contract,
    contract_bit,
    contract_covector,
    exp_act,
    ext_d,
    lie_bracket,
    lie_derivative,
    popcount,
    transpose,
    wedge_sign,
)
from .poly import I, ONE, ZERO, Chart, GaussRat, Poly, RationalFn

HALF = Fraction(1, 2)

# ----------------------------------------------------------------------
# points
# ----------------------------------------------------------------------


def point_values(chart: Chart, point) -> Tuple[GaussRat, ...]:
    """Full generator values from a mapping / coordinate tuple / full tuple."""
    if isinstance(point, Mapping):
        return chart.point(point)
    point = tuple(point)
    if len(point) == len(chart.coords):
        return chart.point(point)
    if len(point) == chart.nvars:
        return tuple(GaussRat.coerce(v) for v in point)
    raise InvalidInput(f"point of length {len(point)} does not fit {chart}")


# ----------------------------------------------------------------------
# generalized sections
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class GenSection:
    """A generalized vector field ``X + xi`` with polynomial coefficients."""

    X: PolyVector
    xi: Form

    def __post_init__(self):
        if self.X.chart != self.xi.chart:
            raise ChartMismatch("vector and covector parts on different charts")
        if any(popcount(m) != 1 for m in self.X.terms):
            raise InvalidInput("vector part must have degree 1")
        if any(popcount(m) != 1 for m in self.xi.terms):
            raise InvalidInput("covector part must have degree 1")

    @property
    def chart(self) -> Chart:
        return self.X.chart

    @classmethod
    def zero(cls, chart: Chart) -> "GenSection":
        return cls(PolyVector.zero(chart), Form.zero(chart))

    @classmethod
    def of(cls, X: Optional[PolyVector] = None, xi: Optional[Form] = None) -> "GenSection":
        if X is None and xi is None:
            raise InvalidInput("empty section")
        chart = (X or xi).chart
        return cls(X if X is not None else PolyVector.zero(chart), xi if xi is not None else Form.zero(chart))

    @classmethod
    def from_vector(cls, chart: Chart, vec: Sequence) -> "GenSection":
        """Constant section from a complex-frame vector of length ``2N``."""
        n = chart.nvars
        X = PolyVector(chart, {1 << j: Poly.const(chart, v) for j, v in enumerate(vec[:n]) if v})
        xi = Form(chart, {1 << j: Poly.const(chart, v) for j, v in enumerate(vec[n:]) if v})
        return cls(X, xi)

    def __add__(self, other: "GenSection") -> "GenSection":
        return GenSection(self.X + other.X, self.xi + other.xi)

    def __sub__(self, other: "GenSection") -> "GenSection":
        return GenSection(self.X - other.X, self.xi - other.xi)

    def __neg__(self):
        return GenSection(-self.X, -self.xi)

    def scale(self, c) -> "GenSection":
        return GenSection(self.X.scale(c), self.xi.scale(c))

    def is_zero(self) -> bool:
        return self.X.is_zero() and self.xi.is_zero()

    def conjugate(self) -> "GenSection":
        return GenSection(self.X.conjugate(), self.xi.conjugate())

    def vector_at(self, values: Sequence[GaussRat]) -> List[GaussRat]:
        n = self.chart.nvars
        out = [ZERO] * (2 * n)
        for m, v in self.X.coeffs_at(values).items():
            out[m.bit_length() - 1] = v
        for m, v in self.xi.coeffs_at(values).items():
            out[n + m.bit_length() - 1] = v
        return out

    def __str__(self):
        return f"[{self.X}] + [{self.xi}]"


def _sec_check(u: GenSection, v) -> None:
    if u.chart != v.chart:
        raise ChartMismatch(f"{u.chart} vs {v.chart}")


def covector_eval(xi: Form, X: PolyVector) -> Poly:
    """``xi(X)`` for a 1-form and a vector field."""
    out = Poly.zero(xi.chart)
    for m, p in xi.terms.items():
        q = X.terms.get(m)
        if q is not None:
            out = out + p * q
    return out


def pairing(u: GenSection, v: GenSection) -> Poly:
    """``<X+xi, Y+eta> = (xi(Y) + eta(X)) / 2``."""
    _sec_check(u, v)
    return (covector_eval(u.xi, v.X) + covector_eval(v.xi, u.X)) * HALF


def clifford_act(u: GenSection, rho: Form) -> Form:
    """``(X + xi) . rho = iota_X rho + xi ^ rho``."""
    _sec_check(u, rho)
    return contract(u.X, rho) + u.xi.wedge(rho)


def check_closed_three_form(H: Optional[Form], chart: Chart) -> Form:
    if H is None:
        return Form.zero(chart)
    if H.chart != chart:
        raise ChartMismatch("H lives on another chart")
    if not H.is_homogeneous(3):
        raise InvalidInput("H must be a 3-form")
    dH = ext_d(H)
    if dH:
        raise NotClosed("H is not closed", witness=str(dH))
    return H


def courant_bracket(u: GenSection, v: GenSection, H: Optional[Form] = None, check: bool = True) -> GenSection:
    """Dorfman form: ``[X,Y] + L_X eta - iota_Y d xi - iota_Y iota_X H``."""
    _sec_check(u, v)
    if check:
        H = check_closed_three_form(H, u.chart)
    X, xi, Y, eta = u.X, u.xi, v.X, v.xi
    form = lie_derivative(X, eta) - contract(Y, ext_d(xi))
    if H is not None and H:
        form = form - contract(Y, contract(X, H))
    return GenSection(lie_bracket(X, Y), form)


def b_transform(B: Form, target):
    """``exp(B)_*``: sections go to ``X + xi - iota_X B``, forms to ``exp(B) ^ rho``."""
    if not B.is_homogeneous(2) and B:
        raise InvalidInput("B must be a 2-form")
    if isinstance(target, GenSection):
        _sec_check(target, B)
        return GenSection(target.X, target.xi - contract(target.X, B))
    if isinstance(target, Form):
        if target.chart != B.chart:
            raise ChartMismatch("B and spinor on different charts")
        return exp_act(B, target) if B else target
    raise TypeError("b_transform target must be a GenSection or a Form")


# ----------------------------------------------------------------------
# pointwise Clifford linear algebra
# ----------------------------------------------------------------------

def _num_iota(j: int, rho: Dict[int, GaussRat]) -> Dict[int, GaussRat]:
    out = {}
    for m, c in rho.items():
        s, nm = contract_bit(j, m)
        if s:
            out[nm] = c if s > 0 else -c
    return out


def _num_wedge_gen(j: int, rho: Dict[int, GaussRat]) -> Dict[int, GaussRat]:
    out = {}
    g = 1 << j
    for m, c in rho.items():
        s = wedge_sign(g, m)
        if s:
            out[m | g] = c if s > 0 else -c
    return out


def clifford_columns(chart: Chart, rho_at: Dict[int, GaussRat]) -> List[Dict[int, GaussRat]]:
    """Images ``e_k . rho`` of the ``2N`` complex-frame basis elements."""
    n = chart.nvars
    return [_num_iota(j, rho_at) for j in range(n)] + [_num_wedge_gen(j, rho_at) for j in range(n)]


def _columns_to_matrix(cols: List[Dict[int, GaussRat]], extra: Sequence[Dict[int, GaussRat]] = ()):
    blades = sorted({m for c in list(cols) + list(extra) for m in c})
    rows = [[c.get(b, ZERO) for c in cols] for b in blades]
    rhs = [[e.get(b, ZERO) for b in blades] for e in extra]
    return rows, rhs


@dataclass(frozen=True)
class DiracBasis:
    """A subspace of the complexified generalized tangent space at one point.

    ``vectors`` are complex-frame vectors (or any frame, when ``chart`` is
    None and the caller works with abstract linear spaces).
    """

    vectors: Tuple[Tuple[GaussRat, ...], ...]
    half_rank: int
    point: Optional[Tuple[GaussRat, ...]] = None
    chart: Optional[Chart] = None

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def is_lagrangian(self) -> bool:
        return self.dim == self.half_rank and self.is_isotropic()

    def is_isotropic(self) -> bool:
        n = self.half_rank
        for a in self.vectors:
            for b in self.vectors:
                s = ZERO
                for j in range(n):
                    s = s + a[n + j] * b[j] + b[n + j] * a[j]
                if s:
                    return False
        return True

    def conjugate(self) -> "DiracBasis":
        return DiracBasis(
            tuple(tuple(conjugate_vector(self.chart, v)) for v in self.vectors),
            self.half_rank, self.point, self.chart,
        )

    def intersection_dim_with_conjugate(self) -> int:
        return self.dim + self.conjugate().dim - linalg.rank([list(v) for v in self.vectors + self.conjugate().vectors])

    def same_space(self, other: "DiracBasis") -> bool:
        return linalg.same_span([list(v) for v in self.vectors], [list(v) for v in other.vectors])

    def contains(self, vec: Sequence) -> bool:
        return linalg.in_span(list(vec), [list(v) for v in self.vectors])


def conjugate_vector(chart: Optional[Chart], vec: Sequence[GaussRat]) -> List[GaussRat]:
    """Complex conjugate of a frame vector (``d/dz <-> d/dzbar`` and ``dz <-> dzbar``)."""
    n = len(vec) // 2
    out = [ZERO] * (2 * n)
    for j in range(n):
        cj = chart.conj_index(j) if chart is not None else j
        out[cj] = vec[j].conjugate()
        out[n + cj] = vec[n + j].conjugate()
    return out


def annihilator(rho: Form, point) -> Tuple[DiracBasis, bool]:
    """Solve ``(X + xi) . rho(p) = 0``; pure iff the solution space has dimension N."""
    ch = rho.chart
    vals = point_values(ch, point)
    rho_at = rho.coeffs_at(vals)
    if not rho_at:
        raise ZeroSpinorAtPoint("spinor vanishes at the point", point=[str(v) for v in vals])
    rows, _ = _columns_to_matrix(clifford_columns(ch, rho_at))
    basis = linalg.nullspace(rows, 2 * ch.nvars)
    basis = linalg.row_space(basis)
    L = DiracBasis(tuple(tuple(v) for v in basis), ch.nvars, vals, ch)
    return L, L.dim == ch.nvars


def chevalley(rho1: Form, rho2: Form) -> Form:
    """Top-degree component of ``rho1 ^ transpose(rho2)``."""
    if rho1.chart != rho2.chart:
        raise ChartMismatch(f"{rho1.chart} vs {rho2.chart}")
    return rho1.wedge(transpose(rho2)).component(rho1.chart.nvars)


def nondegenerate_at(rho: Form, point) -> bool:
    """``(rho, conj rho)_Ch != 0`` at the point, i.e. ``L`` meets its conjugate trivially."""
    vals = point_values(rho.chart, point)
    return bool(chevalley(rho, rho.conjugate()).coeffs_at(vals))


def decomposition_condition(omega: Form, Omega: Form, point) -> bool:
    """``omega^(n-k) ^ Omega ^ conj(Omega) != 0`` at the point (``2n`` = real dimension)."""
    ch = omega.chart
    N = ch.nvars
    if N % 2:
        raise InvalidInput("real dimension must be even")
    k = Omega.degrees()[0] if Omega else 0
    power = Form.scalar(Poly.one(ch))
    for _ in range(N // 2 - k):
        power = power.wedge(omega)
    top = power.wedge(Omega).wedge(Omega.conjugate()).component(N)
    return bool(top.coeffs_at(point_values(ch, point)))


def pure_spinor(B: Form, omega: Form, Omega: Form) -> Form:
    """``exp(B + i omega) ^ Omega``."""
    return exp_act(B + omega.scale(I), Omega)


# ----------------------------------------------------------------------
# type and spinor lines
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SpinorLine:
    generator: Form

    @property
    def chart(self) -> Chart:
        return self.generator.chart

    def is_pure_at(self, point) -> bool:
        return annihilator(self.generator, point)[1]


def spinor_type_at(rho: Form, point) -> int:
    vals = point_values(rho.chart, point)
    at = rho.coeffs_at(vals)
    if not at:
        raise ZeroSpinorAtPoint("spinor vanishes at the point")
    return min(popcount(m) for m in at)


def type_at(source, point) -> int:
    """Type at a point from a spinor (lowest degree) or a J operator (half corank of pi_J)."""
    if isinstance(source, SpinorLine):
        source = source.generator
    if isinstance(source, Form):
        return spinor_type_at(source, point)
    if isinstance(source, JOperator):
        vals = point_values(source.chart, point)
        N = source.chart.nvars
        P = source.poisson_block_at(vals)
        corank = N - linalg.rank(P)
        if corank % 2:
            raise InvalidJ("odd corank of pi_J", corank=corank)
        return corank // 2
    raise TypeError("type_at needs a spinor or a JOperator")


def proportional_at(rho1: Form, rho2: Form, point) -> bool:
    """Both nonzero at the point and ``rho1 = c rho2`` there for some nonzero c."""
    vals = point_values(rho1.chart, point)
    a, b = rho1.coeffs_at(vals), rho2.coeffs_at(vals)
    if not a or not b or set(a) != set(b):
        return False
    m0 = next(iter(b))
    c = a[m0] / b[m0]
    return all(a[m] == c * b[m] for m in b)


def related_by_b_field(rho1: Form, rho2: Form, B: Form, points) -> bool:
    """Pointwise check of ``K1 = exp(B) ^ K2`` for lines on one chart."""
    moved = b_transform(B, rho2)
    return all(proportional_at(rho1, moved, p) for p in points)


# ----------------------------------------------------------------------
# J operators
# ----------------------------------------------------------------------

def _rf(chart: Chart, x) -> RationalFn:
    if isinstance(x, RationalFn):
        return x
    if isinstance(x, Poly):
        return RationalFn(x)
    return RationalFn(Poly.const(chart, x))


def real_frame_matrix(chart: Chart) -> List[List[GaussRat]]:
    """``P`` with real-frame coordinates = ``P @`` complex-frame coordinates.

    Real frame: ``d/dx``, ``d/du_j``, ``d/dv_j`` then ``dx``, ``du_j``, ``dv_j``
    for ``z_j = u_j + i v_j``.
    """
    N, m, k = chart.nvars, chart.m, chart.k
    P = linalg.zeros(2 * N, 2 * N)
    for a in range(m):
        P[a][a] = ONE
        P[N + a][N + a] = ONE
    half = GaussRat(HALF)
    ihalf = GaussRat(0, HALF)
    for j in range(k):
        z, zb = m + j, m + k + j
        u, v = m + j, m + k + j
        # vectors: X^u = (X^z + X^zb)/2, X^v = i (X^zb - X^z)/2
        P[u][z], P[u][zb] = half, half
        P[v][z], P[v][zb] = -ihalf, ihalf
        # covectors: xi_u = xi_z + xi_zb, xi_v = i (xi_z - xi_zb)
        P[N + u][N + z], P[N + u][N + zb] = ONE, ONE
        P[N + v][N + z], P[N + v][N + zb] = I, -I
    return P


class JOperator:
    """Generalized complex structure as a ``2N x 2N`` matrix on the complex frame.

    Column ``c`` holds the image of the ``c``-th frame element.  Entries are
    rational functions, so structures built from polynomial data stay exact.
    """

    def __init__(self, chart: Chart, matrix: Sequence[Sequence]):
        N = chart.nvars
        if len(matrix) != 2 * N or any(len(r) != 2 * N for r in matrix):
            raise InvalidJ(f"J must be {2 * N}x{2 * N}")
        self.chart = chart
        self.matrix = [[_rf(chart, x) for x in row] for row in matrix]

    def at(self, point) -> List[List[GaussRat]]:
        vals = point_values(self.chart, point)
        cache: Dict[int, GaussRat] = {}
        out = []
        for row in self.matrix:
            out.append([x.evaluate(vals) if x else ZERO for x in row])
        return out

    def poisson_block_at(self, point) -> List[List[GaussRat]]:
        N = self.chart.nvars
        Jp = self.at(point)
        return [row[N:] for row in Jp[:N]]

    def squares_to_minus_one_at(self, point) -> bool:
        Jp = self.at(point)
        sq = linalg.matmul(Jp, Jp)
        n = len(Jp)
        return all(sq[r][c] == (-ONE if r == c else ZERO) for r in range(n) for c in range(n))

    def orthogonal_at(self, point) -> bool:
        """``<Ju, Jv> = <u, v>`` on the frame, i.e. ``J^T G J = G``."""
        Jp = self.at(point)
        n = len(Jp) // 2
        G = linalg.zeros(2 * n, 2 * n)
        for j in range(n):
            G[j][n + j] = GaussRat(HALF)
            G[n + j][j] = GaussRat(HALF)
        lhs = linalg.matmul(linalg.matmul(linalg.transpose(Jp), G), Jp)
        return lhs == G

    def real_matrix_at(self, point) -> List[List[GaussRat]]:
        P = real_frame_matrix(self.chart)
        Pinv = linalg.inverse(P)
        return linalg.matmul(linalg.matmul(P, self.at(point)), Pinv)

    def is_real_at(self, point) -> bool:
        return all(x.is_real() for row in self.real_matrix_at(point) for x in row)

    def __repr__(self):
        return f"JOperator({self.chart})"


def _covector_images(chart: Chart, fn) -> List[List]:
    """Matrix block whose column j is the vector field ``fn(d gen_j)`` (as components)."""
    N = chart.nvars
    block = [[Poly.zero(chart)] * N for _ in range(N)]
    for j in range(N):
        img = fn(Form.gen(chart, j))
        for r, c in enumerate(img.components()):
            block[r][j] = c
    return block


def _two_form_matrix(omega: Form) -> List[List[Poly]]:
    """Matrix of ``X -> iota_X omega``: entry [b][a] is the d_b-coefficient of iota_{d_a} omega."""
    ch = omega.chart
    N = ch.nvars
    M = [[Poly.zero(ch)] * N for _ in range(N)]
    for a in range(N):
        img = contract(PolyVector.gen(ch, a), omega)
        for m, p in img.terms.items():
            M[m.bit_length() - 1][a] = p
    return M


def _complex_structure_blocks(chart: Chart):
    """Diagonal blocks ``-I`` (vectors) and ``I*`` (covectors) of the standard complex structure."""
    N, m, k = chart.nvars, chart.m, chart.k
    minus_I = [[ZERO] * N for _ in range(N)]
    I_star = [[ZERO] * N for _ in range(N)]
    for j in range(k):
        z, zb = m + j, m + k + j
        minus_I[z][z], minus_I[zb][zb] = -I, I
        I_star[z][z], I_star[zb][zb] = I, -I
    return minus_I, I_star


def standard_structure(kind: str, chart: Chart, omega: Optional[Form] = None,
                       sigma: Optional[PolyVector] = None) -> Tuple[JOperator, SpinorLine]:
    """Complex, symplectic and holomorphic Poisson examples with their spinors.

    * ``complex``: ``J_I = [[-I, 0], [0, I*]]``, spinor ``dz1...dzk``.
    * ``symplectic``: ``J_w = [[0, -w^-1], [w, 0]]``, spinor ``exp(i w)``.
    * ``holo_poisson``: ``J_s = [[-I, 4 I Q], [0, I*]]`` with ``Q = Re s``,
      spinor ``exp(s)(dz1...dzk)``.
    """
    N = chart.nvars
    if kind in ("complex", "holo_poisson"):
        if chart.m:
            raise InvalidInput(f"{kind} structures need a purely holomorphic chart")
        Omega = Form.blade(chart, chart.holo_coords)
        minus_I, I_star = _complex_structure_blocks(chart)
        upper = [[ZERO] * N for _ in range(N)]
        spinor = Omega
        if kind == "holo_poisson":
            if sigma is None:
                raise InvalidInput("holo_poisson needs sigma")
            _check_holo_bivector(sigma)
            if sigma:
                Q = (sigma + sigma.conjugate()).scale(HALF)
                Iq = lambda V: _apply_complex_structure(V)
                upper = _covector_images(chart, lambda e: Iq(contract_covector(e, Q)).scale(4))
                spinor = exp_act(sigma, Omega)
        M = [minus_I[r] + upper[r] for r in range(N)]
        M += [[ZERO] * N + I_star[r] for r in range(N)]
        return JOperator(chart, M), SpinorLine(spinor)
    if kind == "symplectic":
        if omega is None:
            raise InvalidInput("symplectic needs omega")
        if not omega.is_homogeneous(2):
            raise InvalidInput("omega must be a 2-form")
        if ext_d(omega):
            raise InvalidInput("omega is not closed")
        if omega.conjugate() != omega:
            raise InvalidInput("omega is not real")
        W = _two_form_matrix(omega)
        zero = RationalFn(Poly.zero(chart))
        one = RationalFn(Poly.one(chart))
        Wr = [[RationalFn(p) for p in row] for row in W]
        Winv = linalg.inverse(Wr, zero=zero, one=one)
        if Winv is None:
            raise InvalidInput("omega is degenerate")
        M = [[zero] * N + [-x for x in Winv[r]] for r in range(N)]
        M += [Wr[r] + [zero] * N for r in range(N)]
        return JOperator(chart, M), SpinorLine(exp_act(omega.scale(I), Form.scalar(Poly.one(chart))))
    raise InvalidInput(f"unknown structure kind {kind!r}")


def _apply_complex_structure(V: PolyVector) -> PolyVector:
    ch = V.chart
    out = {}
    for mask, p in V.terms.items():
        j = mask.bit_length() - 1
        if ch.is_holo(j):
            out[mask] = p * I
        elif ch.is_antiholo(j):
            out[mask] = p * (-I)
        else:
            raise InvalidInput("complex structure undefined on real coordinates")
    return PolyVector(ch, out)


def _check_holo_bivector(sigma: PolyVector) -> None:
    ch = sigma.chart
    if not sigma.is_homogeneous(2) and sigma:
        raise InvalidInput("sigma must be a bivector")
    for mask, p in sigma.terms.items():
        if not all(ch.is_holo(j) for j in bits(mask)):
            raise InvalidInput("sigma must be of type (2,0)")
        if not p.is_holomorphic():
            raise InvalidInput("sigma must have holomorphic coefficients")


def holomorphic_dirac(sigma: PolyVector, point) -> DiracBasis:
    """``T01 + (1 + sigma)(T*)10`` at a point, built directly from its definition."""
    ch = sigma.chart
    vals = point_values(ch, point)
    N = ch.nvars
    vecs = []
    for j in range(ch.k):
        v = [ZERO] * (2 * N)
        v[ch.m + ch.k + j] = ONE
        vecs.append(v)
    for j in range(ch.k):
        a = ch.m + j
        v = [ZERO] * (2 * N)
        v[N + a] = ONE
        img = contract_covector(Form.gen(ch, a), sigma)
        for mask, val in img.coeffs_at(vals).items():
            v[mask.bit_length() - 1] = val
        vecs.append(v)
    return DiracBasis(tuple(tuple(v) for v in vecs), N, vals, ch)


def structure_convert(direction: str, source, point=None):
    """Dirac/J/Poisson conversions at a point.

    * ``j_from_dirac``: ``J = i(P_L - P_Lbar)`` from a Dirac basis.
    * ``dirac_from_j``: the ``+i`` eigenspace of ``J(p)``.
    * ``poisson_from_j``: the block ``T* -> T`` of ``J(p)`` as a bivector.
    """
    if direction == "j_from_dirac":
        L: DiracBasis = source
        ch = L.chart
        N = L.half_rank
        conj = [conjugate_vector(ch, v) for v in L.vectors]
        S_cols = [list(v) for v in L.vectors] + conj
        if len(S_cols) != 2 * N or linalg.rank(S_cols) != 2 * N:
            raise DegeneratePair("L meets its conjugate (or is not half-dimensional)")
        S = linalg.transpose(S_cols)
        D = linalg.zeros(2 * N, 2 * N)
        for r in range(2 * N):
            D[r][r] = I if r < N else -I
        J = linalg.matmul(linalg.matmul(S, D), linalg.inverse(S))
        op = JOperator(ch, J)
        if not op.is_real_at(L.point):
            raise NotAComplexStructure("assembled J is not real")
        return op
    if direction == "dirac_from_j":
        J: JOperator = source
        vals = point_values(J.chart, point)
        Jp = J.at(vals)
        n2 = len(Jp)
        A = [[Jp[r][c] - (I if r == c else ZERO) for c in range(n2)] for r in range(n2)]
        basis = linalg.row_space(linalg.nullspace(A, n2))
        if len(basis) != n2 // 2:
            raise NotAComplexStructure("+i eigenspace is not half-dimensional")
        return DiracBasis(tuple(tuple(v) for v in basis), n2 // 2, vals, J.chart)
    if direction == "poisson_from_j":
        J = source
        ch = J.chart
        P = J.poisson_block_at(point)
        N = ch.nvars
        terms = {}
        for a in range(N):
            for b in range(N):
                if P[b][a] != -P[a][b]:
                    raise InvalidJ("pi_J block is not antisymmetric")
                if a < b and P[b][a]:
                    terms[(1 << a) | (1 << b)] = Poly.const(ch, P[b][a])
        return PolyVector(ch, terms)
    raise InvalidInput(f"unknown conversion {direction!r}")


# ----------------------------------------------------------------------
# involutivity
# ----------------------------------------------------------------------

def involutivity_check(rho: Form, H: Optional[Form], points) -> Tuple[bool, Optional[dict]]:
    """At each point solve ``(X + xi) . rho = d rho + H ^ rho``."""
    ch = rho.chart
    H = check_closed_three_form(H, ch)
    dH_rho = ext_d(rho) + (H.wedge(rho) if H else Form.zero(ch))
    for p in points:
        vals = point_values(ch, p)
        rho_at = rho.coeffs_at(vals)
        if not rho_at:
            raise ZeroSpinorAtPoint("spinor vanishes at a sample point", point=[str(v) for v in vals])
        target = dH_rho.coeffs_at(vals)
        rows, rhs = _columns_to_matrix(clifford_columns(ch, rho_at), [target])
        sol = linalg.solve(rows, rhs[0])
        if sol is None:
            return False, {"point": [str(v) for v in vals[: len(ch.coords)]], "d_H_rho": str(dH_rho.at(vals))}
    return True, None


def integrability_witness(rho: Form, H: Optional[Form], point) -> Optional[GenSection]:
    """A constant section ``u`` with ``d^H rho = u . rho`` at the point, if any."""
    ch = rho.chart
    H = check_closed_three_form(H, ch)
    vals = point_values(ch, point)
    target = (ext_d(rho) + (H.wedge(rho) if H else Form.zero(ch))).coeffs_at(vals)
    rows, rhs = _columns_to_matrix(clifford_columns(ch, rho.coeffs_at(vals)), [target])
    sol = linalg.solve(rows, rhs[0])
    return None if sol is None else GenSection.from_vector(ch, sol)


# ----------------------------------------------------------------------
# backward and forward images of linear Dirac structures
# ----------------------------------------------------------------------

def _iota_matrix(B: Sequence[Sequence[GaussRat]], X: Sequence[GaussRat]) -> List[GaussRat]:
    n = len(X)
    return [sum((X[a] * B[a][b] for a in range(n) if X[a] and B[a][b]), ZERO) for b in range(n)]


def image_linear(direction: str, L: DiracBasis, F: Sequence[Sequence], B: Optional[Sequence[Sequence]] = None) -> DiracBasis:
    """Backward / forward image of a linear Dirac space along ``(F, B)``.

    ``F`` is the ``n2 x n1`` matrix of the linear map ``V1 -> V2`` and ``B``
    an antisymmetric ``n1 x n1`` matrix ``B[a][b] = B(e_a, e_b)`` on ``V1``.

    * backward: ``{X + F^T xi - iota_X B | F X + xi in L}`` on ``V1``
    * forward:  ``{F X + xi | X + F^T xi - iota_X B in L}`` on ``V2``
    """
    F = [[GaussRat.coerce(x) for x in row] for row in F]
    n2 = len(F)
    n1 = len(F[0]) if F else 0
    B = [[GaussRat.coerce(x) for x in row] for row in B] if B is not None else linalg.zeros(n1, n1)
    Ft = linalg.transpose(F) if F else linalg.zeros(n1, 0)
    vecs = [list(v) for v in L.vectors]
    r = len(vecs)
    out = []
    if direction == "backward":
        if L.half_rank != n2:
            raise InvalidInput("Dirac space does not live on the target")
        # unknowns (X in V1, c in C^r):  F X - sum c_k Y_k = 0
        A = [[F[i][a] for a in range(n1)] + [-vecs[k][i] for k in range(r)] for i in range(n2)]
        for sol in linalg.nullspace(A, n1 + r):
            X, c = sol[:n1], sol[n1:]
            xi = [sum((c[k] * vecs[k][n2 + b] for k in range(r) if c[k]), ZERO) for b in range(n2)]
            pulled = linalg.matvec(Ft, xi)
            iota = _iota_matrix(B, X)
            out.append(X + [pulled[a] - iota[a] for a in range(n1)])
        dim_target = n1
    elif direction == "forward":
        if L.half_rank != n1:
            raise InvalidInput("Dirac space does not live on the source")
        # unknowns (xi in V2*, c in C^r): F^T xi - iota_X B - sum c_k xi_k = 0, X = sum c_k X_k
        A = []
        for a in range(n1):
            row = [Ft[a][b] for b in range(n2)]
            for k in range(r):
                Xk = vecs[k][:n1]
                iota_k = _iota_matrix(B, Xk)
                row.append(-iota_k[a] - vecs[k][n1 + a])
            A.append(row)
        for sol in linalg.nullspace(A, n2 + r):
            xi, c = sol[:n2], sol[n2:]
            X = [sum((c[k] * vecs[k][a] for k in range(r) if c[k]), ZERO) for a in range(n1)]
            out.append(linalg.matvec(F, X) + xi)
        dim_target = n2
    else:
        raise InvalidInput(f"unknown image direction {direction!r}")
    basis = linalg.row_space(out) if out else []
    if len(basis) != dim_target:
        raise RankDrop(f"image has dimension {len(basis)}, expected {dim_target}")
    res = DiracBasis(tuple(tuple(v) for v in basis), dim_target, None, None)
    if not res.is_isotropic():
        raise RankDrop("image is not isotropic")
    return res

"""Holomorphic Poisson bivectors and their lifts to coordinate blow-ups.

The bracket is ``{f, g} = sum_{a<b} s^{ab} (d_a f d_b g - d_b f d_a g)``
so that ``{z^a, z^b} = s^{ab}``.  A center is a coordinate subspace
``{z^g = 0 : g in G}``; blowing it up is described chart by chart by
the substitution ``z^j -> z^a v^j`` for ``j in G``, ``j != a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    IdentityFails,
    IndexOutOfRange,
    InvalidInput,
    NotDegenerate,
    NotDivisible,
    NotJacobi,
    NotPoissonSubmanifold,
)
from .exterior import PolyVector
from .poly import (
    Chart,
    CoordIdeal,
    GaussRat,
    Poly,
    RationalFn,
    ZERO,
    exact_divide,
    format_scalar,
    ideal_membership,
    var_exp,
    var_mono,
)

Fn = Union[Poly, RationalFn]


# ----------------------------------------------------------------------
# bivectors
# ----------------------------------------------------------------------

class HoloBivector:
    """Antisymmetric matrix of holomorphic polynomials on a holomorphic chart."""

    def __init__(self, chart: Chart, entries: Mapping[Tuple[str, str], Poly] | None = None):
        if chart.m:
            raise InvalidInput("holomorphic bivectors need a chart without real coordinates")
        self.chart = chart
        k = chart.k
        self._m: Dict[Tuple[int, int], Poly] = {}
        for (na, nb), p in (entries or {}).items():
            a, b = self._holo_index(na), self._holo_index(nb)
            if not isinstance(p, Poly):
                p = Poly.const(chart, p)
            if p.chart != chart:
                raise InvalidInput("bivector entry on another chart")
            if not p.is_holomorphic():
                raise InvalidInput(f"entry ({na},{nb}) is not holomorphic")
            if a == b:
                if p:
                    raise InvalidInput("diagonal bivector entries must vanish")
                continue
            if a > b:
                a, b, p = b, a, -p
            if (a, b) in self._m and self._m[(a, b)] != p:
                raise InvalidInput(f"conflicting entries for ({na},{nb})")
            if p:
                self._m[(a, b)] = p

    def _holo_index(self, name) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.chart.k:
                raise IndexOutOfRange(f"holomorphic index {name} out of range")
            return name
        j = self.chart.index(name)
        if not self.chart.is_holo(j):
            raise InvalidInput(f"{name!r} is not a holomorphic coordinate")
        return j - self.chart.m

    @classmethod
    def from_polyvector(cls, W: PolyVector) -> "HoloBivector":
        ch = W.chart
        entries = {}
        for mask, p in W.terms.items():
            idx = [j for j in range(ch.nvars) if (mask >> j) & 1]
            if len(idx) != 2 or not all(ch.is_holo(j) for j in idx):
                raise InvalidInput("expected a (2,0) bivector")
            entries[(ch.names[idx[0]], ch.names[idx[1]])] = p
        return cls(ch, entries)

    def to_polyvector(self) -> PolyVector:
        m = self.chart.m
        return PolyVector(self.chart, {(1 << (m + a)) | (1 << (m + b)): p for (a, b), p in self._m.items()})

    def entry(self, a, b) -> Poly:
        a, b = self._holo_index(a), self._holo_index(b)
        if a == b:
            return Poly.zero(self.chart)
        if a < b:
            return self._m.get((a, b), Poly.zero(self.chart))
        return -self._m.get((b, a), Poly.zero(self.chart))

    def entries(self) -> Dict[Tuple[str, str], Poly]:
        names = self.chart.holo_coords
        return {(names[a], names[b]): p for (a, b), p in sorted(self._m.items())}

    def is_zero(self) -> bool:
        return not self._m

    def bracket(self, f: Fn, g: Fn) -> Fn:
        """Poisson bracket of polynomials or rational functions on this chart."""
        m = self.chart.m
        out = None
        for (a, b), s in self._m.items():
            fa, fb = f.partial(m + a), f.partial(m + b)
            ga, gb = g.partial(m + a), g.partial(m + b)
            term = (fa * gb - fb * ga) * s
            out = term if out is None else out + term
        if out is None:
            return RationalFn(Poly.zero(self.chart)) if isinstance(f, RationalFn) or isinstance(g, RationalFn) else Poly.zero(self.chart)
        return out

    def coord(self, name) -> Poly:
        return Poly.gen(self.chart, self.chart.holo_coords[self._holo_index(name)])

    def __eq__(self, other):
        return isinstance(other, HoloBivector) and self.chart == other.chart and self._m == other._m

    def __str__(self):
        if not self._m:
            return "0"
        return ", ".join(f"{{{a},{b}}} = {p}" for (a, b), p in self.entries().items())

    def __repr__(self):
        return f"HoloBivector({self})"


def linear_poisson(chart: Chart, constants) -> HoloBivector:
    """``{z^i, z^j} = sum_m c^m_ij z^m`` from structure constants ``constants[i][j][m]``."""
    names = chart.holo_coords
    n = len(names)
    entries = {}
    for i in range(n):
        for j in range(i + 1, n):
            p = Poly.zero(chart)
            for m in range(n):
                c = GaussRat.coerce(constants[i][j][m])
                if c:
                    p = p + Poly.gen(chart, names[m]) * c
            entries[(names[i], names[j])] = p
    return HoloBivector(chart, entries)


# ----------------------------------------------------------------------
# Jacobi
# ----------------------------------------------------------------------

@dataclass
class JacobiResult:
    ok: bool
    triple: Optional[Tuple[str, str, str]] = None
    jacobiator: Optional[str] = None

    def __bool__(self):
        return self.ok


def jacobi_check(sigma: HoloBivector) -> JacobiResult:
    """All coordinate Jacobiators ``{{z^a,z^b},z^c} + cyclic`` vanish."""
    ch = sigma.chart
    names = ch.holo_coords
    zs = [Poly.gen(ch, n) for n in names]
    for a, b, c in combinations(range(len(names)), 3):
        jac = (
            sigma.bracket(sigma.entry(a, b), zs[c])
            + sigma.bracket(sigma.entry(b, c), zs[a])
            + sigma.bracket(sigma.entry(c, a), zs[b])
        )
        if jac:
            return JacobiResult(False, (names[a], names[b], names[c]), str(jac))
    return JacobiResult(True)


def require_jacobi(sigma: HoloBivector) -> None:
    res = jacobi_check(sigma)
    if not res:
        raise NotJacobi("bivector fails the Jacobi identity", triple=list(res.triple), jacobiator=res.jacobiator)


# ----------------------------------------------------------------------
# centers and submanifold conditions
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Center:
    """Coordinate center ``{z^g = 0}`` for the listed generators (chart order)."""

    chart: Chart
    generators: Tuple[str, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise InvalidInput("center needs at least one generator")
        if len(set(gens)) != len(gens):
            raise InvalidInput("repeated center generator")
        for g in gens:
            if g not in self.chart.holo_coords:
                raise InvalidInput(f"center generator {g!r} is not a holomorphic coordinate")
        order = {n: k for k, n in enumerate(self.chart.holo_coords)}
        object.__setattr__(self, "generators", tuple(sorted(gens, key=order.__getitem__)))

    @property
    def l(self) -> int:
        return len(self.generators)

    @property
    def tangent(self) -> Tuple[str, ...]:
        return tuple(n for n in self.chart.holo_coords if n not in self.generators)

    def ideal(self, power: int = 1) -> CoordIdeal:
        return CoordIdeal(self.chart, self.generators, power)


@dataclass
class SubmanifoldReport:
    is_poisson_submanifold: bool
    is_degenerate: bool
    conormal_abelian: bool
    witnesses: Dict[str, dict] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "is_poisson_submanifold": self.is_poisson_submanifold,
            "is_degenerate": self.is_degenerate,
            "conormal_abelian": self.conormal_abelian,
            "witnesses": self.witnesses,
        }


def degeneracy_expression(sigma: HoloBivector, i: str, j: str, m: str) -> Poly:
    """``{z^i,z^j} z^m + {z^j,z^m} z^i + {z^m,z^i} z^j``."""
    z = sigma.coord
    return sigma.entry(i, j) * z(m) + sigma.entry(j, m) * z(i) + sigma.entry(m, i) * z(j)


def submanifold_conditions(sigma: HoloBivector, Z: Center, check_jacobi: bool = True) -> SubmanifoldReport:
    if check_jacobi:
        require_jacobi(sigma)
    I1, names, G = Z.ideal(1), sigma.chart.holo_coords, Z.generators
    wit: Dict[str, dict] = {}
    poisson = True
    for a in G:
        for b in names:
            if b == a:
                continue
            e = sigma.entry(a, b)
            if not ideal_membership(e, I1, 1):
                poisson = False
                wit.setdefault("poisson", {"pair": [a, b], "entry": str(e), "obstruction": str(I1.low_degree_part(e, 1))})
    degenerate = True
    I3 = Z.ideal(3)
    for i, j, m in combinations(G, 3):
        e = degeneracy_expression(sigma, i, j, m)
        if not ideal_membership(e, I3, 3):
            degenerate = False
            wit.setdefault("degenerate", {"triple": [i, j, m], "expression": str(e), "obstruction": str(I3.low_degree_part(e, 3))})
    abelian = True
    I2 = Z.ideal(2)
    for i, j in combinations(G, 2):
        e = sigma.entry(i, j)
        if not ideal_membership(e, I2, 2):
            abelian = False
            wit.setdefault("abelian", {"pair": [i, j], "entry": str(e), "obstruction": str(I2.low_degree_part(e, 2))})
    return SubmanifoldReport(poisson, degenerate, abelian, wit)


def conormal_constants(sigma: HoloBivector, Z: Center, point: Mapping[str, object] | None = None):
    """Structure constants ``c[i][j][m]`` of the conormal algebra at a point of ``Z``.

    ``point`` assigns values to the tangent coordinates (default: all zero).
    """
    ch = sigma.chart
    G = Z.generators
    I1 = Z.ideal(1)
    for a in G:
        for b in ch.holo_coords:
            if b != a and not ideal_membership(sigma.entry(a, b), I1, 1):
                raise NotPoissonSubmanifold("center is not a Poisson submanifold", pair=[a, b],
                                            entry=str(sigma.entry(a, b)))
    point = dict(point or {})
    values = {t: point.get(t, 0) for t in Z.tangent}
    unknown = set(point) - set(Z.tangent)
    if unknown:
        raise InvalidInput(f"point assigns non-tangent coordinates {sorted(unknown)}")
    l = len(G)
    gidx = [ch.index(g) for g in G]
    c = [[[ZERO] * l for _ in range(l)] for _ in range(l)]
    for i in range(l):
        for j in range(l):
            e = sigma.entry(G[i], G[j])
            for mono, coef in e.terms.items():
                degs = [var_exp(mono, gi) for gi in gidx]
                if sum(degs) != 1:
                    continue
                m = degs.index(1)
                rest = mono - var_mono(gidx[m])
                val = coef * Poly._raw(ch, {rest: GaussRat(1)}).evaluate(_tangent_values(ch, values))
                c[i][j][m] = c[i][j][m] + val
    return c


def _tangent_values(ch: Chart, values: Mapping[str, object]):
    full = {n: values.get(n, 0) for n in ch.holo_coords}
    return ch.point(full)


def conormal_algebra(sigma: HoloBivector, Z: Center, point: Mapping[str, object] | None = None):
    from .liealg import LieAlgebraSC

    return LieAlgebraSC(Z.l, conormal_constants(sigma, Z, point), field="complex")


# ----------------------------------------------------------------------
# blow-up charts
# ----------------------------------------------------------------------

def v_name(name: str, taken: Sequence[str]) -> str:
    base = "v" + name[1:] if name.startswith("z") and len(name) > 1 else "v" + name
    out = base
    while out in taken:
        out += "_"
    return out


@dataclass(frozen=True)
class BlowupChart:
    """Chart ``a`` of the blow-up: coordinates and the projection substitution."""

    index: int
    center_coord: str
    source: Chart
    chart: Chart
    vnames: Dict[str, str]
    projection: Dict[str, Poly]

    def pull(self, f: Poly) -> Poly:
        return f.substitute(self.projection, self.chart)


def blowup_chart(a: int, Z: Center) -> BlowupChart:
    """Chart ``a`` (1-based, ``1 <= a <= l``) of the blow-up of ``Z``."""
    if not 1 <= a <= Z.l:
        raise IndexOutOfRange(f"chart index {a} outside 1..{Z.l}")
    src = Z.chart
    za = Z.generators[a - 1]
    taken = list(src.holo_coords) + [n for n in src.names]
    vnames = {}
    for g in Z.generators:
        if g != za:
            vnames[g] = v_name(g, taken)
            taken.append(vnames[g])
    new_names = [vnames.get(n, n) for n in src.holo_coords]
    ch = Chart((), tuple(new_names))
    zpoly = Poly.gen(ch, za)
    projection = {g: zpoly * Poly.gen(ch, v) for g, v in vnames.items()}
    return BlowupChart(a, za, src, ch, vnames, projection)


def _divide_or_witness(num: Poly, za_poly: Poly, za: str, power: int):
    """Divide ``num`` by ``za^power``; on failure return the reduced witness text."""
    try:
        return exact_divide(num, za_poly ** power), None
    except NotDivisible:
        pass
    ch = num.chart
    j = ch.index(za)
    e = min(var_exp(m, j) for m in num.terms)
    rest = exact_divide(num, za_poly ** e) if e else num
    left = power - e
    rs = str(rest)
    if len(rest.terms) > 1:
        rs = f"({rs})"
    den = za if left == 1 else f"{za}^{left}"
    return None, f"{rs}/{den}"


@dataclass
class BlowupAtlas:
    sigma: HoloBivector
    center: Center
    charts: List[BlowupChart]
    lifted: List[HoloBivector]

    def bracket_table(self, a: int) -> Dict[str, str]:
        """Nonzero coordinate brackets of chart ``a`` as text, e.g. ``{z1,v2}: 1``."""
        return {f"{{{x},{y}}}": str(p) for (x, y), p in self.lifted[a - 1].entries().items()}

    def to_dict(self) -> dict:
        return {
            "center": list(self.center.generators),
            "charts": [
                {
                    "index": c.index,
                    "coords": list(c.chart.holo_coords),
                    "projection": {k: str(v) for k, v in c.projection.items()},
                    "brackets": self.bracket_table(c.index),
                }
                for c in self.charts
            ],
        }


def lift_poisson(sigma: HoloBivector, Z: Center, check_jacobi: bool = True) -> BlowupAtlas:
    """Lift ``sigma`` to every chart of the blow-up of ``Z`` or explain why not.

    Entries of the form ``{z, v}`` are checked on all charts before any
    ``{v, v}`` entry, so a center that is not a Poisson submanifold is
    always reported as such.
    """
    if check_jacobi:
        require_jacobi(sigma)
    if Z.chart != sigma.chart:
        raise InvalidInput("center and bivector on different charts")
    G = Z.generators
    others = Z.tangent
    charts = [blowup_chart(a, Z) for a in range(1, Z.l + 1)]
    tables = []
    # first pass: entries involving one v
    for bc in charts:
        ch, za = bc.chart, bc.center_coord
        zap = Poly.gen(ch, za)
        pull = bc.pull
        table = {}
        for j in G:
            if j == za:
                continue
            vj = bc.vnames[j]
            q, wit = _divide_or_witness(pull(sigma.entry(za, j)), zap, za, 1)
            if wit:
                raise NotPoissonSubmanifold(
                    f"{{{za},{vj}}} does not extend over {za} = 0 in chart {bc.index}",
                    chart=bc.index, entry=[za, vj], witness=wit,
                )
            table[(za, vj)] = q
            for i in others:
                num = pull(sigma.entry(i, j) * Poly.gen(sigma.chart, za) - sigma.entry(i, za) * Poly.gen(sigma.chart, j))
                q, wit = _divide_or_witness(num, zap, za, 2)
                if wit:
                    raise NotPoissonSubmanifold(
                        f"{{{i},{vj}}} does not extend over {za} = 0 in chart {bc.index}",
                        chart=bc.index, entry=[i, vj], witness=wit,
                    )
                table[(i, vj)] = q
        tables.append(table)
    # second pass: entries between two v coordinates
    for bc, table in zip(charts, tables):
        ch, za = bc.chart, bc.center_coord
        zap = Poly.gen(ch, za)
        vs = [g for g in G if g != za]
        for i, j in combinations(vs, 2):
            num = bc.pull(degeneracy_expression(sigma, za, i, j))
            q, wit = _divide_or_witness(num, zap, za, 3)
            if wit:
                raise NotDegenerate(
                    f"{{{bc.vnames[i]},{bc.vnames[j]}}} does not extend over {za} = 0 in chart {bc.index}",
                    chart=bc.index, entry=[bc.vnames[i], bc.vnames[j]], witness=wit,
                )
            table[(bc.vnames[i], bc.vnames[j])] = q
        for i in others:
            table[(za, i)] = bc.pull(sigma.entry(za, i))
        for i, i2 in combinations(others, 2):
            table[(i, i2)] = bc.pull(sigma.entry(i, i2))
    lifted = [HoloBivector(bc.chart, table) for bc, table in zip(charts, tables)]
    return BlowupAtlas(sigma, Z, charts, lifted)


# ----------------------------------------------------------------------
# verification
# ----------------------------------------------------------------------

@dataclass
class VerifyResult:
    ok: bool
    witness: Optional[dict] = None

    def __bool__(self):
        return self.ok


def transition(atlas: BlowupAtlas, a: int, b: int) -> Dict[str, RationalFn]:
    """Chart-``b`` coordinates as rational functions on chart ``a``."""
    ca, cb = atlas.charts[a - 1], atlas.charts[b - 1]
    cha = ca.chart
    za, zb = ca.center_coord, cb.center_coord
    vb_a = RationalFn(Poly.gen(cha, ca.vnames[zb]))
    out: Dict[str, RationalFn] = {}
    for name in cb.chart.holo_coords:
        if name == zb:
            out[name] = RationalFn(Poly.gen(cha, za)) * vb_a
        elif name == cb.vnames.get(za):
            out[name] = RationalFn(Poly.one(cha)) / vb_a
        elif name in cb.vnames.values():
            g = next(k for k, v in cb.vnames.items() if v == name)
            out[name] = RationalFn(Poly.gen(cha, ca.vnames[g])) / vb_a
        else:
            out[name] = RationalFn(Poly.gen(cha, name))
    return out


def verify_lift(sigma: HoloBivector, atlas: BlowupAtlas) -> VerifyResult:
    """Pushforward identities on every chart plus consistency on chart overlaps."""
    src = sigma.chart
    zs = {n: Poly.gen(src, n) for n in src.holo_coords}
    for bc, lt in zip(atlas.charts, atlas.lifted):
        pulled = {n: bc.pull(z) for n, z in zs.items()}
        for f, g in combinations(src.holo_coords, 2):
            lhs = lt.bracket(pulled[f], pulled[g])
            rhs = bc.pull(sigma.entry(f, g))
            if lhs != rhs:
                return VerifyResult(False, {"chart": bc.index, "pair": [f, g], "lifted": str(lhs), "expected": str(rhs)})
    for a in range(1, len(atlas.charts) + 1):
        for b in range(1, len(atlas.charts) + 1):
            if a == b:
                continue
            phi = transition(atlas, a, b)
            la, lb = atlas.lifted[a - 1], atlas.lifted[b - 1]
            names = atlas.charts[b - 1].chart.holo_coords
            for x, y in combinations(names, 2):
                lhs = la.bracket(phi[x], phi[y])
                rhs = RationalFn(lb.entry(x, y)).substitute(phi, atlas.charts[a - 1].chart)
                if lhs != rhs:
                    return VerifyResult(False, {"overlap": [a, b], "pair": [x, y], "lifted": str(lhs), "expected": str(rhs)})
    return VerifyResult(True)


def exceptional_divisor_poisson(atlas: BlowupAtlas) -> bool:
    """In every chart ``{z^a, .}`` of the lift lies in the ideal ``<z^a>``."""
    for bc, lt in zip(atlas.charts, atlas.lifted):
        za = bc.center_coord
        j = bc.chart.index(za)
        for y in bc.chart.holo_coords:
            if y == za:
                continue
            e = lt.entry(za, y)
            if any(var_exp(m, j) == 0 for m in e.terms):
                return False
    return True

"""Polynomial differential forms and polyvector fields on a chart.

Both are stored as ``{blade bitmask: Poly}``.  Bit ``j`` of a blade stands
for ``d(gen_j)`` in a form and ``d/d(gen_j)`` in a polyvector, with the
generator order of :class:`gcx.poly.Chart`.  Blades are kept in increasing
bit order, so every stored term is already sign-normalised.

Contraction of a decomposable polyvector uses

    iota(X1 ^ X2 ^ ... ^ Xr) = iota(Xr) o ... o iota(X2) o iota(X1),

i.e. ``X1`` is contracted first.  This is the convention under which the
annihilator of ``exp(sigma)(dz1...dzk)`` is ``T01 + (1 + sigma)(T*)10`` with
``sigma(xi) = sigma(xi, .)``; the acceptance suite re-checks it.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

from .errors import ChartMismatch, InvalidInput, NotClosed, NotVanishingOnBase, ZeroWeightComponent
from .poly import ONE, Chart, GaussRat, Poly, format_terms, var_exp


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(x: int) -> int:
    return bin(x).count("1")


def wedge_sign(a: int, b: int) -> int:
    """Sign of sorting blade ``a`` followed by blade ``b``; 0 if they overlap."""
    if a & b:
        return 0
    s = 0
    for j in bits(b):
        s += popcount(a >> (j + 1))
    return -1 if s & 1 else 1


def contract_bit(j: int, mask: int) -> Tuple[int, int]:
    """Interior product of the ``j``-th basis element into a blade: (sign, new mask)."""
    if not (mask >> j) & 1:
        return 0, 0
    s = popcount(mask & ((1 << j) - 1))
    return (-1 if s & 1 else 1), mask ^ (1 << j)


def contract_blade(vmask: int, fmask: int) -> Tuple[int, int]:
    """Contract the vector blade ``vmask`` (lowest index first) into ``fmask``."""
    sign = 1
    for j in bits(vmask):
        s, fmask = contract_bit(j, fmask)
        if not s:
            return 0, 0
        sign *= s
    return sign, fmask


class _Graded:
    """Shared storage for forms and polyvectors."""

    __slots__ = ("chart", "terms")
    prefix = "?"

    def __init__(self, chart: Chart, terms: Mapping[int, Poly] | None = None):
        self.chart = chart
        clean = {}
        for mask, p in (terms or {}).items():
            if p.chart != chart:
                raise ChartMismatch("coefficient on another chart")
            if p:
                clean[mask] = p
        self.terms = clean

    @classmethod
    def _raw(cls, chart, terms):
        obj = cls.__new__(cls)
        obj.chart = chart
        obj.terms = terms
        return obj

    # constructors ------------------------------------------------------
    @classmethod
    def zero(cls, chart: Chart):
        return cls._raw(chart, {})

    @classmethod
    def scalar(cls, p):
        if not isinstance(p, Poly):
            raise TypeError("scalar() needs a Poly")
        return cls._raw(p.chart, {0: p} if p else {})

    @classmethod
    def gen(cls, chart: Chart, name_or_index, coeff: Poly | None = None):
        j = chart.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        c = Poly.one(chart) if coeff is None else coeff
        return cls._raw(chart, {1 << j: c} if c else {})

    @classmethod
    def blade(cls, chart: Chart, names: Sequence, coeff: Poly | None = None):
        """Ordered product of generators, e.g. ``blade(ch, ['z2', 'z1'])`` = -dz1^dz2."""
        out = cls.scalar(Poly.one(chart) if coeff is None else coeff)
        for n in names:
            out = out.wedge(cls.gen(chart, n))
        return out

    # structure ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self):
        return sorted({popcount(m) for m in self.terms})

    def component(self, deg: int):
        return type(self)._raw(self.chart, {m: p for m, p in self.terms.items() if popcount(m) == deg})

    def scalar_part(self) -> Poly:
        return self.terms.get(0, Poly.zero(self.chart))

    def is_homogeneous(self, deg: int) -> bool:
        return all(popcount(m) == deg for m in self.terms)

    def coefficient(self, names: Sequence[str]) -> Poly:
        """Coefficient of the blade with the given generator names (any order)."""
        mask = 0
        sign = 1
        for n in names:
            j = self.chart.index(n)
            s = wedge_sign(mask, 1 << j)
            if not s:
                return Poly.zero(self.chart)
            sign *= s
            mask |= 1 << j
        p = self.terms.get(mask)
        if p is None:
            return Poly.zero(self.chart)
        return p * sign

    # linear structure --------------------------------------------------
    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.chart != self.chart:
            raise ChartMismatch(f"{self.chart} vs {other.chart}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussRat, Poly)) and not isinstance(other, _Graded):
            other = type(self).scalar(_as_poly(self.chart, other))
        self._check(other)
        out = dict(self.terms)
        for m, p in other.terms.items():
            q = out.get(m)
            if q is None:
                out[m] = p
            else:
                q = q + p
                if q:
                    out[m] = q
                else:
                    del out[m]
        return type(self)._raw(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.chart, {m: -p for m, p in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussRat, Poly)) and not isinstance(other, _Graded):
            other = type(self).scalar(_as_poly(self.chart, other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "_Graded":
        """Multiply every coefficient by a scalar or Poly."""
        if isinstance(c, Poly):
            if c.chart != self.chart:
                raise ChartMismatch("scale by a polynomial on another chart")
        elif not GaussRat.coerce(c):
            return type(self).zero(self.chart)
        out = {}
        for m, p in self.terms.items():
            q = p * c
            if q:
                out[m] = q
        return type(self)._raw(self.chart, out)

    def wedge(self, other):
        self._check(other)
        out: Dict[int, Poly] = {}
        for a, p in self.terms.items():
            for b, q in other.terms.items():
                s = wedge_sign(a, b)
                if not s:
                    continue
                r = p * q
                if s < 0:
                    r = -r
                m = a | b
                cur = out.get(m)
                out[m] = r if cur is None else cur + r
        return type(self)._raw(self.chart, {m: p for m, p in out.items() if p})

    def __mul__(self, other):
        if isinstance(other, _Graded):
            return self.wedge(other)
        if isinstance(other, (int, Fraction, GaussRat, Poly)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat, Poly)):
            return self.scale(other)
        return NotImplemented

    # pointwise & conjugation -------------------------------------------
    def coeffs_at(self, values: Sequence[GaussRat]) -> Dict[int, GaussRat]:
        """Numeric coefficients at full generator values; zero entries dropped."""
        out = {}
        for m, p in self.terms.items():
            v = p.evaluate(values)
            if v:
                out[m] = v
        return out

    def at(self, values: Sequence[GaussRat]):
        """Constant-coefficient copy of this object frozen at a point."""
        return type(self)._raw(
            self.chart, {m: Poly.const(self.chart, v) for m, v in self.coeffs_at(values).items()}
        )

    def conjugate(self):
        ch = self.chart
        out = {}
        for m, p in self.terms.items():
            sign, nm = 1, 0
            for j in bits(m):
                s = wedge_sign(nm, 1 << ch.conj_index(j))
                sign *= s
                nm |= 1 << ch.conj_index(j)
            q = p.conjugate()
            out[nm] = q if sign > 0 else -q
        return type(self)._raw(ch, out)

    def map_coeffs(self, fn):
        out = {}
        for m, p in self.terms.items():
            q = fn(p)
            if q:
                out[m] = q
        return type(self)._raw(self.chart, out)

    def is_holomorphic(self) -> bool:
        return all(p.is_holomorphic() for p in self.terms.values())

    # printing ----------------------------------------------------------
    def blade_str(self, mask: int) -> str:
        return "*".join(self.prefix + self.chart.names[j] for j in bits(mask))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mp: (popcount(mp[0]), tuple(bits(mp[0]))))

    def __str__(self):
        items = []
        for mask, p in self.sorted_terms():
            bl = self.blade_str(mask)
            if len(p.terms) == 1:
                (mono, c), = p.terms.items()
                ms = p.monomial_str(mono) if mono else ""
                items.append(("*".join(s for s in (ms, bl) if s), c))
            else:
                items.append((f"({p})" + (f"*{bl}" if bl else ""), ONE))
        return format_terms(items)

    def __repr__(self):
        return f"{type(self).__name__}({self})"

    def __eq__(self, other):
        if isinstance(other, _Graded):
            return type(self) is type(other) and self.chart == other.chart and self.terms == other.terms
        if isinstance(other, (int, Fraction, GaussRat, Poly)):
            return self.terms == type(self).scalar(_as_poly(self.chart, other)).terms
        return NotImplemented

    def __hash__(self):
        return hash((type(self).__name__, self.chart, frozenset(self.terms.items())))


def _as_poly(chart, x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(chart, x)


class Form(_Graded):
    """Mixed-degree differential form with polynomial coefficients."""

    __slots__ = ()
    prefix = "d"


class PolyVector(_Graded):
    """Mixed-degree polyvector field with polynomial coefficients."""

    __slots__ = ()
    prefix = "dd"

    def components(self) -> list:
        """Degree-1 coefficients as a list indexed by generator."""
        return [self.terms.get(1 << j, Poly.zero(self.chart)) for j in range(self.chart.nvars)]

    def apply(self, f: Poly) -> Poly:
        """Directional derivative ``X(f)`` for a degree-1 field."""
        out = Poly.zero(self.chart)
        for m, p in self.terms.items():
            if popcount(m) != 1:
                raise InvalidInput("apply() needs a vector field (degree 1)")
            j = m.bit_length() - 1
            d = f.partial(j)
            if d:
                out = out + p * d
        return out


def vector_from_components(chart: Chart, comps: Sequence[Poly]) -> PolyVector:
    return PolyVector(chart, {1 << j: c for j, c in enumerate(comps) if c})


def form_from_components(chart: Chart, comps: Sequence[Poly]) -> Form:
    return Form(chart, {1 << j: c for j, c in enumerate(comps) if c})


# ----------------------------------------------------------------------
# operations
# ----------------------------------------------------------------------

def wedge(a: Form, b: Form) -> Form:
    return a.wedge(b)


def contract(W: PolyVector, alpha: Form) -> Form:
    """Interior product of a polyvector into a form (convention in module docstring)."""
    if not isinstance(W, PolyVector) or not isinstance(alpha, Form):
        raise TypeError("contract(PolyVector, Form)")
    if W.chart != alpha.chart:
        raise ChartMismatch(f"{W.chart} vs {alpha.chart}")
    out: Dict[int, Poly] = {}
    for vm, p in W.terms.items():
        for fm, q in alpha.terms.items():
            if vm & fm != vm:
                continue
            s, nm = contract_blade(vm, fm)
            r = p * q
            if s < 0:
                r = -r
            cur = out.get(nm)
            out[nm] = r if cur is None else cur + r
    return Form._raw(alpha.chart, {m: p for m, p in out.items() if p})


def contract_covector(xi: Form, W: PolyVector) -> PolyVector:
    """Contract a 1-form into the first slot of a polyvector, e.g. sigma(xi, .)."""
    if xi.chart != W.chart:
        raise ChartMismatch(f"{xi.chart} vs {W.chart}")
    out: Dict[int, Poly] = {}
    for fm, q in xi.terms.items():
        if popcount(fm) != 1:
            raise InvalidInput("contract_covector needs a 1-form")
        j = fm.bit_length() - 1
        for vm, p in W.terms.items():
            s, nm = contract_bit(j, vm)
            if not s:
                continue
            r = p * q
            if s < 0:
                r = -r
            cur = out.get(nm)
            out[nm] = r if cur is None else cur + r
    return PolyVector._raw(W.chart, {m: p for m, p in out.items() if p})


def ext_d(alpha: Form) -> Form:
    """Exterior derivative, summing over every generator (z and zbar independent)."""
    ch = alpha.chart
    out: Dict[int, Poly] = {}
    for mask, p in alpha.terms.items():
        for j in range(ch.nvars):
            if (mask >> j) & 1:
                continue
            dp = p.partial(j)
            if not dp:
                continue
            s = popcount(mask & ((1 << j) - 1))
            if s & 1:
                dp = -dp
            nm = mask | (1 << j)
            cur = out.get(nm)
            out[nm] = dp if cur is None else cur + dp
    return Form._raw(ch, {m: p for m, p in out.items() if p})


def lie_derivative(X: PolyVector, alpha: Form) -> Form:
    """Cartan formula ``L_X = iota_X d + d iota_X`` for a vector field ``X``."""
    if any(popcount(m) != 1 for m in X.terms):
        raise InvalidInput("Lie derivative needs a vector field (degree 1)")
    return contract(X, ext_d(alpha)) + ext_d(contract(X, alpha))


def lie_bracket(X: PolyVector, Y: PolyVector) -> PolyVector:
    if X.chart != Y.chart:
        raise ChartMismatch(f"{X.chart} vs {Y.chart}")
    ch = X.chart
    xs, ys = X.components(), Y.components()
    return vector_from_components(ch, [X.apply(ys[j]) - Y.apply(xs[j]) for j in range(ch.nvars)])


def transpose(alpha: _Graded):
    """Reverse wedge order: degree-l part picks up (-1)^(l(l-1)/2)."""
    out = {}
    for m, p in alpha.terms.items():
        l = popcount(m)
        out[m] = -p if (l * (l - 1) // 2) & 1 else p
    return type(alpha)._raw(alpha.chart, out)


def exp_act(arg: _Graded, rho: Form) -> Form:
    """``exp(B) ^ rho`` for a 2-form ``B``, or ``exp(iota_W) rho`` for a bivector ``W``."""
    if arg.chart != rho.chart:
        raise ChartMismatch(f"{arg.chart} vs {rho.chart}")
    if isinstance(arg, Form):
        if not arg.is_homogeneous(2):
            raise InvalidInput("exp_act needs a homogeneous 2-form")
        step = lambda r: arg.wedge(r)
    elif isinstance(arg, PolyVector):
        if not arg.is_homogeneous(2):
            raise InvalidInput("exp_act needs a homogeneous bivector")
        step = lambda r: contract(arg, r)
    else:
        raise TypeError("exp_act needs a Form or PolyVector")
    total = rho
    term = rho
    j = 0
    while True:
        j += 1
        term = step(term)
        if term.is_zero():
            return total
        total = total + term.scale(Fraction(1, factorial(j)))


def fiber_indices(chart: Chart, fiber_coords: Iterable[str]) -> Tuple[int, ...]:
    """Generator indices of the fiber directions (a holomorphic name brings its conjugate)."""
    idx = set()
    for name in fiber_coords:
        j = chart.index(name)
        idx.add(j)
        idx.add(chart.conj_index(j))
    return tuple(sorted(idx))


def fiber_weight(mask: int, mono: int, fiber: Sequence[int]) -> int:
    return sum(var_exp(mono, j) + ((mask >> j) & 1) for j in fiber)


def euler_field(chart: Chart, fiber_coords: Iterable[str]) -> PolyVector:
    return vector_from_components(
        chart,
        [Poly.gen(chart, j) if j in set(fiber_indices(chart, fiber_coords)) else Poly.zero(chart)
         for j in range(chart.nvars)],
    )


def radial_homotopy(alpha: Form, fiber_coords: Iterable[str]) -> Form:
    """Primitive ``eta`` of a closed form vanishing on the zero section.

    ``eta = iota_V sum_w alpha_w / w`` with ``V`` the Euler field of the fiber
    and ``alpha_w`` the fiber-weight-``w`` part of ``alpha``.  Then
    ``d eta = alpha`` and ``eta`` vanishes to second order along the base.
    """
    ch = alpha.chart
    fiber_coords = tuple(fiber_coords)
    fiber = fiber_indices(ch, fiber_coords)
    d_alpha = ext_d(alpha)
    if d_alpha:
        raise NotClosed("form is not closed", witness=str(d_alpha))
    for mask, p in alpha.terms.items():
        for mono, c in p.terms.items():
            if all(var_exp(mono, j) == 0 for j in fiber):
                raise NotVanishingOnBase(
                    "coefficient does not vanish on the zero section",
                    blade=alpha.blade_str(mask) or "1",
                    monomial=p.monomial_str(mono),
                )
    by_weight: Dict[int, Dict[int, Dict[int, GaussRat]]] = {}
    for mask, p in alpha.terms.items():
        for mono, c in p.terms.items():
            w = fiber_weight(mask, mono, fiber)
            by_weight.setdefault(w, {}).setdefault(mask, {})[mono] = c
    if 0 in by_weight:
        raise ZeroWeightComponent("weight-0 component present")
    V = euler_field(ch, fiber_coords)
    eta = Form.zero(ch)
    for w, comp in sorted(by_weight.items()):
        part = Form(ch, {m: Poly(ch, t) for m, t in comp.items()})
        eta = eta + contract(V, part).scale(Fraction(1, w))
    return eta


def vanishes_along_base(alpha: Form, fiber_coords: Iterable[str], order: int = 1) -> bool:
    """Coefficients and their partials of order ``< order`` vanish where the fiber coordinates are 0."""
    ch = alpha.chart
    zero = {name: 0 for name in fiber_coords}
    layer = [p for p in alpha.terms.values()]
    for _ in range(order):
        if any(p.restrict(zero) for p in layer):
            return False
        layer = [p.partial(j) for p in layer for j in range(ch.nvars)]
    return True

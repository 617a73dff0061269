"""Exact polynomials over the Gaussian rationals on a coordinate chart.

A chart declares real coordinates ``x1..xm`` and holomorphic coordinates
``z1..zk``.  Each holomorphic coordinate brings an independent conjugate
generator ``zbar1..zbark`` (Wirtinger convention), so a chart has
``m + 2k`` polynomial generators, ordered real, holomorphic, conjugate.

Monomials are packed into a single Python int, ``_BITS`` bits per
generator, which turns monomial multiplication into integer addition.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

from .errors import (
    ChartMismatch,
    DivisionByZeroDenominator,
    InvalidInput,
    NotDivisible,
    UnknownCoordinate,
    ZeroDivisor,
)

_BITS = 16
_MASK = (1 << _BITS) - 1

Number = Union[int, Fraction, "GaussRat"]


def _norm(q):
    if type(q) is Fraction and q.denominator == 1:
        return q.numerator
    return q


class GaussRat:
    """An exact element ``re + i*im`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussRat):
            re, im = re.re, re.im
        if isinstance(re, float) or isinstance(im, float):
            raise TypeError("GaussRat refuses floats; use Fraction or int")
        if isinstance(re, str):
            re = Fraction(re)
        if isinstance(im, str):
            im = Fraction(im)
        self.re = _norm(re)
        self.im = _norm(im)

    @staticmethod
    def coerce(x) -> "GaussRat":
        if type(x) is GaussRat:
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRat(x, 0)
        if isinstance(x, complex):
            raise TypeError("GaussRat refuses complex floats")
        if isinstance(x, str):
            return GaussRat(Fraction(x), 0)
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussRat")

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if type(other) is not GaussRat:
            if isinstance(other, (int, Fraction)):
                return _mk(self.re + other, self.im)
            return NotImplemented
        return _mk(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is not GaussRat:
            if isinstance(other, (int, Fraction)):
                return _mk(self.re - other, self.im)
            return NotImplemented
        return _mk(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return _mk(-self.re, -self.im)

    def __mul__(self, other):
        if type(other) is not GaussRat:
            if isinstance(other, (int, Fraction)):
                return _mk(self.re * other, self.im * other)
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return _mk(a * c, 0)
        return _mk(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussRat.coerce(other)
        c, d = other.re, other.im
        den = c * c + d * d
        if not den:
            raise ZeroDivisionError("GaussRat division by zero")
        a, b = self.re, self.im
        return _mk(Fraction(a * c + b * d, 1) / den, Fraction(b * c - a * d, 1) / den)

    def __rtruediv__(self, other):
        return GaussRat.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return (GaussRat(1) / self) ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "GaussRat":
        return _mk(self.re, -self.im)

    def __eq__(self, other):
        if type(other) is GaussRat:
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussRat({self})"

    def __str__(self):
        return format_scalar(self)


def _mk(re, im) -> GaussRat:
    g = GaussRat.__new__(GaussRat)
    g.re = _norm(re)
    g.im = _norm(im)
    return g


ZERO = _mk(0, 0)
ONE = _mk(1, 0)
I = _mk(0, 1)


def format_scalar(c: GaussRat) -> str:
    """Canonical, parseable text for a Gaussian rational."""
    re_, im_ = c.re, c.im
    if not im_:
        return str(re_)
    if not re_:
        if im_ == 1:
            return "i"
        if im_ == -1:
            return "-i"
        return f"{im_}*i"
    sign = "+" if im_ > 0 else "-"
    mag = abs(im_)
    ipart = "i" if mag == 1 else f"{mag}*i"
    return f"({re_}{sign}{ipart})"


# ----------------------------------------------------------------------
# charts
# ----------------------------------------------------------------------

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def bar_name(name: str) -> str:
    """``z1`` -> ``zbar1``; ``w`` -> ``wbar``."""
    m = re.match(r"^(.*?)(\d*)$", name)
    return f"{m.group(1)}bar{m.group(2)}"


@dataclass(frozen=True)
class Chart:
    real_coords: Tuple[str, ...] = ()
    holo_coords: Tuple[str, ...] = ()
    _index: Dict[str, int] = field(default=None, init=False, repr=False, compare=False, hash=False)
    names: Tuple[str, ...] = field(default=(), init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "real_coords", tuple(self.real_coords))
        object.__setattr__(self, "holo_coords", tuple(self.holo_coords))
        names = list(self.real_coords) + list(self.holo_coords)
        names += [bar_name(z) for z in self.holo_coords]
        if len(set(names)) != len(names):
            raise InvalidInput(f"duplicate coordinate names in chart {names}")
        for n in names:
            if not _NAME_RE.match(n):
                raise InvalidInput(f"invalid coordinate name {n!r}")
            if n == "i" or n.startswith("d"):
                raise InvalidInput(f"coordinate name {n!r} is reserved (i, d*)")
        object.__setattr__(self, "names", tuple(names))
        object.__setattr__(self, "_index", {n: k for k, n in enumerate(names)})

    @property
    def m(self) -> int:
        return len(self.real_coords)

    @property
    def k(self) -> int:
        return len(self.holo_coords)

    @property
    def nvars(self) -> int:
        return self.m + 2 * self.k

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownCoordinate(f"unknown coordinate {name!r}", name=name) from None

    def has(self, name: str) -> bool:
        return name in self._index

    def is_holo(self, idx: int) -> bool:
        return self.m <= idx < self.m + self.k

    def is_antiholo(self, idx: int) -> bool:
        return idx >= self.m + self.k

    def conj_index(self, idx: int) -> int:
        """Index of the conjugate generator (real generators are self-conjugate)."""
        if idx < self.m:
            return idx
        if idx < self.m + self.k:
            return idx + self.k
        return idx - self.k

    @property
    def coords(self) -> Tuple[str, ...]:
        """Point coordinates: real then holomorphic (conjugates are implied)."""
        return self.real_coords + self.holo_coords

    def point(self, values: Union[Mapping[str, Number], Sequence[Number]]) -> Tuple[GaussRat, ...]:
        """Full generator values for a point, filling conjugates automatically."""
        if isinstance(values, Mapping):
            missing = [c for c in self.coords if c not in values]
            if missing:
                raise InvalidInput(f"point misses coordinates {missing}")
            vals = [GaussRat.coerce(values[c]) for c in self.coords]
        else:
            vals = [GaussRat.coerce(v) for v in values]
            if len(vals) != len(self.coords):
                raise InvalidInput(f"point needs {len(self.coords)} values, got {len(vals)}")
        for c, v in zip(self.real_coords, vals):
            if not v.is_real():
                raise InvalidInput(f"real coordinate {c} given a complex value")
        return tuple(vals) + tuple(v.conjugate() for v in vals[self.m:])

    def __str__(self):
        return f"Chart(real={list(self.real_coords)}, holo={list(self.holo_coords)})"


def _same_chart(a, b):
    if a.chart != b.chart:
        raise ChartMismatch(f"{a.chart} vs {b.chart}")


# ----------------------------------------------------------------------
# monomials
# ----------------------------------------------------------------------

def unpack(mono: int, n: int) -> Tuple[int, ...]:
    return tuple((mono >> (_BITS * j)) & _MASK for j in range(n))


def pack(exps: Iterable[int]) -> int:
    out = 0
    for j, e in enumerate(exps):
        if e < 0 or e > _MASK:
            raise ValueError("exponent out of range")
        out |= e << (_BITS * j)
    return out


def var_exp(mono: int, j: int) -> int:
    return (mono >> (_BITS * j)) & _MASK


def var_mono(j: int, e: int = 1) -> int:
    return e << (_BITS * j)


def mono_degree(mono: int) -> int:
    d = 0
    while mono:
        d += mono & _MASK
        mono >>= _BITS
    return d


def mono_divides(a: int, b: int, n: int) -> bool:
    """True if monomial ``a`` divides ``b``."""
    for j in range(n):
        if var_exp(a, j) > var_exp(b, j):
            return False
    return True


def grlex_key(mono: int, n: int):
    exps = unpack(mono, n)
    return (sum(exps), exps)


# ----------------------------------------------------------------------
# polynomials
# ----------------------------------------------------------------------

class Poly:
    """Immutable polynomial; ``terms`` maps packed monomial -> GaussRat."""

    __slots__ = ("chart", "terms", "_hash")

    def __init__(self, chart: Chart, terms: Mapping[int, GaussRat] | None = None):
        self.chart = chart
        self.terms = {m: c for m, c in (terms or {}).items() if c}
        self._hash = None

    # constructors ------------------------------------------------------
    @classmethod
    def _raw(cls, chart, terms):
        p = cls.__new__(cls)
        p.chart = chart
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, chart: Chart, c) -> "Poly":
        c = GaussRat.coerce(c)
        return cls._raw(chart, {0: c} if c else {})

    @classmethod
    def zero(cls, chart: Chart) -> "Poly":
        return cls._raw(chart, {})

    @classmethod
    def one(cls, chart: Chart) -> "Poly":
        return cls._raw(chart, {0: ONE})

    @classmethod
    def gen(cls, chart: Chart, name_or_index, power: int = 1) -> "Poly":
        j = chart.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        return cls._raw(chart, {var_mono(j, power): ONE})

    @classmethod
    def monomial(cls, chart: Chart, exps: Sequence[int], c=1) -> "Poly":
        return cls._raw(chart, {pack(exps): GaussRat.coerce(c)}) if GaussRat.coerce(c) else cls.zero(chart)

    # predicates --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_term(self) -> GaussRat:
        return self.terms.get(0, ZERO)

    def is_holomorphic(self) -> bool:
        """No conjugate generator appears."""
        ch = self.chart
        for mono in self.terms:
            for j in range(ch.m + ch.k, ch.nvars):
                if var_exp(mono, j):
                    return False
        return True

    def degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=-1)

    # arithmetic --------------------------------------------------------
    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            _same_chart(self, other)
            return other
        if isinstance(other, (int, Fraction, GaussRat)):
            return Poly.const(self.chart, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly._raw(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.chart, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            c = GaussRat.coerce(other)
            if not c:
                return Poly.zero(self.chart)
            return Poly._raw(self.chart, {m: v * c for m, v in self.terms.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        out: Dict[int, GaussRat] = {}
        get = out.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 + m2
                v = get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return Poly._raw(self.chart, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        out = Poly.one(self.chart)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            c = GaussRat.coerce(other)
            if not c:
                raise ZeroDivisor("division of a polynomial by zero")
            inv = ONE / c
            return self * inv
        if isinstance(other, Poly):
            return RationalFn(self, other)
        return NotImplemented

    # calculus & maps ---------------------------------------------------
    def partial(self, var) -> "Poly":
        """Partial derivative; ``z`` and ``zbar`` are independent generators."""
        j = self.chart.index(var) if isinstance(var, str) else var
        step = var_mono(j)
        out = {}
        for m, c in self.terms.items():
            e = var_exp(m, j)
            if e:
                out[m - step] = c * e
        return Poly._raw(self.chart, out)

    def conjugate(self) -> "Poly":
        ch = self.chart
        out = {}
        for m, c in self.terms.items():
            out[_conj_mono(m, ch)] = c.conjugate()
        return Poly._raw(ch, out)

    def evaluate(self, values: Sequence[GaussRat]) -> GaussRat:
        """Evaluate at full generator values (see :meth:`Chart.point`)."""
        n = self.chart.nvars
        total = ZERO
        cache: Dict[Tuple[int, int], GaussRat] = {}
        for m, c in self.terms.items():
            term = c
            for j in range(n):
                e = var_exp(m, j)
                if e:
                    key = (j, e)
                    pw = cache.get(key)
                    if pw is None:
                        pw = values[j] ** e
                        cache[key] = pw
                    term = term * pw
            total = total + term
        return total

    def at(self, point: Union[Mapping[str, Number], Sequence[Number]]) -> GaussRat:
        return self.evaluate(self.chart.point(point))

    def substitute(self, mapping: Mapping[str, Union["Poly", "RationalFn"]], target: Chart | None = None):
        """Replace coordinates by polynomials or rational functions in ``target``.

        Conjugate generators follow their holomorphic partner.  Coordinates
        absent from ``mapping`` must exist under the same name in ``target``.
        """
        target = target or self.chart
        images = []
        rational = False
        src = self.chart
        for j, name in enumerate(src.names[: src.m + src.k]):
            img = mapping.get(name)
            if img is None:
                if not target.has(name):
                    raise UnknownCoordinate(f"substitution target misses {name!r}", name=name)
                img = Poly.gen(target, name)
            if isinstance(img, (int, Fraction, GaussRat)):
                img = Poly.const(target, img)
            if img.chart != target:
                raise ChartMismatch("substitution image lives on another chart")
            rational = rational or isinstance(img, RationalFn)
            images.append(img)
        images += [images[src.m + t].conjugate() for t in range(src.k)]
        if rational:
            images = [im if isinstance(im, RationalFn) else RationalFn(im) for im in images]
            total = RationalFn(Poly.zero(target))
        else:
            total = Poly.zero(target)
        cache = {}
        for m, c in self.terms.items():
            term = None
            for j in range(src.nvars):
                e = var_exp(m, j)
                if e:
                    pw = cache.get((j, e))
                    if pw is None:
                        pw = images[j] ** e
                        cache[(j, e)] = pw
                    term = pw if term is None else term * pw
            if term is None:
                term = RationalFn(Poly.one(target)) if rational else Poly.one(target)
            total = total + term * c
        return total

    def restrict(self, values: Mapping[str, Number]) -> "Poly":
        """Set some coordinates (and their conjugates) to constants; same chart."""
        mapping = {name: Poly.const(self.chart, v) for name, v in values.items()}
        return self.substitute(mapping, self.chart)

    # ordering & printing -----------------------------------------------
    def sorted_terms(self):
        n = self.chart.nvars
        return sorted(self.terms.items(), key=lambda mc: grlex_key(mc[0], n), reverse=True)

    def leading(self):
        """Leading (monomial, coefficient) in graded lex order."""
        n = self.chart.nvars
        m = max(self.terms, key=lambda mm: grlex_key(mm, n))
        return m, self.terms[m]

    def monomial_str(self, mono: int) -> str:
        parts = []
        for j, name in enumerate(self.chart.names):
            e = var_exp(mono, j)
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"

    def __str__(self):
        return format_terms([(self.monomial_str(m) if m else "", c) for m, c in self.sorted_terms()])

    def __repr__(self):
        return f"Poly({self})"

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.chart == other.chart and self.terms == other.terms
        if isinstance(other, (int, Fraction, GaussRat)):
            c = GaussRat.coerce(other)
            return self.terms == ({0: c} if c else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self.terms.items())))
        return self._hash


def _conj_mono(m: int, ch: Chart) -> int:
    if not ch.k:
        return m
    base = m & ((1 << (_BITS * ch.m)) - 1)
    width = _BITS * ch.k
    holo = (m >> (_BITS * ch.m)) & ((1 << width) - 1)
    anti = m >> (_BITS * (ch.m + ch.k))
    return base | (anti << (_BITS * ch.m)) | (holo << (_BITS * (ch.m + ch.k)))


def format_terms(items) -> str:
    """Join (monomial text, coefficient) pairs; empty monomial means constant."""
    if not items:
        return "0"
    out = []
    for k, (mono, c) in enumerate(items):
        neg = (not c.im and c.re < 0) or (not c.re and c.im < 0)
        mag = -c if neg else c
        if mono:
            body = mono if mag == ONE else f"{format_scalar(mag)}*{mono}"
        else:
            body = format_scalar(mag)
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# ----------------------------------------------------------------------
# division
# ----------------------------------------------------------------------

def exact_divide(f: Poly, g: Poly) -> Poly:
    """Return ``q`` with ``f == q*g`` or raise :class:`NotDivisible`."""
    _same_chart(f, g)
    if g.is_zero():
        raise ZeroDivisor("division by the zero polynomial")
    ch = f.chart
    n = ch.nvars
    if len(g.terms) == 1:
        (gm, gc), = g.terms.items()
        inv = ONE / gc
        out = {}
        for m, c in f.sorted_terms():
            if not mono_divides(gm, m, n):
                raise NotDivisible(
                    f"monomial {f.monomial_str(m)} not divisible by {g.monomial_str(gm)}",
                    witness=f.monomial_str(m),
                )
            out[m - gm] = c * inv
        return Poly._raw(ch, out)
    gm, gc = g.leading()
    inv = ONE / gc
    q: Dict[int, GaussRat] = {}
    r = f
    while r.terms:
        rm, rc = r.leading()
        if not mono_divides(gm, rm, n):
            raise NotDivisible(
                f"leading monomial {r.monomial_str(rm)} of the remainder is not divisible by "
                f"{g.monomial_str(gm)}",
                witness=r.monomial_str(rm),
            )
        tm, tc = rm - gm, rc * inv
        q[tm] = q.get(tm, ZERO) + tc
        r = r - Poly._raw(ch, {tm: tc}) * g
    return Poly(ch, q)


def divides(g: Poly, f: Poly) -> bool:
    try:
        exact_divide(f, g)
    except NotDivisible:
        return False
    return True


# ----------------------------------------------------------------------
# rational functions
# ----------------------------------------------------------------------

class RationalFn:
    """``num/den`` with den != 0, lightly normalised; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is None:
            den = Poly.one(num.chart)
        _same_chart(num, den)
        if den.is_zero():
            raise DivisionByZeroDenominator("rational function with zero denominator")
        self.num, self.den = _normalize(num, den)

    @property
    def chart(self) -> Chart:
        return self.num.chart

    @classmethod
    def _raw(cls, num, den):
        r = cls.__new__(cls)
        r.num, r.den = num, den
        return r

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> Poly:
        if not self.den.is_constant():
            return exact_divide(self.num, self.den)
        return self.num / self.den.constant_term()

    def _lift(self, other):
        if isinstance(other, RationalFn):
            _same_chart(self, other)
            return other
        if isinstance(other, Poly):
            _same_chart(self, other)
            return RationalFn._raw(other, Poly.one(other.chart))
        if isinstance(other, (int, Fraction, GaussRat)):
            return RationalFn._raw(Poly.const(self.chart, other), Poly.one(self.chart))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == o.den:
            return RationalFn(self.num + o.num, self.den)
        return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            return RationalFn._raw(self.num * other, self.den) if GaussRat.coerce(other) else RationalFn(Poly.zero(self.chart))
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o.num.is_zero():
            raise DivisionByZeroDenominator("division by a zero rational function")
        return RationalFn(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFn(Poly.one(self.chart)) / (self ** (-n))
        return RationalFn._raw(self.num ** n, self.den ** n)

    def partial(self, var) -> "RationalFn":
        n, d = self.num, self.den
        return RationalFn(n.partial(var) * d - n * d.partial(var), d * d)

    def conjugate(self) -> "RationalFn":
        return RationalFn(self.num.conjugate(), self.den.conjugate())

    def evaluate(self, values) -> GaussRat:
        d = self.den.evaluate(values)
        if not d:
            raise DivisionByZeroDenominator("denominator vanishes at the evaluation point")
        return self.num.evaluate(values) / d

    def at(self, point) -> GaussRat:
        return self.evaluate(self.chart.point(point))

    def substitute(self, mapping, target: Chart | None = None) -> "RationalFn":
        num = self.num.substitute(mapping, target)
        den = self.den.substitute(mapping, target)
        num = num if isinstance(num, RationalFn) else RationalFn(num)
        den = den if isinstance(den, RationalFn) else RationalFn(den)
        if den.is_zero():
            raise DivisionByZeroDenominator("substitution produced a zero denominator")
        return num / den

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        raise TypeError("RationalFn is unhashable (equality is by cross-multiplication)")

    def __str__(self):
        if self.den == Poly.one(self.chart):
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _normalize(num: Poly, den: Poly):
    ch = num.chart
    if num.is_zero():
        return num, Poly.one(ch)
    n = ch.nvars
    # cancel the common monomial factor
    common = None
    for m in list(num.terms) + list(den.terms):
        exps = unpack(m, n)
        common = exps if common is None else tuple(min(a, b) for a, b in zip(common, exps))
    cm = pack(common)
    if cm:
        num = Poly._raw(ch, {m - cm: c for m, c in num.terms.items()})
        den = Poly._raw(ch, {m - cm: c for m, c in den.terms.items()})
    if not den.is_constant():
        try:
            num = exact_divide(num, den)
            den = Poly.one(ch)
        except NotDivisible:
            pass
    _, lc = den.leading()
    if lc != ONE:
        inv = ONE / lc
        num, den = num * inv, den * inv
    return num, den


def as_rational(x) -> RationalFn:
    return x if isinstance(x, RationalFn) else RationalFn(x)


# ----------------------------------------------------------------------
# coordinate ideals
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CoordIdeal:
    """The ideal generated by some holomorphic coordinates, queried at power ``power``."""

    chart: Chart
    generators: Tuple[str, ...]
    power: int = 1

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g not in self.chart.holo_coords:
                raise InvalidInput(f"ideal generator {g!r} is not a holomorphic coordinate")
        if self.power < 1:
            raise InvalidInput("ideal power must be positive")

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(self.chart.index(g) for g in self.generators)

    def gen_degree(self, mono: int) -> int:
        return sum(var_exp(mono, j) for j in self.indices)

    def contains(self, f: Poly, m: int | None = None, holomorphic_only: bool = False) -> bool:
        return ideal_membership(f, self, self.power if m is None else m, holomorphic_only)

    def low_degree_part(self, f: Poly, m: int) -> Poly:
        """Terms of ``f`` whose generator degree is below ``m`` (the obstruction to I^m)."""
        return Poly(f.chart, {mm: c for mm, c in f.terms.items() if self.gen_degree(mm) < m})


def ideal_membership(f: Poly, Z: CoordIdeal, m: int, holomorphic_only: bool = False) -> bool:
    """``f in I_Z^m``: every monomial has degree >= m in the generators."""
    if f.chart != Z.chart:
        raise ChartMismatch("ideal and polynomial live on different charts")
    if holomorphic_only:
        ch = f.chart
        bars = [ch.conj_index(j) for j in Z.indices]
        for mono in f.terms:
            if any(var_exp(mono, b) for b in bars):
                raise InvalidInput("holomorphic ideal query on a polynomial with conjugate generators")
    return all(Z.gen_degree(mono) >= m for mono in f.terms)

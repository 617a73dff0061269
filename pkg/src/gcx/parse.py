"""Expression syntax for scalars, forms and polyvectors on a chart.

Identifiers are coordinates (``x``, ``z1``, ``zbar1``), form generators
(``dz1``), vector generators (``ddz1`` for d/dz1) and the imaginary unit
``i``.  Integer literals, ``+ - * / ^`` and parentheses complete the
grammar.  ``*`` wedges generators and scales otherwise; ``^`` raises
scalars to nonnegative integer powers; ``/`` divides by nonzero constants.

``str()`` of any parsed value is canonical and parses back to the same value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Union

from .errors import DegreeError, InvalidInput, ParseError, UnknownCoordinate
from .exterior import Form, PolyVector, _Graded
from .poly import I, Chart, GaussRat, Poly

Value = Union[Poly, Form, PolyVector]

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


@dataclass
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


def _line_col(text: str, pos: int):
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def tokenize(text: str) -> List[Token]:
    out = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", *_line_col(text, pos))
        kind = m.lastgroup
        start = m.start(kind)
        out.append(Token(kind, m.group(kind), start))
        pos = m.end()
        if kind == "num" and pos < n and text[pos] == ".":
            raise ParseError("decimal literals are not allowed; use p/q", *_line_col(text, pos))
    out.append(Token("end", "", n))
    return out


def _kind(v: Value) -> str:
    if isinstance(v, Poly):
        return "scalar"
    return "form" if isinstance(v, Form) else "vector"


class _Parser:
    def __init__(self, text: str, chart: Chart):
        self.text = text
        self.chart = chart
        self.toks = tokenize(text)
        self.i = 0

    # helpers -------------------------------------------------------------
    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        return ParseError(msg, *_line_col(self.text, tok.pos))

    def expect(self, op: str):
        t = self.peek()
        if t.kind != "op" or t.text != op:
            raise self.error(f"expected {op!r}, found {t.text or 'end of input'!r}")
        self.next()

    # grammar -------------------------------------------------------------
    def parse(self) -> Value:
        if self.peek().kind == "end":
            raise self.error("empty expression")
        v = self.expr()
        if self.peek().kind != "end":
            raise self.error(f"unexpected {self.peek().text!r}")
        return v

    def expr(self) -> Value:
        v = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next()
            w = self.term()
            v = self.add(v, w, op, negate=op.text == "-")
        return v

    def term(self) -> Value:
        v = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.next()
            w = self.unary()
            v = self.mul(v, w, op) if op.text == "*" else self.div(v, w, op)
        return v

    def unary(self) -> Value:
        t = self.peek()
        if t.kind == "op" and t.text in "+-":
            self.next()
            v = self.unary()
            return -v if t.text == "-" else v
        return self.power()

    def power(self) -> Value:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            op = self.next()
            t = self.peek()
            if t.kind != "num":
                raise self.error("exponent must be a nonnegative integer literal")
            self.next()
            if not isinstance(base, Poly):
                raise DegreeError(f"cannot raise a {_kind(base)} to a power "
                                  f"(line {_line_col(self.text, op.pos)[0]}, column {_line_col(self.text, op.pos)[1]})")
            return base ** int(t.text)
        return base

    def atom(self) -> Value:
        t = self.next()
        if t.kind == "num":
            return Poly.const(self.chart, int(t.text))
        if t.kind == "name":
            return self.identifier(t)
        if t.kind == "op" and t.text == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise self.error(f"unexpected {t.text or 'end of input'!r}", t)

    def identifier(self, t: Token) -> Value:
        name, ch = t.text, self.chart
        if name == "i":
            return Poly.const(ch, I)
        if ch.has(name):
            return Poly.gen(ch, name)
        if name.startswith("dd") and ch.has(name[2:]):
            return PolyVector.gen(ch, name[2:])
        if name.startswith("d") and ch.has(name[1:]):
            return Form.gen(ch, name[1:])
        line, col = _line_col(self.text, t.pos)
        raise UnknownCoordinate(f"unknown identifier {name!r} (line {line}, column {col})", name=name, line=line, column=col)

    # typed arithmetic ----------------------------------------------------
    def add(self, v: Value, w: Value, op: Token, negate: bool) -> Value:
        if negate:
            w = -w
        kv, kw = _kind(v), _kind(w)
        if kv == kw:
            return v + w
        if kv == "scalar":
            return type(w).scalar(v) + w
        if kw == "scalar":
            return v + type(v).scalar(w)
        raise self._degree(f"cannot add a {kv} and a {kw}", op)

    def mul(self, v: Value, w: Value, op: Token) -> Value:
        kv, kw = _kind(v), _kind(w)
        if kv == "scalar" and kw == "scalar":
            return v * w
        if kv == "scalar":
            return w.scale(v)
        if kw == "scalar":
            return v.scale(w)
        if kv != kw:
            raise self._degree("cannot multiply a form and a vector", op)
        return v.wedge(w)

    def div(self, v: Value, w: Value, op: Token) -> Value:
        if not isinstance(w, Poly) or not w.is_constant():
            raise self._degree("can only divide by a nonzero constant", op)
        c = w.constant_term()
        if not c:
            line, col = _line_col(self.text, op.pos)
            raise InvalidInput(f"division by zero (line {line}, column {col})", line=line, column=col)
        inv = GaussRat(1) / c
        return v * inv if isinstance(v, Poly) else v.scale(inv)

    def _degree(self, msg: str, tok: Token):
        line, col = _line_col(self.text, tok.pos)
        return DegreeError(f"{msg} (line {line}, column {col})", line=line, column=col)


def parse_expr(text: str, chart: Chart, kind: Optional[str] = None) -> Value:
    """Parse ``text`` on ``chart``; ``kind`` in {scalar, form, vector} promotes or checks."""
    v = _Parser(text, chart).parse()
    if kind is None:
        return v
    k = _kind(v)
    if k == kind:
        return v
    if k == "scalar" and kind == "form":
        return Form.scalar(v)
    if k == "scalar" and kind == "vector":
        return PolyVector.scalar(v)
    raise DegreeError(f"expected a {kind}, got a {k}")


def parse_scalar(text: str, chart: Optional[Chart] = None) -> GaussRat:
    """A constant (``3/2``, ``1 - 2*i``...) as a Gaussian rational."""
    chart = chart or Chart()
    v = parse_expr(text, chart, "scalar")
    if not v.is_constant():
        raise InvalidInput(f"expected a constant, got {v}")
    return v.constant_term()


def to_text(v: Value) -> str:
    """Canonical text; ``parse_expr(to_text(v), chart, kind)`` returns ``v``."""
    return str(v)


def kind_of(v: Value) -> str:
    return _kind(v)

"""Textual form of group expressions and element literals.

The emitted strings parse back to equal expressions:

    1                    trivial group
    Z, Z^2               free abelian
    Z_4                  residues mod 4
    3Z                   the subgroup 3*Z of Z
    Atom(S:D1)           a named leaf (flavors S, Delta, G)
    A*B                  direct product
    wrZ(B;n)             B^n semidirect Z
    wrC(B;n)             B^n semidirect Z_n
    wrZ2(B;n,m)          B^(n*m) semidirect Z^2
    wrCP(B;n,m)          B^(n*m) semidirect (Z_n x Z_m)
    quot(B;gen=ELEM)     central quotient by the cyclic group on ELEM

Element literals are nested parenthesized tuples of integers and bare
identifiers, e.g. ``((1,0),1)`` or ``((e,e),(0,0))``.
"""

from __future__ import annotations

import re

from ..errors import ShapeMismatch
from . import expr as ex

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>-?\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_.]*)"
    r"|(?P<punct>[()*;,:=^]))"
)


def _tokenize(text: str) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ValueError(f"cannot tokenize {rest[:20]!r}")
        if m.group("int") is not None:
            out.append(("int", int(m.group("int"))))
        elif m.group("ident") is not None:
            out.append(("ident", m.group("ident")))
        else:
            out.append(("punct", m.group("punct")))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            raise ValueError(f"expected {value or kind}, got {tok[1]!r}")
        return tok[1]

    def at_punct(self, ch) -> bool:
        tok = self.peek()
        return tok is not None and tok == ("punct", ch)

    # -- expressions --------------------------------------------------------

    def parse_expr(self) -> ex.GroupExpr:
        factors = [self.parse_term()]
        while self.at_punct("*"):
            self.next()
            factors.append(self.parse_term())
        if len(factors) == 1:
            return factors[0]
        return ex.product(factors)

    def parse_term(self) -> ex.GroupExpr:
        tok = self.next()
        if tok == ("punct", "("):
            inner = self.parse_expr()
            self.expect("punct", ")")
            return inner
        if tok[0] == "int":
            if self.peek() == ("ident", "Z"):
                self.next()
                return ex.ScaledZ(tok[1])
            if tok[1] == 1:
                return ex.Trivial()
            raise ValueError(f"unexpected integer {tok[1]} in expression")
        if tok[0] != "ident":
            raise ValueError(f"unexpected token {tok[1]!r}")
        name = tok[1]
        if name == "Z":
            if self.at_punct("^"):
                self.next()
                return ex.FreeAbelian(self.expect("int"))
            return ex.FreeAbelian(1)
        m = re.fullmatch(r"Z_(\d+)", name)
        if m:
            return ex.Cyclic(int(m.group(1)))
        if name == "Atom":
            self.expect("punct", "(")
            flavor = self.expect("ident")
            self.expect("punct", ":")
            label = self.expect("ident")
            self.expect("punct", ")")
            return ex.Atom(label, flavor)
        if name in ("wrZ", "wrC"):
            self.expect("punct", "(")
            base = self.parse_expr()
            self.expect("punct", ";")
            n = self.expect("int")
            self.expect("punct", ")")
            return ex.WrZ(base, n) if name == "wrZ" else ex.WrCyc(base, n)
        if name in ("wrZ2", "wrCP"):
            self.expect("punct", "(")
            base = self.parse_expr()
            self.expect("punct", ";")
            n = self.expect("int")
            self.expect("punct", ",")
            m2 = self.expect("int")
            self.expect("punct", ")")
            cls = ex.WrZ2 if name == "wrZ2" else ex.WrCycPair
            return cls(base, n, m2)
        if name == "quot":
            self.expect("punct", "(")
            base = self.parse_expr()
            self.expect("punct", ";")
            self.expect("ident", "gen")
            self.expect("punct", "=")
            lit = self.parse_literal()
            self.expect("punct", ")")
            gen = shape_literal(base, lit)
            return ex.central_quotient(base, gen)
        raise ValueError(f"unknown expression head {name!r}")

    # -- element literals ---------------------------------------------------

    def parse_literal(self):
        tok = self.next()
        if tok[0] in ("int", "ident"):
            return tok[1]
        if tok == ("punct", "("):
            items = []
            if not self.at_punct(")"):
                items.append(self.parse_literal())
                while self.at_punct(","):
                    self.next()
                    items.append(self.parse_literal())
            self.expect("punct", ")")
            return tuple(items)
        raise ValueError(f"unexpected token {tok[1]!r} in element literal")


def parse_expr(text: str) -> ex.GroupExpr:
    """Parse an expression string."""
    p = _Parser(_tokenize(text))
    out = p.parse_expr()
    if p.peek() is not None:
        raise ValueError(f"trailing input after expression: {p.peek()[1]!r}")
    return out


def parse_element(text: str, expr: ex.GroupExpr):
    """Parse an element literal and shape it against ``expr``."""
    p = _Parser(_tokenize(text))
    lit = p.parse_literal()
    if p.peek() is not None:
        raise ValueError(f"trailing input after element: {p.peek()[1]!r}")
    return shape_literal(expr, lit)


def shape_literal(expr: ex.GroupExpr, lit):
    """Coerce a parsed literal (nested tuples / scalars) to an element of
    ``expr``, raising ShapeMismatch when it cannot fit."""
    el = _shape(expr, lit)
    ex.check_shape(expr, el)
    return el


def _seq(lit, length):
    if not isinstance(lit, tuple):
        lit = (lit,)
    if len(lit) != length:
        raise ShapeMismatch(f"expected {length} entries, got {lit!r}")
    return lit


def _shape(expr, lit):
    if isinstance(expr, ex.Trivial):
        return ()
    if isinstance(expr, (ex.Cyclic, ex.ScaledZ)):
        if not isinstance(lit, int):
            raise ShapeMismatch(f"expected an integer, got {lit!r}")
        return lit
    if isinstance(expr, ex.FreeAbelian):
        return tuple(_int_only(v) for v in _seq(lit, expr.rank))
    if isinstance(expr, ex.Atom):
        if isinstance(lit, tuple):
            raise ShapeMismatch(f"atom element must be a scalar, got {lit!r}")
        return lit
    if isinstance(expr, ex.Product):
        parts = _seq(lit, len(expr.factors))
        return tuple(_shape(f, v) for f, v in zip(expr.factors, parts))
    if isinstance(expr, (ex.WrZ, ex.WrCyc)):
        vec, outer = _seq(lit, 2)
        vec = _seq(vec, expr.n)
        return (tuple(_shape(expr.base, v) for v in vec), _int_only(outer))
    if isinstance(expr, (ex.WrZ2, ex.WrCycPair)):
        vec, outer = _seq(lit, 2)
        vec = _seq(vec, expr.n * expr.m)
        a, b = _seq(outer, 2)
        return (tuple(_shape(expr.base, v) for v in vec),
                (_int_only(a), _int_only(b)))
    if isinstance(expr, ex.CentralQuotient):
        return ex.canonical(expr, _shape(expr.base, lit))
    raise TypeError(f"not a group expression: {expr!r}")


def _int_only(v):
    if not isinstance(v, int):
        raise ShapeMismatch(f"expected an integer, got {v!r}")
    return v


# ---------------------------------------------------------------------------
# printing


def format_expr(expr: ex.GroupExpr) -> str:
    if isinstance(expr, ex.Trivial):
        return "1"
    if isinstance(expr, ex.Cyclic):
        return f"Z_{expr.n}"
    if isinstance(expr, ex.FreeAbelian):
        return "Z" if expr.rank == 1 else f"Z^{expr.rank}"
    if isinstance(expr, ex.ScaledZ):
        return f"{expr.step}Z"
    if isinstance(expr, ex.Atom):
        return f"Atom({expr.flavor}:{expr.label})"
    if isinstance(expr, ex.Product):
        parts = []
        for f in expr.factors:
            s = format_expr(f)
            if isinstance(f, ex.Product):
                s = f"({s})"
            parts.append(s)
        return "*".join(parts)
    if isinstance(expr, ex.WrZ):
        return f"wrZ({format_expr(expr.base)};{expr.n})"
    if isinstance(expr, ex.WrCyc):
        return f"wrC({format_expr(expr.base)};{expr.n})"
    if isinstance(expr, ex.WrZ2):
        return f"wrZ2({format_expr(expr.base)};{expr.n},{expr.m})"
    if isinstance(expr, ex.WrCycPair):
        return f"wrCP({format_expr(expr.base)};{expr.n},{expr.m})"
    if isinstance(expr, ex.CentralQuotient):
        return (f"quot({format_expr(expr.base)};"
                f"gen={format_element(expr.generator)})")
    raise TypeError(f"not a group expression: {expr!r}")


def format_element(el) -> str:
    if isinstance(el, tuple):
        return "(" + ",".join(format_element(v) for v in el) + ")"
    return str(el)

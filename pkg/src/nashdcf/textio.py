"""Canonical text syntax for polynomials and differential polynomials.

Polynomials: variables ``L<k>`` (tag variables), root symbol ``Z``, shift
symbol ``g``, rational literals ``p/q``, operators ``+ - * / ^`` and
parentheses, e.g. ``L3^2*Z - 1/2``.  Differential polynomials additionally
use ``y``, ``y'``, ``y''`` or indexed ``y[k]``.  Identifiers other than the
reserved symbols are free atoms (the CLI binds them to elements).

Printing is canonical: monomials sorted by decreasing total degree, then
by decreasing exponent vector in the global variable order, with explicit
``*`` between factors.  ``parse_poly(print)`` is the identity on canonical
output.
"""

from __future__ import annotations

import re as _re
from typing import Callable

from .polys import MPoly, QQ, qq, var_key

_TOKEN = _re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<yprime>y'+)|(?P<ref>#\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()\[\],]))"
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (column {position + 1})")
        self.position = position


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", pos)
        if m.lastgroup:
            tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    return tokens


# AST: ("num", QQ) | ("atom", name) | ("y", k) | ("neg", a) | ("pow", a, n)
#      | ("add"|"sub"|"mul"|"div", a, b)


class _Parser:
    def __init__(self, tokens, allow_y: bool):
        self.tokens = tokens
        self.i = 0
        self.allow_y = allow_y

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, -1)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, value, pos = self.take()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", pos if pos >= 0 else 0)

    def parse(self):
        node = self.expr()
        kind, value, pos = self.peek()
        if kind is not None:
            raise ParseError(f"trailing input {value!r}", pos)
        return node

    def expr(self):
        kind, value, _ = self.peek()
        if kind == "op" and value in "+-":
            self.take()
            node = self.term()
            if value == "-":
                node = ("neg", node)
        else:
            node = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.take()
                rhs = self.term()
                node = ("add" if value == "+" else "sub", node, rhs)
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.take()
                rhs = self.factor()
                node = ("mul" if value == "*" else "div", node, rhs)
            else:
                return node

    def factor(self):
        kind, value, pos = self.peek()
        if kind == "op" and value == "-":
            self.take()
            return ("neg", self.factor())
        node = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.take()
            kind2, value2, pos2 = self.take()
            if kind2 != "num":
                raise ParseError("exponent must be a nonnegative integer", pos2)
            node = ("pow", node, int(value2))
        return node

    def atom(self):
        kind, value, pos = self.take()
        if kind == "num":
            return ("num", qq(int(value)))
        if kind == "ref":
            return ("atom", value)  # element reference "#<id>" (session files)
        if kind == "yprime":
            if not self.allow_y:
                raise ParseError("y is not allowed here", pos)
            return ("y", len(value) - 1)
        if kind == "name":
            if value == "y":
                if not self.allow_y:
                    raise ParseError("y is not allowed here", pos)
                nkind, nvalue, _ = self.peek()
                if nkind == "op" and nvalue == "[":
                    self.take()
                    ikind, ivalue, ipos = self.take()
                    if ikind != "num":
                        raise ParseError("expected derivative index", ipos)
                    self.expect_op("]")
                    return ("y", int(ivalue))
                return ("y", 0)
            return ("atom", value)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected token {value!r}", pos if pos >= 0 else 0)


def parse_expr(text: str, allow_y: bool = False):
    """Parse to an AST; evaluation is left to the caller."""
    return _Parser(tokenize(text), allow_y).parse()


def ast_atoms(node) -> set[str]:
    kind = node[0]
    if kind == "atom":
        return {node[1]}
    if kind in ("num", "y"):
        return set()
    if kind in ("neg",):
        return ast_atoms(node[1])
    if kind == "pow":
        return ast_atoms(node[1])
    return ast_atoms(node[1]) | ast_atoms(node[2])


def eval_ast(node, atom_resolver: Callable[[str], object], ops) -> object:
    """Generic AST evaluation. ``ops`` supplies const/add/sub/mul/div/neg/pow."""
    kind = node[0]
    if kind == "num":
        return ops["const"](node[1])
    if kind == "atom":
        return atom_resolver(node[1])
    if kind == "y":
        raise ParseError("y only allowed in differential polynomials", 0)
    if kind == "neg":
        return ops["neg"](eval_ast(node[1], atom_resolver, ops))
    if kind == "pow":
        return ops["pow"](eval_ast(node[1], atom_resolver, ops), node[2])
    a = eval_ast(node[1], atom_resolver, ops)
    b = eval_ast(node[2], atom_resolver, ops)
    return ops[kind](a, b)


_MPOLY_OPS = {
    "const": MPoly.const,
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "neg": lambda a: -a,
    "pow": lambda a, n: a**n,
    "div": None,  # replaced below: only division by constants is polynomial
}


def _mpoly_div(a: MPoly, b: MPoly) -> MPoly:
    if not b.is_constant:
        raise ParseError("division by a non-constant is not polynomial", 0)
    return a.scale(QQ(1) / b.constant_value())


_MPOLY_OPS["div"] = _mpoly_div


def parse_poly(text: str) -> MPoly:
    """Parse canonical polynomial syntax over L<k>, Z, g."""

    def resolve(name: str) -> MPoly:
        if name == "Z" or name == "g" or (name[0] in "LRW" and name[1:].isdigit()):
            return MPoly.variable(name)
        raise ParseError(f"unknown variable {name!r}", 0)

    node = parse_expr(text, allow_y=False)
    return eval_ast(node, resolve, _MPOLY_OPS)


def _format_coeff(c: QQ) -> str:
    return str(c)


def poly_to_text(p: MPoly) -> str:
    """Canonical rendering; parse_poly(poly_to_text(p)) == p."""
    if p.is_zero:
        return "0"
    keyed = sorted(
        p.terms.items(),
        key=lambda item: (-sum(item[0]), tuple(-e for e in item[0])),
    )
    pieces: list[str] = []
    for exps, c in keyed:
        factors = []
        for v, e in zip(p.vars, exps):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        mag = abs(c)
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coeff(mag)] + factors)
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces)


def diffpoly_to_text(star_terms: dict[tuple[int, ...], str]) -> str:
    """Render star-form terms {exponent vector over y,y',..: coefficient text}."""
    keyed = sorted(
        star_terms.items(),
        key=lambda item: (-sum(item[0]), tuple(-e for e in item[0])),
    )
    pieces = []
    for exps, coeff_text in keyed:
        factors = []
        for k, e in enumerate(exps):
            if e == 0:
                continue
            base = "y" if k == 0 else f"y[{k}]"
            factors.append(base if e == 1 else f"{base}^{e}")
        body = "*".join(factors) if factors else "1"
        if coeff_text == "1":
            piece = body
        elif coeff_text == "-1":
            piece = f"-{body}"
        elif factors:
            piece = f"({coeff_text})*{body}"
        else:
            piece = f"({coeff_text})"
        pieces.append(piece)
    if not pieces:
        return "0"
    return " + ".join(pieces)

"""One engine instance: field + derivation table + registries + sessions.

The session file is line-oriented UTF-8, one record per line, versioned
header ``nashdcf/1`` and a trailing ``end <count>`` record.  It stores the
tag high-water mark (coordinates are recomputed deterministically), the
element registry (id -> standalone defining + isolating box + real flag),
name bindings, derivation pins, named differential polynomials, and the
witness log.  Saves are byte-deterministic given an identical command
history; loading a save and saving again is byte-identical.
"""

from __future__ import annotations

import io
from typing import Sequence

from .anchor import Tag
from .derivation import (
    DerivationTable,
    DiffPoly,
    WitnessRecord,
    adjoin_differential_generators,
    blum_witness,
    complexify_delta,
    distinct_solutions,
    ordered_witness,
    root_between,
)
from .elements import Element, Field, PrimitiveRoot, ONE
from .intervals import Box, Interval
from .polys import MPoly, QQ, qq
from .rootloc import ComplexRoot, RealRoot, SturmChain
from .textio import ParseError, diffpoly_to_text, eval_ast, parse_expr, poly_to_text

FORMAT_HEADER = "nashdcf/1"


class SessionError(ValueError):
    pass


class Engine:
    def __init__(self, degree_cap: int = 64):
        self.field = Field(degree_cap=degree_cap)
        self.table = DerivationTable(self.field)
        self.elements: list[Element] = []
        self._ids: dict[int, int] = {}
        self.names: dict[str, int] = {}
        self.dps: dict[str, DiffPoly] = {}
        self.wit_lines: list[str] = []
        self._auto = 0

    # -- registry ---------------------------------------------------------------

    def register(self, e: Element) -> int:
        got = self._ids.get(id(e))
        if got is not None:
            return got
        eid = len(self.elements)
        self.elements.append(e)
        self._ids[id(e)] = eid
        return eid

    def element(self, eid: int) -> Element:
        return self.elements[eid]

    def bind(self, name: str, e: Element) -> int:
        eid = self.register(e)
        self.names[name] = eid
        return eid

    def auto_name(self, prefix: str) -> str:
        name = f"_{prefix}{self._auto}"
        self._auto += 1
        return name

    def resolve(self, name: str) -> Element:
        if name.startswith("#"):
            return self.element(int(name[1:]))
        if name in self.names:
            return self.element(self.names[name])
        raise ParseError(f"unknown name {name!r}", 0)

    def _register_new_pins(self) -> None:
        for index in sorted(self.table.pinned):
            self.register(self.table.pinned[index])

    # -- expressions ---------------------------------------------------------------

    _ELEMENT_OPS = {
        "const": None,  # bound per engine below
        "add": lambda a, b: a + b,
        "sub": lambda a, b: a - b,
        "mul": lambda a, b: a * b,
        "div": lambda a, b: a / b,
        "neg": lambda a: -a,
        "pow": lambda a, n: a**n,
    }

    def eval_expr(self, text: str) -> Element:
        """Evaluate an element expression; ``var`` allocates a fresh tag."""
        node = parse_expr(text, allow_y=False)
        ops = dict(self._ELEMENT_OPS)
        ops["const"] = lambda c: self.field.rational(c)

        def resolve(name: str) -> Element:
            if name == "var":
                (t,) = self.field.anchor.fresh_tags(1)
                return self.field.tag(t)
            return self.resolve(name)

        return eval_ast(node, resolve, ops)

    def parse_diffpoly(self, text: str) -> DiffPoly:
        node = parse_expr(text, allow_y=True)
        return self._ast_to_diffpoly(node)

    def _ast_to_diffpoly(self, node) -> DiffPoly:
        kind = node[0]
        field = self.field
        if kind == "num":
            return DiffPoly.constant(field, field.rational(node[1]))
        if kind == "atom":
            return DiffPoly.constant(field, self.resolve(node[1]))
        if kind == "y":
            return DiffPoly.y_derivative(field, node[1])
        if kind == "neg":
            return -self._ast_to_diffpoly(node[1])
        if kind == "pow":
            base = self._ast_to_diffpoly(node[1])
            out = DiffPoly.constant(field, field.one())
            for _ in range(node[2]):
                out = out * base
            return out
        a = self._ast_to_diffpoly(node[1])
        b = self._ast_to_diffpoly(node[2])
        if kind == "add":
            return a + b
        if kind == "sub":
            return a - b
        if kind == "mul":
            return a * b
        if kind == "div":
            if b.order >= 0 or b.degree > 0:
                raise ParseError("division by a differential polynomial", 0)
            coeff = b.star_terms().get((), field.zero())
            return a.scale(field.one() / coeff)
        raise ParseError(f"bad node {kind}", 0)

    def diffpoly_text(self, p: DiffPoly) -> str:
        """Canonical text; non-rational coefficients become #id references."""
        rendered: dict[tuple[int, ...], str] = {}
        for exps, c in p.star_terms().items():
            if not c.roots and c.num.is_constant and c.den.is_constant:
                value = c.num.constant_value() / c.den.constant_value()
                rendered[exps] = str(value)
            else:
                rendered[exps] = f"#{self.register(c)}"
        return diffpoly_to_text(rendered)

    def dp_define(self, name: str, text: str) -> DiffPoly:
        p = self.parse_diffpoly(text)
        self.dps[name] = p
        self.diffpoly_text(p)  # register referenced coefficients now
        return p

    def dp_resolve(self, token: str) -> DiffPoly:
        token = token.strip()
        if token.startswith("(") and token.endswith(")"):
            return self.parse_diffpoly(token[1:-1])
        if token in self.dps:
            return self.dps[token]
        return self.parse_diffpoly(token)

    # -- witnesses (registering wrappers) ----------------------------------------------

    def witness(self, p: DiffPoly, q: DiffPoly) -> Element:
        f = blum_witness(self.field, self.table, p, q)
        self._log_witness(self.table.log[-1])
        return f

    def owitness(self, p: DiffPoly, qs: Sequence[DiffPoly], point: Sequence[Element]) -> Element:
        f = ordered_witness(self.field, self.table, p, qs, point)
        self._log_witness(self.table.log[-1])
        return f

    def solutions(self, n: int) -> list[Element]:
        out = distinct_solutions(self.field, self.table, n)
        for rec in self.table.log[-n:]:
            self._log_witness(rec)
        return out

    def rootbetween(self, p: DiffPoly, a: Element, b: Element) -> Element:
        c = root_between(self.field, self.table, p, a, b)
        self._log_witness(self.table.log[-1])
        return c

    def extend(self, specs) -> list[Element]:
        gens = adjoin_differential_generators(self.field, self.table, specs)
        self._log_witness(self.table.log[-1])
        return gens

    def complexify(self, f1: Element, f2: Element):
        return complexify_delta(self.field, self.table, f1, f2)

    def _log_witness(self, rec: WitnessRecord) -> None:
        produced = ",".join(str(self.register(e)) for e in rec.produced)
        tags = ",".join(str(t) for t in rec.tags) or "-"
        info_parts = []
        for key, value in rec.inputs.items():
            if isinstance(value, DiffPoly):
                info_parts.append(f"{key}=({self.diffpoly_text(value)})")
            elif isinstance(value, Element):
                info_parts.append(f"{key}=#{self.register(value)}")
            elif isinstance(value, list) and value and isinstance(value[0], DiffPoly):
                inner = ";".join(f"({self.diffpoly_text(v)})" for v in value)
                info_parts.append(f"{key}=[{inner}]")
            else:
                info_parts.append(f"{key}={value}")
        info = " ".join(info_parts)
        self._register_new_pins()
        self.wit_lines.append(f'wit {rec.kind} {rec.selection} {tags} {produced or "-"} "{info}"')

    # -- serialization ----------------------------------------------------------------

    def serialize_element(self, e: Element) -> str:
        defining = e.standalone_defining()
        box = e.isolating_box()
        flag = "1" if e.real else "0"
        text = poly_to_text(defining)
        if e.real:
            return f'{flag} "{text}" {box.re.lo} {box.re.hi}'
        return f'{flag} "{text}" {box.re.lo} {box.re.hi} {box.im.lo} {box.im.hi}'

    def deserialize_element(self, flag: str, text: str, endpoints: list[str]) -> Element:
        from .textio import parse_poly

        defining = parse_poly(text)
        real = flag == "1"
        if defining.degree("Z") == 1:
            coeffs = defining.coeffs_in("Z")
            return _t0_from_linear(self.field, coeffs[0], coeffs[1], real)
        if real:
            interval = Interval(qq(endpoints[0]), qq(endpoints[1]))
            chain = SturmChain(defining, self.field.anchor)
            exact = interval.lo if interval.lo == interval.hi else None
            locator = RealRoot(chain, interval, exact=exact)
        else:
            box = Box(
                Interval(qq(endpoints[0]), qq(endpoints[1])),
                Interval(qq(endpoints[2]), qq(endpoints[3])),
            )
            locator = ComplexRoot(defining.coeffs_in("Z"), self.field.anchor, box, 64)
        root = PrimitiveRoot(next(self.field._root_counter), defining, real, self.field.anchor, locator)
        return Element(self.field, MPoly.variable(root.var), ONE, (root,), real)

    def save_text(self) -> str:
        self._register_new_pins()
        out = io.StringIO()
        records = 0

        def emit(line: str):
            nonlocal records
            out.write(line + "\n")
            records += 1

        out.write(FORMAT_HEADER + "\n")
        emit(f"tags {self.field.anchor.high_water}")
        for eid, e in enumerate(self.elements):
            emit(f"el {eid} {self.serialize_element(e)}")
        for name in sorted(self.names):
            emit(f"name {name} {self.names[name]}")
        for index in sorted(self.table.pinned):
            emit(f"pin {index} {self._ids[id(self.table.pinned[index])]}")
        for name in sorted(self.dps):
            emit(f'dp {name} "{self.diffpoly_text(self.dps[name])}"')
        for line in self.wit_lines:
            emit(line)
        out.write(f"end {records}\n")
        return out.getvalue()

    def save(self, path: str) -> None:
        text = self.save_text()
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)

    def load(self, path: str) -> None:
        with open(path, "r", encoding="utf-8") as fh:
            self.load_text(fh.read())

    def load_text(self, text: str) -> None:
        lines = text.splitlines()
        if not lines or lines[0] != FORMAT_HEADER:
            raise SessionError(f"format version mismatch (expected {FORMAT_HEADER})")
        self.__init__(degree_cap=self.field.degree_cap)
        records = lines[1:]
        seen = 0
        closed = False
        last_valid = 0
        for i, line in enumerate(records, start=1):
            if not line.strip():
                continue
            try:
                closed = self._load_record(line, is_last=False)
            except SessionError:
                raise
            except Exception as exc:
                raise SessionError(f"corrupt record {i}: {exc}") from exc
            if closed:
                expected = int(line.split()[1])
                if expected != seen:
                    raise SessionError(
                        f"record count mismatch: end says {expected}, found {seen}"
                    )
                if any(l.strip() for l in records[i:]):
                    raise SessionError("trailing data after end record")
                return
            seen += 1
            last_valid = i
        raise SessionError(f"truncated session: last valid record is {last_valid}")

    def _load_record(self, line: str, is_last: bool) -> bool:
        kind, _, rest = line.partition(" ")
        if kind == "end":
            return True
        if kind == "tags":
            self.field.anchor.ensure_allocated(int(rest))
            return False
        if kind == "el":
            parts = _split_quoted(rest)
            eid = int(parts[0])
            e = self.deserialize_element(parts[1], parts[2], parts[3:])
            if eid != len(self.elements):
                raise SessionError(f"out-of-order element id {eid}")
            self.register(e)
            return False
        if kind == "name":
            name, eid = rest.rsplit(" ", 1)
            self.names[name] = int(eid)
            return False
        if kind == "pin":
            index, eid = rest.split()
            self.table.pinned[int(index)] = self.element(int(eid))
            return False
        if kind == "dp":
            parts = _split_quoted(rest)
            self.dps[parts[0]] = self.parse_diffpoly(parts[1])
            return False
        if kind == "wit":
            self.wit_lines.append(line)
            return False
        raise SessionError(f"unknown record kind {kind!r}")


def _t0_from_linear(field: Field, c0: MPoly, c1: MPoly, real: bool) -> Element:
    from .elements import _make

    return _make(field, -c0, c1, (), real)


def _split_quoted(text: str) -> list[str]:
    """Split on spaces, keeping double-quoted runs as single fields."""
    out = []
    buf = []
    in_quote = False
    for ch in text:
        if ch == '"':
            in_quote = not in_quote
            continue
        if ch == " " and not in_quote:
            if buf:
                out.append("".join(buf))
                buf = []
            continue
        buf.append(ch)
    if in_quote:
        raise ValueError("unbalanced quote")
    if buf:
        out.append("".join(buf))
    return out

"""Line-oriented command interface.

One command per line; errors are reported per command without aborting
the stream; the exit code is 0 iff no command errored.  See README for
the command list.  All output is deterministic given the command history,
which is what makes session replay byte-comparable.
"""

from __future__ import annotations

import argparse
import re
import sys

from .derivation import DiffPoly
from .elements import DegreeBudgetError, Element
from .engine import Engine, SessionError
from .intervals import Box
from .polys import MPoly, QQ, qq
from .regions import RegionPoly, check_r_axioms, wp_member
from .textio import ParseError, parse_poly

SIGN_WORDS = {1: "positive", 0: "zero", -1: "negative"}


def smart_split(text: str) -> list[str]:
    """Split on top-level spaces; quotes and parentheses bind."""
    out: list[str] = []
    buf: list[str] = []
    depth = 0
    in_quote = False
    for ch in text:
        if ch == '"':
            in_quote = not in_quote
            buf.append(ch)
            continue
        if not in_quote:
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth -= 1
            if ch == " " and depth == 0:
                if buf:
                    out.append("".join(buf))
                    buf = []
                continue
        buf.append(ch)
    if buf:
        out.append("".join(buf))
    return out


def _unquote(token: str) -> str:
    if token.startswith('"') and token.endswith('"') and len(token) >= 2:
        return token[1:-1]
    return token


_COORD = re.compile(
    r"^(?P<re>[+-]?\d+(?:/\d+)?)?(?:(?P<im>[+-](?:\d+(?:/\d+)?)?)i)?$"
)


def parse_coord(token: str):
    """Rational or Gaussian-rational coordinate: 3, -1/2, 2+3i, i, -i, 1/2-1/3i."""
    t = token.strip()
    if t == "i":
        return (qq(0), qq(1))
    if t == "-i":
        return (qq(0), qq(-1))
    m = _COORD.match(t)
    if not m or (m.group("re") is None and m.group("im") is None):
        raise ParseError(f"bad coordinate {token!r}", 0)
    re_part = qq(m.group("re").lstrip("+")) if m.group("re") else qq(0)
    if m.group("im") is None:
        return re_part
    imtext = m.group("im")
    if imtext in ("+", "-"):
        imtext += "1"
    return (re_part, qq(imtext.lstrip("+")))


class CommandLoop:
    def __init__(self, engine: Engine | None = None):
        self.engine = engine if engine is not None else Engine()
        self.errored = False

    # -- public ------------------------------------------------------------------

    def run(self, lines, out=None) -> bool:
        """Execute a command stream; returns True iff no command errored."""
        sink = out if out is not None else sys.stdout
        for lineno, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                for piece in self.execute(line):
                    print(piece, file=sink)
            except (
                ParseError,
                SessionError,
                DegreeBudgetError,
                ValueError,
                KeyError,
                ZeroDivisionError,
                RuntimeError,
            ) as exc:
                self.errored = True
                print(f"error[line {lineno}]: {exc}", file=sink)
        return not self.errored

    # -- dispatch -----------------------------------------------------------------

    def execute(self, line: str) -> list[str]:
        parts = smart_split(line)
        head = parts[0]
        handler = getattr(self, f"cmd_{head}", None)
        if handler is None:
            raise ParseError(f"unknown command {head!r}", 0)
        return handler(parts[1:])

    # -- commands -------------------------------------------------------------------

    def cmd_var(self, args) -> list[str]:
        (t,) = self.engine.field.anchor.fresh_tags(1)
        name = args[0] if args else self.engine.auto_name("t")
        self.engine.bind(name, self.engine.field.tag(t))
        return [f"{name} = tag {t.index}"]

    def cmd_let(self, args) -> list[str]:
        if len(args) < 3 or args[1] != "=":
            raise ParseError("usage: let <name> = <expr>", 0)
        name = args[0]
        value = self._rhs(args[2:])
        self.engine.bind(name, value)
        return [f"ok {name}"]

    def _rhs(self, tokens) -> Element:
        head = tokens[0]
        if head == "witness":
            return self._witness(tokens[1:])
        if head == "owitness":
            return self._owitness(tokens[1:])
        if head == "rootbetween":
            return self._rootbetween(tokens[1:])
        if head == "adjoin":
            return self._adjoin(tokens[1:])
        if head == "delta":
            return self.engine.table.apply_delta(self.engine.eval_expr(" ".join(tokens[1:])))
        return self.engine.eval_expr(" ".join(tokens))

    def cmd_adjoin(self, args) -> list[str]:
        e = self._adjoin(args)
        name = self.engine.auto_name("a")
        self.engine.bind(name, e)
        return [f"ok {name}"]

    def _adjoin(self, args) -> Element:
        if not args:
            raise ParseError("usage: adjoin \"<poly>\" [real <k> | smallest]", 0)
        poly_text = _unquote(args[0])
        selector: object = "smallest"
        if len(args) >= 2:
            if args[1] == "real":
                if len(args) < 3:
                    raise ParseError("real selector needs an index", 0)
                selector = ("real", int(args[2]))
            elif args[1] == "smallest":
                selector = "smallest"
            else:
                raise ParseError(f"unknown selector {args[1]!r}", 0)
        coeffs = self._poly_to_element_coeffs(poly_text)
        return self.engine.field.adjoin_root(coeffs, selector)

    def _poly_to_element_coeffs(self, text: str) -> list[Element]:
        """Polynomial in Z whose other atoms are element names/refs."""
        from .textio import eval_ast, parse_expr
        from .elempoly import EPoly

        engine = self.engine
        field = engine.field
        z = EPoly(field, [field.zero(), field.one()])

        ops = {
            "const": lambda c: EPoly(field, [field.rational(c)]),
            "add": lambda a, b: a + b,
            "sub": lambda a, b: a - b,
            "mul": lambda a, b: a * b,
            "neg": lambda a: -a,
            "pow": _epoly_pow,
            "div": _epoly_div,
        }

        def resolve(name: str):
            if name == "Z":
                return z
            if name.startswith("L") and name[1:].isdigit():
                return EPoly(field, [engine.field.tag(_tag_of(engine, int(name[1:])))])
            return EPoly(field, [engine.resolve(name)])

        node = parse_expr(text, allow_y=False)
        epoly = eval_ast(node, resolve, ops)
        if epoly.degree < 1:
            raise ParseError("adjoin needs a polynomial of positive degree in Z", 0)
        return list(epoly.coeffs)

    def cmd_dp(self, args) -> list[str]:
        if len(args) < 3 or args[1] != "=":
            raise ParseError("usage: dp <name> = <differential polynomial>", 0)
        self.engine.dp_define(args[0], " ".join(args[2:]))
        return [f"ok {args[0]}"]

    def _witness(self, args) -> Element:
        if len(args) != 2:
            raise ParseError("usage: witness <p> <q>", 0)
        p = self.engine.dp_resolve(args[0])
        q = self.engine.dp_resolve(args[1])
        return self.engine.witness(p, q)

    def cmd_witness(self, args) -> list[str]:
        f = self._witness(args)
        name = self.engine.auto_name("w")
        self.engine.bind(name, f)
        return [f"ok {name}"]

    def _owitness(self, args) -> Element:
        if "at" not in args:
            raise ParseError("usage: owitness <p> [q...] at <a0> <a1> ...", 0)
        split = args.index("at")
        head, point_tokens = args[:split], args[split + 1 :]
        if not head:
            raise ParseError("owitness needs p", 0)
        p = self.engine.dp_resolve(head[0])
        qs = [self.engine.dp_resolve(tok) for tok in head[1:]]
        point = [self.engine.eval_expr(tok) for tok in point_tokens]
        return self.engine.owitness(p, qs, point)

    def cmd_owitness(self, args) -> list[str]:
        f = self._owitness(args)
        name = self.engine.auto_name("o")
        self.engine.bind(name, f)
        return [f"ok {name}"]

    def cmd_solutions(self, args) -> list[str]:
        n = int(args[0])
        sols = self.engine.solutions(n)
        out = []
        for s in sols:
            name = self.engine.auto_name("s")
            self.engine.bind(name, s)
            out.append(f"ok {name}")
        return out

    def _rootbetween(self, args) -> Element:
        if len(args) != 3:
            raise ParseError("usage: rootbetween <p> <a> <b>", 0)
        p = self.engine.dp_resolve(args[0])
        a = self.engine.eval_expr(args[1])
        b = self.engine.eval_expr(args[2])
        return self.engine.rootbetween(p, a, b)

    def cmd_rootbetween(self, args) -> list[str]:
        c = self._rootbetween(args)
        name = self.engine.auto_name("c")
        self.engine.bind(name, c)
        return [f"ok {name}"]

    def cmd_extend(self, args) -> list[str]:
        if len(args) < 3 or args[1] != "with":
            raise ParseError("usage: extend <n> with <expr>[, <expr> ...]", 0)
        n = int(args[0])
        exprs = [s.strip() for s in " ".join(args[2:]).split(",")]
        if len(exprs) != n:
            raise ParseError(f"expected {n} derivative expressions", 0)
        engine = self.engine

        def make_spec(text):
            def spec(gens):
                def resolve(name):
                    if name.startswith("e") and name[1:].isdigit():
                        j = int(name[1:])
                        if 1 <= j <= len(gens):
                            return gens[j - 1]
                    return engine.resolve(name)

                from .textio import eval_ast, parse_expr

                ops = dict(engine._ELEMENT_OPS)
                ops["const"] = lambda c: engine.field.rational(c)
                return eval_ast(parse_expr(text), resolve, ops)

            return spec

        gens = engine.extend([make_spec(t) for t in exprs])
        out = []
        for g in gens:
            name = engine.auto_name("g")
            engine.bind(name, g)
            out.append(f"ok {name}")
        return out

    def cmd_delta(self, args) -> list[str]:
        e = self.engine.eval_expr(" ".join(args))
        d = self.engine.table.apply_delta(e)
        name = self.engine.auto_name("d")
        self.engine.bind(name, d)
        return [f"ok {name}"]

    def cmd_sign(self, args) -> list[str]:
        e = self.engine.eval_expr(" ".join(args))
        return [SIGN_WORDS[e.sign()]]

    def cmd_iszero(self, args) -> list[str]:
        e = self.engine.eval_expr(" ".join(args))
        return ["true" if e.is_zero() else "false"]

    def cmd_check(self, args) -> list[str]:
        if len(args) != 2:
            raise ParseError("usage: check <dp> <element>", 0)
        p = self.engine.dp_resolve(args[0])
        e = self.engine.eval_expr(args[1])
        value = self.engine.table.diff_eval(p, e)
        return ["zero" if value.is_zero() else "nonzero"]

    def cmd_eval(self, args) -> list[str]:
        name = args[0]
        prec = 64
        if "--prec" in args:
            prec = int(args[args.index("--prec") + 1])
        e = self.engine.eval_expr(name)
        box = e.value_box(prec)
        if e.real:
            return [f"[{box.re.lo}, {box.re.hi}]"]
        return [f"[{box.re.lo}, {box.re.hi}] + [{box.im.lo}, {box.im.hi}]i"]

    def cmd_wp(self, args) -> list[str]:
        if len(args) < 4 or args[0] != "member":
            raise ParseError('usage: wp member <real|complex> "<poly>" <coords...>', 0)
        mode = args[1]
        poly = parse_poly(_unquote(args[2]))
        coords = [parse_coord(tok) for tok in args[3:]]
        P = RegionPoly(poly, len(coords), mode)
        return ["true" if wp_member(P, coords, self.engine.field) else "false"]

    def cmd_raxioms(self, args) -> list[str]:
        if len(args) < 2:
            raise ParseError('usage: raxioms "<P>" "<Q>" [--samples N] [--seed S] [--mode M]', 0)
        P = parse_poly(_unquote(args[0]))
        Q = parse_poly(_unquote(args[1]))
        samples, seed, mode = 100, 0, "real"
        rest = args[2:]
        for flag, cast in (("--samples", int), ("--seed", int), ("--mode", str)):
            if flag in rest:
                value = cast(rest[rest.index(flag) + 1])
                if flag == "--samples":
                    samples = value
                elif flag == "--seed":
                    seed = value
                else:
                    mode = value
        m = 0
        for poly in (P, Q):
            for v in poly.vars:
                m = max(m, int(v[1:]))
        m = max(m, 1)
        report = check_r_axioms(
            RegionPoly(P, m, mode), RegionPoly(Q, m, mode), samples=samples, seed=seed,
            field=self.engine.field,
        )
        return report.lines

    def cmd_save(self, args) -> list[str]:
        self.engine.save(args[0])
        return [f"saved {args[0]}"]

    def cmd_load(self, args) -> list[str]:
        self.engine.load(args[0])
        return [f"loaded {args[0]}"]


def _tag_of(engine: Engine, index: int):
    return engine.field.anchor.tag(index)


def _epoly_pow(a, n: int):
    out = None
    for _ in range(n):
        out = a if out is None else out * a
    if out is None:
        return EPolyOne(a)
    return out


def EPolyOne(a):
    from .elempoly import EPoly

    return EPoly(a.field, [a.field.one()])


def _epoly_div(a, b):
    if b.degree != 0:
        raise ParseError("division by a non-constant polynomial", 0)
    c = b.coefficient(0)
    return a.scale(a.field.one() / c)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nashdcf",
        description="Exact differentially closed field engine: define elements and "
        "differential polynomials, request witnesses, query signs and region "
        "membership, and replay sessions deterministically.",
    )
    parser.add_argument("script", nargs="?", help="command file (default: stdin)")
    parser.add_argument("--degree-cap", type=int, default=64, help="defining-degree budget")
    args = parser.parse_args(argv)
    loop = CommandLoop(Engine(degree_cap=args.degree_cap))
    if args.script:
        with open(args.script, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    else:
        lines = sys.stdin.readlines()
    ok = loop.run(lines)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

"""Differential polynomials and the lazily grown derivation.

A differential polynomial in one indeterminate y is stored through its
star form: a polynomial in x_0..x_n with Element coefficients, where x_i
stands for the i-th derivative of y, so p(a) = star(a, d(a), ..., d^n(a)).

The derivation d sends the tag variable L_t to the table entry g_t; table
entries are pinned on demand and NEVER overwritten: a tag first read
during any derivative computation is pinned to 0 permanently, and witness
constructions pin the tags they consume while those are still fresh.
Replaying the pin/witness log on a fresh engine reproduces the same
elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

from .anchor import Tag
from .elements import Element, Field, partial_derivative
from .elempoly import EPoly
from .polys import QQ, qq

NEG_INF = -math.inf


class DiffPoly:
    """Differential polynomial via its star form (normalized: no coefficient
    of value zero is kept, so order and degree are true values)."""

    __slots__ = ("field", "star")

    def __init__(self, field: Field, star: dict[tuple[int, ...], Element]):
        self.field = field
        cleaned: dict[tuple[int, ...], Element] = {}
        for exps, c in star.items():
            if c.is_zero():
                continue
            exps = _trim(exps)
            if exps in cleaned:
                merged = cleaned[exps] + c
                if merged.is_zero():
                    del cleaned[exps]
                else:
                    cleaned[exps] = merged
            else:
                cleaned[exps] = c
        width = max((len(e) for e in cleaned), default=0)
        self.star = {e + (0,) * (width - len(e)): c for e, c in cleaned.items()}

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def constant(field: Field, c: Element) -> "DiffPoly":
        return DiffPoly(field, {(): c})

    @staticmethod
    def y_derivative(field: Field, k: int) -> "DiffPoly":
        """The monomial y[k] (k-th derivative of y; k = 0 is y itself)."""
        return DiffPoly(field, {tuple([0] * k + [1]): field.one()})

    # -- order/degree conventions -------------------------------------------------

    @property
    def order(self) -> int:
        """Highest derivative index present; -1 for coefficients-only polynomials."""
        best = -1
        for exps in self.star:
            for i, e in enumerate(exps):
                if e > 0 and i > best:
                    best = i
        return best

    @property
    def degree(self):
        """Total degree in the y-derivatives; -inf for the zero polynomial."""
        if not self.star:
            return NEG_INF
        return max(sum(exps) for exps in self.star)

    @property
    def is_zero(self) -> bool:
        return not self.star

    def star_terms(self) -> dict[tuple[int, ...], Element]:
        """The star form (x_i stands for the i-th derivative of y)."""
        return dict(self.star)

    def __repr__(self) -> str:
        return f"DiffPoly(order {self.order}, degree {self.degree})"

    # -- arithmetic ----------------------------------------------------------------

    def __add__(self, other: "DiffPoly") -> "DiffPoly":
        merged = dict(self.star)
        for exps, c in other.star.items():
            key = _trim(exps)
            merged[key] = merged.get(key, self.field.zero()) + c
        return DiffPoly(self.field, {_trim(e): c for e, c in merged.items()})

    def __neg__(self) -> "DiffPoly":
        return DiffPoly(self.field, {e: -c for e, c in self.star.items()})

    def __sub__(self, other: "DiffPoly") -> "DiffPoly":
        return self + (-other)

    def __mul__(self, other: "DiffPoly") -> "DiffPoly":
        out: dict[tuple[int, ...], Element] = {}
        for ea, ca in self.star.items():
            ea = _trim(ea)
            for eb, cb in other.star.items():
                eb = _trim(eb)
                width = max(len(ea), len(eb))
                key = tuple(
                    (ea[i] if i < len(ea) else 0) + (eb[i] if i < len(eb) else 0)
                    for i in range(width)
                )
                prod = ca * cb
                out[key] = out.get(key, self.field.zero()) + prod
        return DiffPoly(self.field, out)

    def scale(self, c: Element) -> "DiffPoly":
        return DiffPoly(self.field, {e: v * c for e, v in self.star.items()})

    # -- star-form evaluations --------------------------------------------------------

    def eval_jet(self, jet: Sequence[Element]) -> Element:
        """star(jet[0], ..., jet[n]); jet must cover the order."""
        n = self.order
        if n >= 0 and len(jet) <= n:
            raise ValueError("jet too short")
        total = self.field.zero()
        for exps, c in self.star.items():
            term = c
            for i, e in enumerate(exps):
                if e:
                    term = term * jet[i] ** e
            total = total + term
        return total

    def eval_prefix(self, prefix: Sequence[Element]) -> EPoly:
        """Substitute x_i <- prefix[i] for i < order, leaving x_order free."""
        n = self.order
        if n < 0:
            return EPoly(self.field, [self.star.get((), self.field.zero())])
        if len(prefix) < n:
            raise ValueError("prefix too short")
        coeffs: dict[int, Element] = {}
        for exps, c in self.star.items():
            k = exps[n] if len(exps) > n else 0
            term = c
            for i, e in enumerate(exps[:n]):
                if e:
                    term = term * prefix[i] ** e
            coeffs[k] = coeffs.get(k, self.field.zero()) + term
        top = max(coeffs)
        return EPoly(self.field, [coeffs.get(i, self.field.zero()) for i in range(top + 1)])

    def eval_linear_path(self, jet_a: Sequence[Element], jet_b: Sequence[Element]) -> EPoly:
        """star evaluated along x_i = t*jet_a[i] + (1-t)*jet_b[i], as a polynomial in t."""
        n = self.order
        field = self.field
        t = EPoly(field, [field.zero(), field.one()])
        args = []
        for i in range(n + 1):
            const = EPoly(field, [jet_b[i]])
            slope = EPoly(field, [jet_a[i] - jet_b[i]])
            args.append(slope * t + const)
        total = EPoly(field, [])
        for exps, c in self.star.items():
            term = EPoly(field, [c])
            for i, e in enumerate(exps):
                for _ in range(e):
                    term = term * args[i]
            total = total + term
        return total

    def partial_x(self, k: int) -> "DiffPoly":
        """d(star)/d(x_k)."""
        out: dict[tuple[int, ...], Element] = {}
        for exps, c in self.star.items():
            if len(exps) <= k or exps[k] == 0:
                continue
            key = exps[:k] + (exps[k] - 1,) + exps[k + 1 :]
            out[_trim(key)] = out.get(_trim(key), self.field.zero()) + c * exps[k]
        return DiffPoly(self.field, out)


def _trim(exps: tuple[int, ...]) -> tuple[int, ...]:
    i = len(exps)
    while i > 0 and exps[i - 1] == 0:
        i -= 1
    return exps[:i]


@dataclass
class WitnessRecord:
    """One derivation-growing event; replaying the log reproduces elements."""

    kind: str  # blum | ordered | adjoin | distinct | root_between
    tags: list[int]
    inputs: dict
    selection: str
    produced: list[Element] = dc_field(default_factory=list)


class DerivationTable:
    """Partial map tag -> element defining the derivation; pins are permanent."""

    def __init__(self, field: Field):
        self.field = field
        self.pinned: dict[int, Element] = {}
        self.log: list[WitnessRecord] = []
        self._jets: dict[int, tuple[Element, list[Element]]] = {}

    def pin(self, t: Tag, value: Element) -> None:
        if t.index in self.pinned:
            raise KeyError(f"tag #{t.index} already pinned")
        self.pinned[t.index] = value

    def value(self, t: Tag) -> Element:
        """Table entry; first read pins the default 0 permanently."""
        got = self.pinned.get(t.index)
        if got is None:
            got = self.field.zero()
            self.pinned[t.index] = got
        return got

    def is_pinned(self, index: int) -> bool:
        return index in self.pinned

    # -- the derivation ---------------------------------------------------------

    def apply_delta(self, a: Element) -> Element:
        """d(a) = sum over support tags of g_t * da/dL_t."""
        total = self.field.zero()
        for index in sorted(a.support):
            t = Tag(index)
            part = partial_derivative(a, t)
            if part.is_zero():
                self.value(t)  # the tag was read: pin the default
                continue
            total = total + self.value(t) * part
        return total

    def jet(self, a: Element, n: int) -> list[Element]:
        """[a, d(a), ..., d^n(a)] with caching (pins are immutable)."""
        entry = self._jets.get(id(a))
        if entry is None or entry[0] is not a:
            entry = (a, [a])
            self._jets[id(a)] = entry
        jets = entry[1]
        while len(jets) <= n:
            jets.append(self.apply_delta(jets[-1]))
        return jets[: n + 1]

    def diff_eval(self, p: DiffPoly, a: Element) -> Element:
        """p(a) = star(a, d(a), ..., d^n(a))."""
        n = max(p.order, 0)
        return p.eval_jet(self.jet(a, n))


# ---------------------------------------------------------------------------
# Witness constructions
# ---------------------------------------------------------------------------


def blum_witness(field: Field, table: DerivationTable, p: DiffPoly, q: DiffPoly) -> Element:
    """An element f with p(f) = 0 and q(f) != 0.

    Requires ord q < ord p and q != 0 (and deg p > 0 when ord p = 0).  For
    n = ord p >= 1: allocate fresh tags t_0 < ... < t_{n-1}, pin
    g(t_i) = L_{t_{i+1}}, adjoin a root e of star(L_{t_0},..,L_{t_{n-1}}, Z),
    pin g(t_{n-1}) = e and return f = L_{t_0}; then d^i f = L_{t_i} and
    d^n f = e, so p(f) = 0 exactly.  q(f) is a nonzero combination of the
    fresh tags (they are fresh for q's coefficients too), verified exactly.
    """
    if q.is_zero:
        raise ValueError("q must be nonzero")
    n = p.order
    if q.order >= n:
        raise ValueError("requires ord q < ord p")
    if n == 0 and p.degree < 1:
        raise ValueError("ord p = 0 requires deg p > 0")
    if n < 0:
        raise ValueError("p must involve y")
    record = WitnessRecord("blum", [], {"p": p, "q": q}, "smallest")
    if n == 0:
        coeffs = p.eval_prefix([])
        f = field.adjoin_root(coeffs.coeffs, "smallest")
        record.produced = [f]
        table.log.append(record)
        if not table.diff_eval(p, f).is_zero():  # pragma: no cover
            raise RuntimeError("blum witness postcondition failed")
        if table.diff_eval(q, f).is_zero():
            raise ValueError("degenerate q: vanishes at every candidate")
        return f
    tags = field.anchor.fresh_tags(n)
    record.tags = [t.index for t in tags]
    gens = [field.tag(t) for t in tags]
    cpoly = p.eval_prefix(gens)
    if cpoly.degree < 1:
        raise ValueError("degenerate leading coefficient")
    e = field.adjoin_root(cpoly.coeffs, "smallest")
    for i in range(n - 1):
        table.pin(tags[i], gens[i + 1])
    table.pin(tags[n - 1], e)
    f = gens[0]
    record.produced = [f, e]
    table.log.append(record)
    if not table.diff_eval(p, f).is_zero():  # pragma: no cover
        raise RuntimeError("blum witness postcondition failed")
    if table.diff_eval(q, f).is_zero():
        raise ValueError("degenerate q: vanishes on the witness")
    return f


def distinct_solutions(field: Field, table: DerivationTable, n: int) -> list[Element]:
    """n pairwise-distinct nonzero solutions of (1+y)y' - y = 0."""
    if n < 1:
        raise ValueError("need n >= 1")
    one = field.one()
    p0 = DiffPoly(field, {(0, 1): one, (1, 1): one, (1, 0): -one})  # (1+y)y' - y
    q = DiffPoly(field, {(1,): one})  # y
    out: list[Element] = []
    for _ in range(n):
        phi = blum_witness(field, table, p0, q)
        out.append(phi)
        # exclude phi from later witnesses: q <- q * (y - phi)
        q = q * DiffPoly(field, {(1,): one, (): -phi})
    return out


def ordered_witness(
    field: Field,
    table: DerivationTable,
    p: DiffPoly,
    qs: Sequence[DiffPoly],
    point: Sequence[Element],
    eps: QQ = qq("1/256"),
    retries: int = 16,
) -> Element:
    """A real f with p(f) = 0 and q_j(f) > 0 for all j.

    ``point`` = (a_0, ..., a_k) is a nondegenerate real solution of the
    star form: star_p(a) = 0, d(star_p)/dx_k(a) != 0, star_qj(a) > 0.  The
    construction scales fresh tags to pass near the point: r_i ~ a_i/x0(t_i)
    rational, pins g(t_i) = (r_{i+1}/r_i) L_{t_{i+1}}, pins the top entry to
    f_z/r_{k-1} where f_z is the real root of the scaled polynomial nearest
    the target a_k, and returns f = r_0 L_{t_0}.  The sign constraints are
    verified exactly a posteriori; on failure epsilon is halved and FRESH
    tags are consumed (pins are permanent).
    """
    k = p.order
    if k < 1:
        raise ValueError("not a Singer configuration: ord p must be >= 1")
    for quj in qs:
        if quj.order > k:
            raise ValueError("not a Singer configuration: ord q exceeds ord p")
    if len(point) != k + 1:
        raise ValueError(f"point must have length {k + 1}")
    point = [a if isinstance(a, Element) else field.rational(a) for a in point]
    if not all(a.real for a in point):
        raise ValueError("not a Singer configuration: point must be real")
    if not p.eval_jet(point).is_zero():
        raise ValueError("not a Singer configuration: star(p) does not vanish")
    if p.partial_x(k).eval_jet(point).sign() == 0:
        raise ValueError("not a Singer configuration: degenerate in the top derivative")
    for quj in qs:
        if quj.eval_jet(point).sign() != 1:
            raise ValueError("not a Singer configuration: side condition not positive")

    for _ in range(retries):
        tags = field.anchor.fresh_tags(k)
        gens = [field.tag(t) for t in tags]
        rs = []
        ok = True
        for i in range(k):
            r = _rational_near(field, point[i], tags[i], eps)
            if r is None:
                ok = False
                break
            rs.append(r)
        if not ok:
            eps = eps / 2
            continue
        scaled = [gens[i] * rs[i] for i in range(k)]
        cpoly = p.eval_prefix(scaled)
        if cpoly.degree < 1:
            eps = eps / 2
            continue
        from .elements import real_roots as _real_roots

        try:
            roots = _real_roots(field, cpoly.coeffs)
        except ValueError:
            eps = eps / 2
            continue
        f_z = _nearest_root(roots, point[k])
        if f_z is None:
            eps = eps / 2
            continue
        for i in range(k - 1):
            table.pin(tags[i], gens[i + 1] * (rs[i + 1] / rs[i]))
        table.pin(tags[k - 1], f_z * (QQ(1) / rs[k - 1]))
        f = scaled[0]
        if table.diff_eval(p, f).is_zero() and all(
            table.diff_eval(quj, f).sign() == 1 for quj in qs
        ):
            table.log.append(
                WitnessRecord(
                    "ordered",
                    [t.index for t in tags],
                    {"p": p, "qs": list(qs), "rs": [str(r) for r in rs]},
                    "nearest-root",
                    [f, f_z],
                )
            )
            return f
        eps = eps / 2
    raise RuntimeError("ordered witness retry budget exhausted")


def _rational_near(field: Field, a: Element, t: Tag, eps: QQ) -> QQ | None:
    """Nonzero dyadic r with |r - a/x0(t)| below the eps tolerance."""
    prec = 32
    while True:
        abox = a.value_box(prec).re
        coord = field.anchor.coordinate(t, prec)
        lo = min(abox.lo / coord.hi, abox.lo / coord.lo)
        hi = max(abox.hi / coord.hi, abox.hi / coord.lo)
        scale = max(abs(lo), abs(hi), qq(1))
        if hi - lo <= eps * scale / 4:
            break
        prec *= 2
    from .intervals import dyadic_down

    mid = dyadic_down((lo + hi) / 2, prec)
    if mid != 0:
        return mid
    bump = dyadic_down(eps * scale / 8, prec)
    return bump if bump != 0 else None


def _nearest_root(roots: Sequence[Element], target: Element) -> Element | None:
    """Root whose enclosure is nearest the target's; deterministic schedule."""
    if not roots:
        return None
    best = None
    best_key = None
    for r in roots:
        gap_box = (r - target).value_box(96).re
        key = max(abs(gap_box.lo), abs(gap_box.hi))
        if best_key is None or key < best_key:
            best = r
            best_key = key
    return best


def root_between(
    field: Field, table: DerivationTable, p: DiffPoly, a: Element, b: Element
) -> Element:
    """A real c with a < c < b and p(c) = 0, given a sign change of p.

    Substitutes the straight path between the jets of a and b into the
    star form, finds a parameter with star = 0, and feeds that point to
    the ordered witness with side condition (y - a)(b - y) > 0.  If the
    top-derivative partial vanishes at the constructed point this raises
    the documented nondegeneracy error.
    """
    if not (a.real and b.real):
        raise ValueError("endpoints must be real")
    if (b - a).sign() != 1:
        raise ValueError("requires a < b")
    pa = table.diff_eval(p, a)
    pb = table.diff_eval(p, b)
    if (pa * pb).sign() != -1:
        raise ValueError("requires a sign change: p(a) p(b) < 0")
    n = p.order
    if n <= 0:
        coeffs = p.eval_prefix([])
        from .elements import real_roots as _real_roots

        for root in _real_roots(field, coeffs.coeffs):
            if (root - a).sign() == 1 and (b - root).sign() == 1:
                return root
        raise RuntimeError("no root between the endpoints")  # pragma: no cover
    ja = table.jet(a, n)
    jb = table.jet(b, n)
    path = p.eval_linear_path(ja, jb)
    from .elements import real_roots as _real_roots

    ts = [t for t in _real_roots(field, path.coeffs) if t.sign() == 1 and (1 - t).sign() == 1]
    if not ts:
        raise RuntimeError("no interior path root despite sign change")  # pragma: no cover
    t0 = ts[0]
    point = [t0 * ja[i] + (1 - t0) * jb[i] for i in range(n + 1)]
    if p.partial_x(n).eval_jet(point).sign() == 0:
        raise ValueError("nondegeneracy failure")
    one = field.one()
    q = DiffPoly(field, {(1,): one, (): -a}) * DiffPoly(field, {(): b, (1,): -one})
    c = ordered_witness(field, table, p, [q], point)
    table.log.append(
        WitnessRecord("root_between", [], {"p": p, "a": a, "b": b}, "smallest-path-root", [c])
    )
    return c


def adjoin_differential_generators(
    field: Field,
    table: DerivationTable,
    specs: Sequence[Callable[[list[Element]], Element] | Element | int],
) -> list[Element]:
    """Adjoin n fresh generators with prescribed derivatives.

    Each spec receives the list of new generators and returns the desired
    derivative (constants and elements are accepted directly); generator j
    gets d(gen_j) = spec_j(gens).  Returns the generators.
    """
    n = len(specs)
    if n < 1:
        raise ValueError("need at least one generator")
    tags = field.anchor.fresh_tags(n)
    gens = [field.tag(t) for t in tags]
    values = []
    for spec in specs:
        if callable(spec):
            h = spec(gens)
        else:
            h = spec if isinstance(spec, Element) else field.rational(spec)
        values.append(h)
    for t, h in zip(tags, values):
        table.pin(t, h)
    table.log.append(
        WitnessRecord("adjoin", [t.index for t in tags], {"count": n}, "prescribed", list(gens))
    )
    return gens


def complexify_delta(
    field: Field, table: DerivationTable, f1: Element, f2: Element
) -> tuple[Element, Element]:
    """The pair (d(f1 + i f2), d(f1) + i d(f2)); the two are always equal.

    i is algebraic over Q, so d(i) = 0 and the unique derivation on the
    complexified field acts coordinatewise; exposed as a checkable
    identity.
    """
    if not (f1.real and f2.real):
        raise ValueError("requires real inputs")
    i = field.imag_unit()
    lhs = table.apply_delta(f1 + i * f2)
    rhs = table.apply_delta(f1) + i * table.apply_delta(f2)
    return lhs, rhs

"""Inductive semialgebraic region membership.

For a polynomial P over Q in coordinates L1..Lm, the shifted-root shadow
is the set of points whose last coordinate can be pushed by some shift
g >= 0 onto the zero set of P.  The region W_P is defined inductively:
the complement of the shadow, fibered over W of the leading coefficient
in the last coordinate.  Membership is decided exactly: over the reals by
Sturm counts of the shift polynomial u(g) on [0, oo), over the complex
numbers by counting real nonnegative roots of gcd(Re u, Im u).

Points may have rational (or Gaussian rational) coordinates, which take a
dense exact fast path, or Element coordinates, which go through the
element-coefficient Sturm machinery with anchor-certified sign decisions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .elements import Element, Field
from .elempoly import EPoly
from .polys import (
    MPoly,
    QQ,
    QQ_ONE,
    QQ_ZERO,
    dq_count_roots,
    dq_strip,
    qq,
)


def region_var(i: int) -> str:
    """1-based ambient coordinate names."""
    return f"L{i}"


@dataclass(frozen=True)
class RegionPoly:
    """P in Q[L1..Lm] plus the ambient dimension and the scalar mode."""

    poly: MPoly
    m: int
    mode: str  # "real" | "complex"

    def __post_init__(self):
        if self.mode not in ("real", "complex"):
            raise ValueError("mode must be real or complex")
        for v in self.poly.vars:
            if not (v.startswith("L") and v[1:].isdigit() and 1 <= int(v[1:]) <= self.m):
                raise ValueError(f"variable {v} outside ambient L1..L{self.m}")


Coord = "QQ | tuple[QQ, QQ] | Element"


def _is_rational_coord(x) -> bool:
    return not isinstance(x, Element)


def _as_pair(x) -> tuple[QQ, QQ]:
    if isinstance(x, tuple):
        return (qq(x[0]), qq(x[1]))
    return (qq(x), QQ_ZERO)


def omega(P: RegionPoly) -> RegionPoly:
    """Leading coefficient of P in its last coordinate (0 stays 0)."""
    if P.poly.is_zero:
        return RegionPoly(MPoly.zero(), max(P.m - 1, 0), P.mode)
    lead = P.poly.leading_coeff(region_var(P.m))
    return RegionPoly(lead, max(P.m - 1, 0), P.mode)


# ---------------------------------------------------------------------------
# the shift polynomial u(g) = P(x_1,..,x_{m-1}, x_m + g)
# ---------------------------------------------------------------------------


def _binomial(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def _shift_poly_rational(P: RegionPoly, point: list[tuple[QQ, QQ]]) -> list[tuple[QQ, QQ]]:
    """Dense Gaussian-rational coefficients of u(g), index = power of g."""
    m = P.m
    deg = P.poly.degree(region_var(m))
    out = [(QQ_ZERO, QQ_ZERO)] * (deg + 1)
    for exps, c in P.poly.terms.items():
        fixed = (c, QQ_ZERO)
        shift_pow = 0
        for v, e in zip(P.poly.vars, exps):
            idx = int(v[1:])
            if idx == m:
                shift_pow = e
                continue
            fixed = _cmul(fixed, _cpow(point[idx - 1], e))
        xm = point[m - 1]
        for k in range(shift_pow + 1):
            coeff = _cmul(fixed, _cpow(xm, shift_pow - k))
            coeff = (coeff[0] * _binomial(shift_pow, k), coeff[1] * _binomial(shift_pow, k))
            out[k] = (out[k][0] + coeff[0], out[k][1] + coeff[1])
    while out and out[-1] == (QQ_ZERO, QQ_ZERO):
        out.pop()
    return out


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cpow(a, e: int):
    out = (QQ_ONE, QQ_ZERO)
    base = a
    while e:
        if e & 1:
            out = _cmul(out, base)
        e >>= 1
        if e:
            base = _cmul(base, base)
    return out


def _shift_poly_elements(P: RegionPoly, field: Field, point: list[Element]) -> EPoly:
    m = P.m
    deg = P.poly.degree(region_var(m))
    out = [field.zero() for _ in range(deg + 1)]
    for exps, c in P.poly.terms.items():
        fixed = field.rational(c)
        shift_pow = 0
        for v, e in zip(P.poly.vars, exps):
            idx = int(v[1:])
            if idx == m:
                shift_pow = e
                continue
            fixed = fixed * point[idx - 1] ** e
        xm = point[m - 1]
        for k in range(shift_pow + 1):
            out[k] = out[k] + fixed * xm ** (shift_pow - k) * _binomial(shift_pow, k)
    return EPoly(field, out)


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


def gamma_member(P: RegionPoly, point: list, field: Field | None = None) -> bool:
    """Is the point in the shifted-root shadow of P?

    True iff u(g) = P(x_1..x_{m-1}, x_m + g) has a root g in [0, oo); the
    identically-zero u counts as membership (every shift works).  In
    complex mode a real root of u is a common real root of Re u and Im u,
    i.e. a nonnegative root of their gcd.
    """
    if len(point) != P.m:
        raise ValueError(f"point has dimension {len(point)}, ambient is {P.m}")
    if P.poly.is_zero:
        return True
    if all(_is_rational_coord(x) for x in point):
        pairs = [_as_pair(x) for x in point]
        if P.mode == "real" and any(p[1] != 0 for p in pairs):
            raise ValueError("real mode requires real coordinates")
        u = _shift_poly_rational(P, pairs)
        if not u:
            return True
        re = dq_strip([c[0] for c in u])
        im = dq_strip([c[1] for c in u])
        if not im:
            target = re
        elif not re:
            target = im
        else:
            target = _dq_gcd(re, im)
        if not target:
            return True
        if len(target) == 1:
            return False
        return dq_count_roots(target, QQ_ZERO, None) > 0
    if field is None:
        field = point[0].field if isinstance(point[0], Element) else None
    if field is None:
        raise ValueError("element coordinates require a field")
    elems = [x if isinstance(x, Element) else field.rational(_as_pair(x)[0]) for x in point]
    if P.mode == "real":
        if not all(e.real for e in elems):
            raise ValueError("real mode requires real coordinates")
        u = _shift_poly_elements(P, field, elems)
        if u.is_zero:
            return True
        if u.degree == 0:
            return False
        return u.count_real_roots(QQ_ZERO, None) > 0
    from .elements import split_re_im

    u = _shift_poly_elements(P, field, elems)
    if u.is_zero:
        return True
    re_parts, im_parts = [], []
    for c in u.coeffs:
        r, i = split_re_im(c)
        re_parts.append(r)
        im_parts.append(i)
    ure = EPoly(field, re_parts)
    uim = EPoly(field, im_parts)
    if uim.is_zero:
        target = ure
    elif ure.is_zero:
        target = uim
    else:
        target = ure.gcd(uim)
    if target.is_zero:
        return True
    if target.degree == 0:
        return False
    return target.count_real_roots(QQ_ZERO, None) > 0


def _dq_gcd(a: list[QQ], b: list[QQ]) -> list[QQ]:
    from .polys import dq_rem

    x, y = list(a), list(b)
    if len(x) < len(y):
        x, y = y, x
    while y:
        x, y = y, dq_rem(x, y)
    lead = x[-1]
    return [c / lead for c in x]


def wp_member(P: RegionPoly, point: list, field: Field | None = None) -> bool:
    """Membership in W_P: outside the shadow, over W of the leading coefficient.

    The recursion is well-founded because omega strictly drops the ambient
    dimension.  Nonzero constants give the whole space; zero gives the
    empty set.
    """
    if len(point) != P.m:
        raise ValueError(f"point has dimension {len(point)}, ambient is {P.m}")
    if P.poly.is_zero:
        return False
    if gamma_member(P, point, field):
        return False
    if P.m <= 1:
        return True
    return wp_member(omega(P), point[:-1], field)


def cylinder_member(
    poly: MPoly, assignment: dict[int, Element], mode: str, field: Field
) -> bool:
    """Membership in the cylinder over W_P lifted to tag coordinates.

    ``poly`` lives over anchor tag variables; the tags are sorted into
    their canonical order, the polynomial is relabelled positionally, and
    W membership is evaluated on the projected coordinates.
    """
    tags = sorted(
        {int(v[1:]) for v in poly.vars if v.startswith("L")} | set(assignment.keys())
    )
    relabel = {f"L{t}": MPoly.variable(f"W{i}") for i, t in enumerate(tags)}
    repositioned = poly.substitute(relabel).substitute(
        {f"W{i}": MPoly.variable(region_var(i + 1)) for i in range(len(tags))}
    )
    P = RegionPoly(repositioned, len(tags), mode)
    point = []
    for t in tags:
        if t not in assignment:
            raise ValueError(f"no coordinate assigned to tag #{t}")
        point.append(assignment[t])
    return wp_member(P, point, field)


# ---------------------------------------------------------------------------
# sampled verification of the region axioms
# ---------------------------------------------------------------------------


@dataclass
class AxiomReport:
    lines: list[str]
    ok: bool

    def __str__(self) -> str:
        return "\n".join(self.lines)


def _sample_point(rng: random.Random, m: int, mode: str):
    def rational():
        return QQ(rng.randint(-100, 100), rng.randint(1, 100))

    if mode == "real":
        return [rational() for _ in range(m)]
    return [(rational(), rational()) for _ in range(m)]


def _near_variety_points(P: RegionPoly, rng: random.Random, count: int):
    """Rational points close to the zero set of P (boundary stress)."""
    out = []
    var = region_var(P.m)
    for _ in range(count * 3):
        if len(out) >= count:
            break
        coords = _sample_point(rng, P.m, "real")
        partial = {region_var(i + 1): coords[i] for i in range(P.m - 1)}
        uni = P.poly.substitute({k: MPoly.const(v) for k, v in partial.items()})
        if uni.is_zero or uni.degree(var) < 1:
            continue
        dense = dq_strip([c.constant_value() for c in uni.coeffs_in(var)])
        if len(dense) <= 1:
            continue
        lo, hi = qq(-200), qq(200)
        if dq_count_roots(dense, lo, hi) == 0:
            continue
        for _ in range(40):
            mid = (lo + hi) / 2
            left = dq_count_roots(dense, lo, mid)
            if left > 0:
                hi = mid
            else:
                lo = mid
            if hi - lo < QQ(1, 64):
                break
        shift = QQ(rng.randint(-8, 8), 64)
        point = coords[:-1] + [(lo + hi) / 2 + shift]
        if P.mode == "complex":
            point = [(x, QQ_ZERO) for x in point]
        out.append(point)
    return out


def check_r_axioms(
    P: RegionPoly,
    Q: RegionPoly,
    samples: int = 100,
    seed: int = 0,
    unbounded_target: QQ | int = 10**6,
    field: Field | None = None,
) -> AxiomReport:
    """Sampled exact verification of the multiplicative/complement axioms.

    R0: members of W_P never satisfy P = 0 (exact).  R1: membership in
    W_P and W_Q is equivalent to membership in W_{PQ} at every sample
    (both sides computed independently).  R2: a member with a coordinate
    beyond ``unbounded_target`` is found by a directed ray search.  R5:
    nonzero constants accept every sample.
    """
    if P.m != Q.m or P.mode != Q.mode:
        raise ValueError("check_r_axioms needs matching ambient and mode")
    rng = random.Random(seed)
    points = [_sample_point(rng, P.m, P.mode) for _ in range(samples)]
    points += _near_variety_points(P, rng, max(2, samples // 10))
    PQ = RegionPoly(P.poly * Q.poly, P.m, P.mode)
    lines: list[str] = []
    ok = True

    r0_bad = None
    checked = 0
    for x in points:
        if wp_member(P, x, field):
            checked += 1
            if _poly_value_is_zero(P, x):
                r0_bad = x
                break
    if r0_bad is None:
        lines.append(f"R0 OK {checked}/{checked}")
    else:
        ok = False
        lines.append(f"R0 FAIL at {_fmt_point(r0_bad)}")

    r1_bad = None
    for x in points:
        both = wp_member(P, x, field) and wp_member(Q, x, field)
        prod = wp_member(PQ, x, field)
        if both != prod:
            r1_bad = x
            break
    if r1_bad is None:
        lines.append(f"R1 OK {len(points)}/{len(points)}")
    else:
        ok = False
        lines.append(f"R1 FAIL at {_fmt_point(r1_bad)}")

    witness = _unbounded_search(P, qq(unbounded_target), field)
    if witness is not None:
        lines.append(f"R2 OK member beyond {unbounded_target} at {_fmt_point(witness)}")
    elif P.poly.is_zero:
        lines.append("R2 SKIP zero polynomial")
    else:
        ok = False
        lines.append("R2 FAIL no unbounded member found")

    if P.poly.is_constant and not P.poly.is_zero:
        r5_ok = all(wp_member(P, x, field) for x in points)
        lines.append(f"R5 OK {len(points)}/{len(points)}" if r5_ok else "R5 FAIL")
        ok = ok and r5_ok
    else:
        lines.append("R5 SKIP nonconstant")
    return AxiomReport(lines, ok)


def _poly_value_is_zero(P: RegionPoly, point) -> bool:
    if all(_is_rational_coord(x) for x in point):
        pairs = [_as_pair(x) for x in point]
        total = (QQ_ZERO, QQ_ZERO)
        for exps, c in P.poly.terms.items():
            term = (c, QQ_ZERO)
            for v, e in zip(P.poly.vars, exps):
                term = _cmul(term, _cpow(pairs[int(v[1:]) - 1], e))
            total = (total[0] + term[0], total[1] + term[1])
        return total == (QQ_ZERO, QQ_ZERO)
    value = _eval_poly_elements(P, point)
    return value.is_zero()


def _eval_poly_elements(P: RegionPoly, point) -> Element:
    field = next(x.field for x in point if isinstance(x, Element))
    total = field.zero()
    for exps, c in P.poly.terms.items():
        term = field.rational(c)
        for v, e in zip(P.poly.vars, exps):
            x = point[int(v[1:]) - 1]
            if not isinstance(x, Element):
                x = field.rational(_as_pair(x)[0])
            term = term * x**e
        total = total + term
    return total


def _unbounded_search(P: RegionPoly, target: QQ, field: Field | None):
    """Directed ray search for a member with some |coordinate| > target."""
    if P.poly.is_zero:
        return None
    base = target + 1
    rays = []
    for axis in range(P.m):
        for sign in (1, -1):
            rays.append((axis, sign))
    for step in range(1, 9):
        magnitude = base * (1 << (step - 1))
        for axis, sign in rays:
            coords: list = [QQ_ONE] * P.m
            coords[axis] = sign * magnitude
            if P.mode == "complex":
                coords = [(c, QQ_ZERO) for c in coords]
            if wp_member(P, coords, field):
                return coords
    return None


def _fmt_point(point) -> str:
    def one(x):
        if isinstance(x, tuple):
            return f"{x[0]}+{x[1]}i"
        return str(x)

    return "(" + ", ".join(one(x) for x in point) + ")"

"""Exact sparse polynomial arithmetic over Q.

Coefficients are arbitrary-precision rationals (gmpy2.mpq when available,
stdlib Fraction otherwise; both keep fractions reduced with a positive
denominator).  MPoly is an immutable sparse multivariate polynomial keyed
by exponent vectors; a dense univariate layer over Q backs the Sturm and
resultant inner loops.  Resultants use the subresultant polynomial
remainder sequence, never Sylvester determinant expansion, and helpers are
provided to strip content after every elimination step.

No floating point is used anywhere in this module.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

try:
    from gmpy2 import mpq as QQ  # type: ignore[import-untyped]
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as QQ  # type: ignore[assignment]

QQ_ZERO = QQ(0)
QQ_ONE = QQ(1)


def qq(value) -> QQ:
    """Coerce ints, strings like '3/4' and rationals to QQ."""
    if isinstance(value, QQ):
        return value
    if isinstance(value, str):
        return QQ(value)
    if isinstance(value, float):
        raise TypeError("floating point is not allowed in exact arithmetic")
    return QQ(value)


def qq_sign(value: QQ) -> int:
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def _int_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def qq_gcd(a: QQ, b: QQ) -> QQ:
    """Positive gcd on Q: gcd(p1/q1, p2/q2) = gcd(p1,p2)/lcm(q1,q2)."""
    if a == 0:
        return abs(b)
    if b == 0:
        return abs(a)
    an, ad = int(a.numerator), int(a.denominator)
    bn, bd = int(b.numerator), int(b.denominator)
    num = _int_gcd(an, bn)
    den = ad * bd // _int_gcd(ad, bd)
    return QQ(num, den)


# ---------------------------------------------------------------------------
# Variable identifiers
#
# "L<k>"  anchor tag variables, ordered by tag index
# "g"     the half-line shift variable of region membership queries
# "R<k>"  values of adjoined roots (one per primitive root, by root id)
# "W<k>"  scratch variables used during resultant elimination
# "Z"     the root symbol of defining polynomials (always last)
# ---------------------------------------------------------------------------


def var_key(name: str) -> tuple[int, int, str]:
    """Total order on variable identifiers; Z sorts last."""
    head = name[0]
    if head == "L" and name[1:].isdigit():
        return (0, int(name[1:]), "")
    if name == "g":
        return (1, 0, "")
    if head == "R" and name[1:].isdigit():
        return (2, int(name[1:]), "")
    if head == "W" and name[1:].isdigit():
        return (3, int(name[1:]), "")
    if name == "Z":
        return (4, 0, "")
    return (5, 0, name)


def tag_var(index: int) -> str:
    return f"L{index}"


class MPoly:
    """Immutable sparse multivariate polynomial over Q.

    ``vars`` is the sorted tuple of variables actually occurring; ``terms``
    maps exponent tuples (aligned with ``vars``) to nonzero rational
    coefficients.  The zero polynomial has no variables and no terms.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables: tuple[str, ...], terms: dict[tuple[int, ...], QQ]):
        self.vars = variables
        self.terms = terms

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> "MPoly":
        return _ZERO

    @staticmethod
    def const(value) -> "MPoly":
        c = qq(value)
        if c == 0:
            return _ZERO
        return MPoly((), {(): c})

    @staticmethod
    def variable(name: str) -> "MPoly":
        return MPoly((name,), {(1,): QQ_ONE})

    @staticmethod
    def from_terms(variables: Sequence[str], terms: Mapping[tuple[int, ...], QQ]) -> "MPoly":
        return _normalize(tuple(variables), dict(terms))

    # -- basic queries -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return not self.vars

    def constant_value(self) -> QQ:
        if self.vars:
            raise ValueError("not a constant polynomial")
        return self.terms.get((), QQ_ZERO)

    def degree(self, var: str) -> int:
        """Degree in ``var``; 0 if absent, -1 for the zero polynomial."""
        if self.is_zero:
            return -1
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(exps[i] for exps in self.terms)

    def total_degree(self) -> int:
        if self.is_zero:
            return -1
        return max((sum(exps) for exps in self.terms), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, tuple(sorted((e, str(c)) for e, c in self.terms.items()))))

    def __repr__(self) -> str:
        from .textio import poly_to_text

        return f"MPoly({poly_to_text(self)})"

    # -- arithmetic ----------------------------------------------------------

    def __neg__(self) -> "MPoly":
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "MPoly":
        other = _coerce(other)
        variables, amap, bmap = _merge_vars(self, other)
        terms: dict[tuple[int, ...], QQ] = {}
        for exps, c in self.terms.items():
            terms[_remap(exps, amap, len(variables))] = c
        for exps, c in other.terms.items():
            key = _remap(exps, bmap, len(variables))
            new = terms.get(key, QQ_ZERO) + c
            if new == 0:
                terms.pop(key, None)
            else:
                terms[key] = new
        return _normalize(variables, terms)

    def __radd__(self, other) -> "MPoly":
        return self.__add__(other)

    def __sub__(self, other) -> "MPoly":
        return self.__add__(-_coerce(other))

    def __rsub__(self, other) -> "MPoly":
        return (-self).__add__(other)

    def __mul__(self, other) -> "MPoly":
        other = _coerce(other)
        if self.is_zero or other.is_zero:
            return _ZERO
        if other.is_constant:
            c = other.constant_value()
            return MPoly(self.vars, {e: v * c for e, v in self.terms.items()})
        if self.is_constant:
            c = self.constant_value()
            return MPoly(other.vars, {e: v * c for e, v in other.terms.items()})
        variables, amap, bmap = _merge_vars(self, other)
        n = len(variables)
        aterms = [(_remap(e, amap, n), c) for e, c in self.terms.items()]
        bterms = [(_remap(e, bmap, n), c) for e, c in other.terms.items()]
        terms: dict[tuple[int, ...], QQ] = {}
        for ea, ca in aterms:
            for eb, cb in bterms:
                key = tuple(x + y for x, y in zip(ea, eb))
                new = terms.get(key, QQ_ZERO) + ca * cb
                if new == 0:
                    terms.pop(key, None)
                else:
                    terms[key] = new
        return _normalize(variables, terms)

    def __rmul__(self, other) -> "MPoly":
        return self.__mul__(other)

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = MPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c) -> "MPoly":
        c = qq(c)
        if c == 0:
            return _ZERO
        return MPoly(self.vars, {e: v * c for e, v in self.terms.items()})

    # -- structure in one variable -------------------------------------------

    def coeffs_in(self, var: str) -> list["MPoly"]:
        """Dense coefficient list [c0, c1, ...] of ``self`` as a polynomial in var."""
        if self.is_zero:
            return []
        if var not in self.vars:
            return [self]
        i = self.vars.index(var)
        rest = self.vars[:i] + self.vars[i + 1 :]
        deg = max(e[i] for e in self.terms)
        buckets: list[dict[tuple[int, ...], QQ]] = [dict() for _ in range(deg + 1)]
        for exps, c in self.terms.items():
            buckets[exps[i]][exps[:i] + exps[i + 1 :]] = c
        return [_normalize(rest, b) for b in buckets]

    @staticmethod
    def from_coeffs_in(var: str, coeffs: Sequence["MPoly"]) -> "MPoly":
        result = _ZERO
        v = MPoly.variable(var)
        power = MPoly.const(1)
        for c in coeffs:
            if not c.is_zero:
                result = result + c * power
            power = power * v
        return result

    def leading_coeff(self, var: str) -> "MPoly":
        coeffs = self.coeffs_in(var)
        return coeffs[-1] if coeffs else _ZERO

    def derivative(self, var: str) -> "MPoly":
        if var not in self.vars:
            return _ZERO
        i = self.vars.index(var)
        terms: dict[tuple[int, ...], QQ] = {}
        for exps, c in self.terms.items():
            k = exps[i]
            if k == 0:
                continue
            key = exps[:i] + (k - 1,) + exps[i + 1 :]
            terms[key] = terms.get(key, QQ_ZERO) + c * k
        return _normalize(self.vars, terms)

    def substitute(self, assignment: Mapping[str, "MPoly | QQ | int"]) -> "MPoly":
        """Simultaneous substitution of variables by polynomials or rationals."""
        work = self
        for var, value in assignment.items():
            if var not in work.vars:
                continue
            value_poly = _coerce(value)
            coeffs = work.coeffs_in(var)
            acc = _ZERO
            for c in reversed(coeffs):
                acc = acc * value_poly + c
            work = acc
        return work

    def eval_rational(self, assignment: Mapping[str, QQ]) -> QQ:
        """Full evaluation at rational points (every variable must be assigned)."""
        for v in self.vars:
            if v not in assignment:
                raise ValueError(f"unassigned variable {v}")
        total = QQ_ZERO
        for exps, c in self.terms.items():
            term = c
            for v, e in zip(self.vars, exps):
                if e:
                    term = term * assignment[v] ** e
            total += term
        return total

    # -- normalization helpers -------------------------------------------------

    def content_rational(self) -> QQ:
        """Positive rational content (0 for the zero polynomial)."""
        cont = QQ_ZERO
        for c in self.terms.values():
            cont = qq_gcd(cont, c)
            if cont == 1:
                break
        return cont

    def primitive_rational(self) -> "MPoly":
        cont = self.content_rational()
        if cont == 0 or cont == 1:
            return self
        return MPoly(self.vars, {e: c / cont for e, c in self.terms.items()})

    def leading_term_key(self) -> tuple[int, tuple[int, ...]]:
        """Graded-lex leading monomial key (requires nonzero)."""
        return max((sum(e), e) for e in self.terms)

    def leading_rational(self) -> QQ:
        """Coefficient of the graded-lex leading monomial."""
        if self.is_zero:
            return QQ_ZERO
        _, e = self.leading_term_key()
        return self.terms[e]

    def sign_normalized(self) -> "MPoly":
        """Scaled by -1 if the graded-lex leading coefficient is negative."""
        if self.is_zero:
            return self
        return -self if self.leading_rational() < 0 else self


_ZERO = MPoly((), {})


def _coerce(value) -> MPoly:
    if isinstance(value, MPoly):
        return value
    return MPoly.const(value)


def _normalize(variables: tuple[str, ...], terms: dict[tuple[int, ...], QQ]) -> MPoly:
    terms = {e: c for e, c in terms.items() if c != 0}
    if not terms:
        return _ZERO
    used = [i for i in range(len(variables)) if any(e[i] for e in terms)]
    if len(used) != len(variables):
        variables = tuple(variables[i] for i in used)
        terms = {tuple(e[i] for i in used): c for e, c in terms.items()}
    order = sorted(range(len(variables)), key=lambda i: var_key(variables[i]))
    if order != list(range(len(variables))):
        variables = tuple(variables[i] for i in order)
        terms = {tuple(e[i] for i in order): c for e, c in terms.items()}
    return MPoly(variables, terms)


def _merge_vars(a: MPoly, b: MPoly):
    if a.vars == b.vars:
        n = len(a.vars)
        ident = tuple(range(n))
        return a.vars, ident, ident
    merged = sorted(set(a.vars) | set(b.vars), key=var_key)
    index = {v: i for i, v in enumerate(merged)}
    amap = tuple(index[v] for v in a.vars)
    bmap = tuple(index[v] for v in b.vars)
    return tuple(merged), amap, bmap


def _remap(exps: tuple[int, ...], mapping: tuple[int, ...], n: int) -> tuple[int, ...]:
    out = [0] * n
    for e, pos in zip(exps, mapping):
        out[pos] = e
    return tuple(out)


# ---------------------------------------------------------------------------
# Exact multivariate division (used by the subresultant recurrences, where
# divisions are exact by theory).
# ---------------------------------------------------------------------------


def div_exact(a: MPoly, b: MPoly) -> MPoly:
    """Exact quotient a/b; raises ArithmeticError if the division is not exact."""
    if b.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    if a.is_zero:
        return _ZERO
    if b.is_constant:
        return a.scale(QQ_ONE / b.constant_value())
    variables, amap, bmap = _merge_vars(a, b)
    n = len(variables)
    rem = {_remap(e, amap, n): c for e, c in a.terms.items()}
    bterms = [(_remap(e, bmap, n), c) for e, c in b.terms.items()]
    bkey = max(((sum(e), e), c) for e, c in bterms)
    (_, blead), bc = bkey
    quot: dict[tuple[int, ...], QQ] = {}
    while rem:
        (_, rlead) = max((sum(e), e) for e in rem)
        rc = rem[rlead]
        diff = tuple(x - y for x, y in zip(rlead, blead))
        if any(d < 0 for d in diff):
            raise ArithmeticError("inexact polynomial division")
        c = rc / bc
        quot[diff] = quot.get(diff, QQ_ZERO) + c
        for be, bco in bterms:
            key = tuple(x + y for x, y in zip(diff, be))
            new = rem.get(key, QQ_ZERO) - c * bco
            if new == 0:
                rem.pop(key, None)
            else:
                rem[key] = new
    return _normalize(variables, quot)


# ---------------------------------------------------------------------------
# Pseudo-division and the subresultant PRS
# ---------------------------------------------------------------------------


def prem(a: MPoly, b: MPoly, var: str) -> MPoly:
    """Pseudo-remainder of a by b in ``var``: lc(b)^(da-db+1) * a = q*b + R."""
    da, db = a.degree(var), b.degree(var)
    if db < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    if da < db:
        return a
    acoeffs = a.coeffs_in(var)
    bcoeffs = b.coeffs_in(var)
    lb = bcoeffs[-1]
    rem = list(acoeffs)
    e = da - db + 1
    while rem and len(rem) - 1 >= db:
        dr = len(rem) - 1
        lr = rem[-1]
        rem = [lb * c for c in rem[:-1]]
        shift = dr - db
        for i, bc in enumerate(bcoeffs[:-1]):
            rem[i + shift] = rem[i + shift] - lr * bc
        while rem and rem[-1].is_zero:
            rem.pop()
        e -= 1
    if e > 0:
        mult = lb**e
        rem = [c * mult for c in rem]
    return MPoly.from_coeffs_in(var, rem)


def content_in(a: MPoly, var: str) -> MPoly:
    """Polynomial content of ``a`` with respect to ``var`` (gcd of coefficients)."""
    coeffs = a.coeffs_in(var)
    cont = _ZERO
    for c in coeffs:
        cont = mpoly_gcd(cont, c)
        if cont.is_constant and not cont.is_zero:
            break
    return cont if not cont.is_zero else _ZERO


def primitive_in(a: MPoly, var: str) -> MPoly:
    """Primitive part of ``a`` w.r.t. ``var``, sign-normalized."""
    if a.is_zero:
        return a
    cont = content_in(a, var)
    if cont.is_constant:
        return a.primitive_rational().sign_normalized()
    return div_exact(a, cont).primitive_rational().sign_normalized()


def resultant(a: MPoly, b: MPoly, var: str) -> MPoly:
    """Sylvester resultant of a and b w.r.t. ``var`` via the subresultant PRS.

    Zero iff a and b share a factor of positive degree in ``var``.  Raises
    ValueError when both inputs are constant in ``var``.
    """
    da, db = a.degree(var), b.degree(var)
    if da <= 0 and db <= 0:
        raise ValueError("no elimination variable")
    if a.is_zero or b.is_zero:
        return _ZERO
    sign = 1
    if da < db:
        a, b, da, db = b, a, db, da
        if (da * db) % 2 == 1:
            sign = -sign
    if db == 0:
        return (b**da).scale(sign)
    conta = content_in(a, var)
    contb = content_in(b, var)
    A = div_exact(a, conta)
    B = div_exact(b, contb)
    t = conta**db * contb**da
    g = MPoly.const(1)
    h = MPoly.const(1)
    while True:
        dA, dB = A.degree(var), B.degree(var)
        if dA % 2 == 1 and dB % 2 == 1:
            sign = -sign
        delta = dA - dB
        R = prem(A, B, var)
        A = B
        denom = g * h**delta
        B = div_exact(R, denom) if not R.is_zero else _ZERO
        if B.is_zero:
            # A still has positive degree in var here, so the inputs share a
            # factor of positive degree and the resultant vanishes.
            return _ZERO
        g = A.leading_coeff(var)
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = div_exact(g**delta, h ** (delta - 1))
        if B.degree(var) == 0:
            dA2 = A.degree(var)
            lcB = B  # constant in var
            if dA2 == 1:
                h = lcB
            else:
                h = div_exact(lcB**dA2, h ** (dA2 - 1))
            break
    return (t * h).scale(sign)


def mpoly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """Primitive, sign-normalized gcd in Q[vars] (constants collapse to 1)."""
    if a.is_zero:
        return b.primitive_rational().sign_normalized()
    if b.is_zero:
        return a.primitive_rational().sign_normalized()
    if a.is_constant or b.is_constant:
        return MPoly.const(1)
    common = set(a.vars) & set(b.vars)
    if not common:
        return MPoly.const(1)
    var = max(common, key=var_key)
    conta = content_in(a, var)
    contb = content_in(b, var)
    c = mpoly_gcd(conta, contb)
    A = div_exact(a, conta)
    B = div_exact(b, contb)
    if A.degree(var) < B.degree(var):
        A, B = B, A
    g = MPoly.const(1)
    h = MPoly.const(1)
    while not B.is_zero and B.degree(var) > 0:
        delta = A.degree(var) - B.degree(var)
        R = prem(A, B, var)
        A, B = B, (div_exact(R, g * h**delta) if not R.is_zero else _ZERO)
        g = A.leading_coeff(var)
        if delta == 1:
            h = g
        elif delta > 1:
            h = div_exact(g**delta, h ** (delta - 1))
    if not B.is_zero:
        # PRS dropped to a nonzero constant in var: the primitive gcd is trivial.
        return c
    return (c * primitive_in(A, var)).sign_normalized()


def squarefree_part(a: MPoly, var: str) -> MPoly:
    """a / gcd(a, da/dvar), made primitive w.r.t. ``var`` and sign-normalized."""
    if a.is_zero:
        raise ValueError("squarefree part of the zero polynomial")
    d = a.derivative(var)
    if d.is_zero:
        return primitive_in(a, var)
    g = mpoly_gcd(a, d)
    sf = div_exact(a, g)
    return primitive_in(sf, var)


# ---------------------------------------------------------------------------
# Dense univariate layer over Q (fast path for Sturm counting)
# Polynomials are lists of QQ, index = exponent; [] is the zero polynomial.
# ---------------------------------------------------------------------------


def dq_strip(f: list[QQ]) -> list[QQ]:
    while f and f[-1] == 0:
        f.pop()
    return f


def dq_from_mpoly(a: MPoly, var: str) -> list[QQ]:
    """Dense Q-coefficient list; raises if ``a`` involves other variables."""
    for v in a.vars:
        if v != var:
            raise ValueError(f"polynomial is not univariate in {var}: has {v}")
    coeffs = a.coeffs_in(var)
    return dq_strip([c.constant_value() for c in coeffs])


def dq_deg(f: Sequence[QQ]) -> int:
    return len(f) - 1


def dq_eval(f: Sequence[QQ], x: QQ) -> QQ:
    acc = QQ_ZERO
    for c in reversed(f):
        acc = acc * x + c
    return acc


def dq_diff(f: Sequence[QQ]) -> list[QQ]:
    return [c * i for i, c in enumerate(f)][1:]


def dq_rem(f: Sequence[QQ], g: Sequence[QQ]) -> list[QQ]:
    """Euclidean remainder over the field Q."""
    r = list(f)
    dg = len(g) - 1
    lg = g[-1]
    while len(r) - 1 >= dg and r:
        c = r[-1] / lg
        shift = len(r) - 1 - dg
        for i in range(dg):
            r[shift + i] -= c * g[i]
        r.pop()
        dq_strip(r)
    return r


def dq_exact_div_linear(f: Sequence[QQ], root: QQ) -> list[QQ]:
    """Exact division by (x - root); raises if root is not a root."""
    n = len(f) - 1
    out: list[QQ] = [QQ_ZERO] * n
    carry = f[n]
    for i in range(n - 1, -1, -1):
        out[i] = carry
        carry = f[i] + root * carry
    if carry != 0:
        raise ArithmeticError("not a root")
    return dq_strip(out)


def dq_normalize_positive(f: list[QQ]) -> list[QQ]:
    """Scale by a positive rational so coefficients are small; sign preserved."""
    if not f:
        return f
    cont = QQ_ZERO
    for c in f:
        cont = qq_gcd(cont, c)
        if cont == 1:
            return f
    return [c / cont for c in f]


def dq_sturm_chain(f: Sequence[QQ]) -> list[list[QQ]]:
    """Sturm chain of a squarefree dense polynomial (positive rescaling allowed)."""
    chain = [dq_normalize_positive(dq_strip(list(f)))]
    if not chain[0]:
        raise ValueError("identically zero")
    d = dq_diff(chain[0])
    if d:
        chain.append(dq_normalize_positive(d))
    while len(chain) >= 2 and len(chain[-1]) > 0:
        r = dq_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(dq_normalize_positive([-c for c in r]))
    return chain


def _variations(signs: Iterable[int]) -> int:
    count = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def dq_variations_at(chain: Sequence[Sequence[QQ]], x: QQ) -> int:
    return _variations(qq_sign(dq_eval(p, x)) for p in chain)


def dq_variations_at_inf(chain: Sequence[Sequence[QQ]], positive: bool) -> int:
    signs = []
    for p in chain:
        if not p:
            signs.append(0)
            continue
        s = qq_sign(p[-1])
        if not positive and (len(p) - 1) % 2 == 1:
            s = -s
        signs.append(s)
    return _variations(signs)


def dq_cauchy_bound(f: Sequence[QQ]) -> QQ:
    """B with all real roots strictly inside (-B, B)."""
    lead = abs(f[-1])
    m = max((abs(c) for c in f[:-1]), default=QQ_ZERO)
    return QQ_ONE + m / lead


def sturm_count(a: MPoly, lo=None, hi=None) -> int:
    """Exact number of distinct real roots of a univariate polynomial over Q
    in the closed interval [lo, hi]; None endpoints mean the infinite ray.

    The half-line [0, oo) is ``sturm_count(a, 0, None)``.  Endpoint roots
    count (they are stripped by exact division, the spec's allowed exact
    perturbation).  Raises ValueError on the zero polynomial.
    """
    if a.is_zero:
        raise ValueError("identically zero")
    if a.is_constant:
        return 0
    if len(a.vars) != 1:
        raise ValueError("not univariate")
    f = dq_from_mpoly(a, a.vars[0])
    return dq_count_roots(f, None if lo is None else qq(lo), None if hi is None else qq(hi))


def dq_count_roots(f: Sequence[QQ], lo: QQ | None, hi: QQ | None) -> int:
    """Exact number of distinct real roots in the closed interval [lo, hi].

    ``None`` endpoints mean -oo / +oo.  Endpoint roots are handled by exact
    division, so no precondition on the endpoints is needed.
    """
    work = dq_strip(list(f))
    if not work:
        raise ValueError("identically zero")
    hits = 0
    for endpoint in (lo, hi):
        if endpoint is None:
            continue
        stripped = False
        while len(work) > 1 and dq_eval(work, endpoint) == 0:
            work = dq_exact_div_linear(work, endpoint)
            stripped = True
        if stripped:
            hits += 1
    if len(work) <= 1:
        return hits
    chain = dq_sturm_chain(work)
    va = dq_variations_at(chain, lo) if lo is not None else dq_variations_at_inf(chain, False)
    vb = dq_variations_at(chain, hi) if hi is not None else dq_variations_at_inf(chain, True)
    return hits + va - vb

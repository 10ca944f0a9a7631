"""Univariate polynomials with Element coefficients.

Backs square-free part computation over the element field, root counting
for polynomials whose coefficients are themselves algebraic functions
(real-closedness queries, region membership in the shift variable), and
the sign-change searches of the ordered witness construction.  All degree
decisions go through the exact Element zero test; all sign decisions
through the exact Element sign.
"""

from __future__ import annotations

from typing import Sequence

from .elements import Element, Field
from .polys import QQ, qq


class EPoly:
    """Dense univariate polynomial over the element field (index = degree)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Sequence[Element]):
        self.field = field
        cs = [c if isinstance(c, Element) else field.rational(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = cs

    # -- basics ---------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Element:
        return self.coeffs[-1]

    def __repr__(self) -> str:
        return f"EPoly(deg {self.degree})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, EPoly):
            return NotImplemented
        return (self - other).is_zero

    def coefficient(self, k: int) -> Element:
        if k < 0 or k > self.degree:
            return self.field.zero()
        return self.coeffs[k]

    # -- arithmetic ---------------------------------------------------------------

    def __add__(self, other: "EPoly") -> "EPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else self.field.zero()
            b = other.coeffs[i] if i < len(other.coeffs) else self.field.zero()
            out.append(a + b)
        return EPoly(self.field, out)

    def __neg__(self) -> "EPoly":
        return EPoly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other: "EPoly") -> "EPoly":
        return self + (-other)

    def __mul__(self, other: "EPoly") -> "EPoly":
        if self.is_zero or other.is_zero:
            return EPoly(self.field, [])
        out = [self.field.zero() for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return EPoly(self.field, out)

    def scale(self, c: Element) -> "EPoly":
        return EPoly(self.field, [x * c for x in self.coeffs])

    def derivative(self) -> "EPoly":
        return EPoly(self.field, [c * i for i, c in enumerate(self.coeffs)][1:])

    def eval(self, at: Element | QQ | int) -> Element:
        if not isinstance(at, Element):
            at = self.field.rational(at)
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * at + c
        return acc

    # -- euclidean structure over the field ------------------------------------------

    def rem(self, other: "EPoly") -> "EPoly":
        if other.is_zero:
            raise ZeroDivisionError("remainder by zero polynomial")
        r = list(self.coeffs)
        dg = other.degree
        lg = other.leading()
        while len(r) - 1 >= dg and r:
            c = r[-1] / lg
            shift = len(r) - 1 - dg
            for i in range(dg):
                r[shift + i] = r[shift + i] - c * other.coeffs[i]
            r.pop()
            while r and r[-1].is_zero():
                r.pop()
        return EPoly(self.field, r)

    def monic(self) -> "EPoly":
        if self.is_zero:
            return self
        lead = self.leading()
        return EPoly(self.field, [c / lead for c in self.coeffs])

    def _prem_nodiv(self, other: "EPoly") -> "EPoly":
        """Pseudo-remainder using only ring operations (no inversions)."""
        lb = other.leading()
        r = list(self.coeffs)
        while r and len(r) - 1 >= other.degree:
            lr = r[-1]
            shift = len(r) - 1 - other.degree
            r = [lb * c for c in r[:-1]]
            for i, bc in enumerate(other.coeffs[:-1]):
                r[shift + i] = r[shift + i] - lr * bc
            while r and r[-1].is_zero():
                r.pop()
        return EPoly(self.field, r)

    def _cleared(self) -> "EPoly":
        """Scaled to denominator-free, content-stripped coefficients.

        The scaling is by a nonzero element, so the root set is unchanged;
        this is what keeps the remainder sequence below from blowing up.
        """
        from .polys import div_exact, mpoly_gcd

        if self.is_zero:
            return self
        field = self.field
        lcm = self.coeffs[0].den
        for c in self.coeffs[1:]:
            lcm = lcm * div_exact(c.den, mpoly_gcd(lcm, c.den))
        nums = [c.num * div_exact(lcm, c.den) for c in self.coeffs]
        content = nums[0]
        for n in nums[1:]:
            if content.is_constant:
                break
            content = mpoly_gcd(content, n)
        if not content.is_constant and not content.is_zero:
            nums = [div_exact(n, content) for n in nums]
        nums = [n.primitive_rational() for n in nums]
        roots: tuple = ()
        for c in self.coeffs:
            from .elements import _merge_roots

            roots = _merge_roots(roots, c.roots)
        real = all(c.real for c in self.coeffs)
        from .elements import Element, ONE

        out = [Element(field, n, ONE, tuple(r for r in roots if r.var in n.vars), real)
               for n in nums]
        return EPoly(field, out)

    def gcd(self, other: "EPoly") -> "EPoly":
        """Monic gcd over the element field, computed fraction-free."""
        a, b = self._cleared(), other._cleared()
        if a.degree < b.degree:
            a, b = b, a
        while not b.is_zero:
            r = a._prem_nodiv(b)._cleared()
            a, b = b, r
        return a.monic()

    def distinct_root_degree(self) -> int:
        """Number of distinct roots: deg - deg gcd(self, self')."""
        if self.is_zero:
            raise ValueError("zero polynomial")
        d = self.derivative()
        if d.is_zero:
            return self.degree if self.degree > 0 else 0
        return self.degree - self.gcd(d).degree

    def squarefree(self) -> "EPoly":
        """self / gcd(self, self'), monic."""
        if self.is_zero:
            raise ValueError("zero polynomial")
        d = self.derivative()
        if d.is_zero:
            return self.monic()
        g = self.gcd(d)
        if g.degree == 0:
            return self.monic()
        q, r = _divmod(self, g)
        if not r.is_zero:  # pragma: no cover - gcd divides by construction
            raise RuntimeError("inexact division by gcd")
        return q.monic()

    def div_linear(self, root: QQ) -> "EPoly":
        """Exact division by (x - root) for a known rational root."""
        n = self.degree
        out = [self.field.zero()] * n
        carry = self.coeffs[n]
        for i in range(n - 1, -1, -1):
            out[i] = carry
            carry = self.coeffs[i] + carry * qq(root)
        if not carry.is_zero():
            raise ArithmeticError("not a root")
        return EPoly(self.field, out)

    # -- Sturm counting (real coefficients) ----------------------------------------

    def sturm_chain(self) -> list["EPoly"]:
        chain = [self, self.derivative()]
        if chain[1].is_zero:
            return chain[:1]
        while True:
            r = chain[-2].rem(chain[-1])
            if r.is_zero:
                break
            chain.append(-r)
        return chain

    def count_real_roots(self, lo=None, hi=None, chain=None) -> int:
        """Distinct real roots in the CLOSED [lo, hi] (None = infinite ray).

        Requires real coefficients.  Endpoint roots are split off by exact
        division, so endpoints may be roots.
        """
        if self.is_zero:
            raise ValueError("zero polynomial")
        if not all(c.real for c in self.coeffs):
            raise ValueError("Sturm counting requires real coefficients")
        work = self
        hits = 0
        for endpoint in {e for e in (lo, hi) if e is not None}:
            stripped = False
            while work.degree >= 1 and work.eval(endpoint).is_zero():
                work = work.div_linear(endpoint)
                stripped = True
            if stripped:
                hits += 1
        if work.degree < 1:
            return hits
        chain = work.sturm_chain()
        va = _variations_at(chain, lo, False)
        vb = _variations_at(chain, hi, True)
        return hits + va - vb


def _divmod(a: EPoly, b: EPoly) -> tuple[EPoly, EPoly]:
    if b.is_zero:
        raise ZeroDivisionError
    field = a.field
    q = [field.zero()] * max(0, a.degree - b.degree + 1)
    r = list(a.coeffs)
    lg = b.leading()
    while len(r) - 1 >= b.degree and r:
        c = r[-1] / lg
        shift = len(r) - 1 - b.degree
        q[shift] = c
        for i in range(b.degree):
            r[shift + i] = r[shift + i] - c * b.coeffs[i]
        r.pop()
        while r and r[-1].is_zero():
            r.pop()
    return EPoly(field, q), EPoly(field, r)


def _variations_at(chain: list[EPoly], x, positive_inf: bool) -> int:
    signs = []
    for p in chain:
        if p.is_zero:
            signs.append(0)
            continue
        if x is None:
            s = p.leading().sign()
            if not positive_inf and p.degree % 2 == 1:
                s = -s
        else:
            s = p.eval(x).sign()
        signs.append(s)
    count = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count

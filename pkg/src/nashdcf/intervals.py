"""Dyadic interval and complex rectangle arithmetic.

Endpoints are rationals whose denominators are powers of two, so halving
and midpoints are exact.  Addition, subtraction and multiplication of
dyadics are exact; the only rounding happens in explicit outward-rounding
steps (coercing general rationals, division), which always take a target
precision in bits.  Every operation is sound: the returned set contains
the exact image of the inputs.
"""

from __future__ import annotations

from .polys import MPoly, QQ, QQ_ONE, QQ_ZERO, qq

try:
    from gmpy2 import isqrt as _isqrt  # type: ignore[import-untyped]
except ImportError:  # pragma: no cover
    from math import isqrt as _isqrt


def dyadic_down(x: QQ, prec: int) -> QQ:
    """Largest multiple of 2^-prec that is <= x."""
    num, den = int(x.numerator), int(x.denominator)
    return QQ((num << prec) // den, 1 << prec)


def dyadic_up(x: QQ, prec: int) -> QQ:
    """Smallest multiple of 2^-prec that is >= x."""
    num, den = int(x.numerator), int(x.denominator)
    return QQ(-((-num << prec) // den), 1 << prec)


def floor_log2(x: QQ) -> int:
    """Largest k with 2^k <= x, for x > 0."""
    if x <= 0:
        raise ValueError("needs a positive value")
    n, d = int(x.numerator), int(x.denominator)
    k = n.bit_length() - d.bit_length()
    while (QQ(2) ** k if k >= 0 else QQ(1, 1 << -k)) > x:
        k -= 1
    while (QQ(2) ** (k + 1) if k + 1 >= 0 else QQ(1, 1 << -(k + 1))) <= x:
        k += 1
    return k


def sqrt_lower(x: QQ, prec: int) -> QQ:
    """Dyadic lower bound for sqrt(x), x >= 0."""
    if x < 0:
        raise ValueError("negative radicand")
    num, den = int(x.numerator), int(x.denominator)
    return QQ(int(_isqrt((num << (2 * prec)) // den)), 1 << prec)


def sqrt_upper(x: QQ, prec: int) -> QQ:
    """Dyadic upper bound for sqrt(x), x >= 0."""
    if x < 0:
        raise ValueError("negative radicand")
    num, den = int(x.numerator), int(x.denominator)
    scaled = -((-num << (2 * prec)) // den)  # ceil division
    return QQ(int(_isqrt(scaled)) + 1, 1 << prec)


class Interval:
    """Closed real interval [lo, hi] with dyadic endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        self.lo = qq(lo)
        self.hi = qq(hi)
        if self.lo > self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x) -> "Interval":
        x = qq(x)
        return Interval(x, x)

    @staticmethod
    def from_rational(x, prec: int) -> "Interval":
        """Dyadic enclosure of an arbitrary rational at the given precision."""
        x = qq(x)
        if (int(x.denominator) & (int(x.denominator) - 1)) == 0:
            return Interval(x, x)
        return Interval(dyadic_down(x, prec), dyadic_up(x, prec))

    @property
    def width(self) -> QQ:
        return self.hi - self.lo

    @property
    def mid(self) -> QQ:
        return (self.lo + self.hi) / 2

    def __repr__(self) -> str:
        return f"[{self.lo}, {self.hi}]"

    def __eq__(self, other) -> bool:
        return isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi

    def contains(self, x) -> bool:
        x = qq(x)
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def strictly_contains(self, other: "Interval") -> bool:
        return self.lo < other.lo and other.hi < self.hi

    def disjoint(self, other: "Interval") -> bool:
        return self.hi < other.lo or other.hi < self.lo

    def intersect(self, other: "Interval") -> "Interval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("empty intersection")
        return Interval(lo, hi)

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other) -> "Interval":
        other = _as_interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        return self + (-_as_interval(other))

    def __rsub__(self, other) -> "Interval":
        return (-self) + _as_interval(other)

    def __mul__(self, other) -> "Interval":
        other = _as_interval(other)
        prods = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(prods), max(prods))

    __rmul__ = __mul__

    def square(self) -> "Interval":
        if self.lo >= 0:
            return Interval(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return Interval(self.hi * self.hi, self.lo * self.lo)
        return Interval(QQ_ZERO, max(self.lo * self.lo, self.hi * self.hi))

    def power(self, n: int) -> "Interval":
        if n == 0:
            return Interval.point(1)
        result = None
        base = self
        k = n
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base.square()
        return result

    def reciprocal(self, prec: int) -> "Interval":
        """1/self with outward rounding at RELATIVE precision 2^-prec."""
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        lo = QQ_ONE / self.hi
        hi = QQ_ONE / self.lo
        # shift the rounding grid below the result's binary magnitude
        small = min(abs(lo), abs(hi))
        eff = prec + max(0, -floor_log2(small)) + 2
        return Interval(dyadic_down(lo, eff), dyadic_up(hi, eff))

    def abs_upper(self) -> QQ:
        return max(abs(self.lo), abs(self.hi))

    def abs_lower(self) -> QQ:
        if self.lo <= 0 <= self.hi:
            return QQ_ZERO
        return min(abs(self.lo), abs(self.hi))

    def sign(self) -> int | None:
        """Definite sign of every point, or None if undecided."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None


def _as_interval(value) -> Interval:
    if isinstance(value, Interval):
        return value
    return Interval.point(value)


class Box:
    """Complex rectangle re + i*im with dyadic interval sides."""

    __slots__ = ("re", "im")

    def __init__(self, re: Interval, im: Interval):
        self.re = re
        self.im = im

    @staticmethod
    def from_real(iv: Interval) -> "Box":
        return Box(iv, Interval.point(0))

    @staticmethod
    def point(re, im=0) -> "Box":
        return Box(Interval.point(re), Interval.point(im))

    @property
    def is_real_line(self) -> bool:
        return self.im.lo == 0 and self.im.hi == 0

    def __repr__(self) -> str:
        return f"Box({self.re}, {self.im})"

    def __neg__(self) -> "Box":
        return Box(-self.re, -self.im)

    def conjugate(self) -> "Box":
        return Box(self.re, -self.im)

    def __add__(self, other) -> "Box":
        other = _as_box(other)
        return Box(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "Box":
        return self + (-_as_box(other))

    def __rsub__(self, other) -> "Box":
        return (-self) + _as_box(other)

    def __mul__(self, other) -> "Box":
        other = _as_box(other)
        if self.is_real_line:
            return Box(self.re * other.re, self.re * other.im)
        if other.is_real_line:
            return Box(self.re * other.re, self.im * other.re)
        return Box(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def power(self, n: int) -> "Box":
        if n == 0:
            return Box.point(1)
        result = None
        base = self
        k = n
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def divide(self, other: "Box", prec: int) -> "Box":
        """self/other with outward rounding; |other| must exclude 0."""
        m2 = other.abs2()
        if m2.lo <= 0:
            raise ZeroDivisionError("divisor box not separated from zero")
        num = self * other.conjugate()
        inv = m2.reciprocal(prec)
        return Box(num.re * inv, num.im * inv)

    def abs2(self) -> Interval:
        """Interval enclosure of |z|^2."""
        return self.re.square() + self.im.square()

    def abs_upper(self, prec: int) -> QQ:
        return sqrt_upper(self.abs2().hi, prec)

    def abs_lower(self, prec: int) -> QQ:
        lo = self.abs2().lo
        if lo <= 0:
            return QQ_ZERO
        return sqrt_lower(lo, prec)

    def contains_zero(self) -> bool:
        return self.re.contains(0) and self.im.contains(0)

    def contains_box(self, other: "Box") -> bool:
        return self.re.contains_interval(other.re) and self.im.contains_interval(other.im)

    def strictly_contains(self, other: "Box") -> bool:
        return self.re.strictly_contains(other.re) and self.im.strictly_contains(other.im)

    def disjoint(self, other: "Box") -> bool:
        return self.re.disjoint(other.re) or self.im.disjoint(other.im)

    def intersect(self, other: "Box") -> "Box":
        return Box(self.re.intersect(other.re), self.im.intersect(other.im))

    def max_side(self) -> QQ:
        return max(self.re.width, self.im.width)

    def outward(self, prec: int) -> "Box":
        """Round endpoints outward to prec bits (bounds coefficient growth)."""
        return Box(
            Interval(dyadic_down(self.re.lo, prec), dyadic_up(self.re.hi, prec)),
            Interval(dyadic_down(self.im.lo, prec), dyadic_up(self.im.hi, prec)),
        )


def _as_box(value) -> Box:
    if isinstance(value, Box):
        return value
    if isinstance(value, Interval):
        return Box.from_real(value)
    return Box.point(value)


def box_eval(poly: MPoly, assignment: dict[str, Box], prec: int) -> Box:
    """Sound enclosure of poly over the assigned boxes.

    Coefficients with non-dyadic denominators are outward-rounded at
    ``prec``; all other arithmetic is exact, so the result contains the
    exact value for every point selection inside the input boxes.
    """
    for v in poly.vars:
        if v not in assignment:
            raise ValueError(f"unassigned variable {v}")
    total = Box.point(0)
    powers: dict[tuple[str, int], Box] = {}
    for exps, c in poly.terms.items():
        term = Box.from_real(Interval.from_rational(c, prec))
        for v, e in zip(poly.vars, exps):
            if not e:
                continue
            key = (v, e)
            p = powers.get(key)
            if p is None:
                p = assignment[v].power(e)
                powers[key] = p
            term = term * p
        total = total + term
    return total


def interval_eval(poly: MPoly, assignment: dict[str, Interval], prec: int) -> Interval:
    """Real-interval specialization of box_eval."""
    boxes = {v: Box.from_real(iv) for v, iv in assignment.items()}
    out = box_eval(poly, boxes, prec)
    return out.re

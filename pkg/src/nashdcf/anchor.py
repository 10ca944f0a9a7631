"""The transcendental tag registry and the anchor point.

Tags are allocated monotonically and never reused; tag order is allocation
order.  The anchor assigns tag k the coordinate exp(sqrt(p_k)) with p_k the
k-th prime: the sqrt(p_k) are Q-linearly independent algebraic numbers, so
by the Lindemann-Weierstrass theorem the coordinate family is algebraically
independent over Q, and it is strictly increasing, so tag order agrees with
coordinate order.

Algebraic independence is the termination theorem of this whole engine:
a nonzero polynomial over Q in the tag variables CANNOT vanish at the
anchor, so refining its interval enclosure must eventually exclude zero.
Every refinement loop below (and in the element layer) terminates for
exactly this reason.

Enclosures are computed with integer arithmetic only (isqrt plus exact
Taylor sums with explicit tail bounds); there is no floating point.
"""

from __future__ import annotations

from dataclasses import dataclass

from .intervals import Box, Interval, box_eval, dyadic_down, dyadic_up
from .polys import MPoly, QQ, QQ_ONE, qq_sign

try:
    from gmpy2 import isqrt as _isqrt  # type: ignore[import-untyped]
except ImportError:  # pragma: no cover
    from math import isqrt as _isqrt


@dataclass(frozen=True, order=True)
class Tag:
    """A transcendental tag; total order = allocation order."""

    index: int

    @property
    def var(self) -> str:
        return f"L{self.index}"

    def __repr__(self) -> str:
        return f"Tag(#{self.index})"


def _nth_prime(n: int) -> int:
    """0-based: p_0 = 2."""
    count = -1
    candidate = 1
    while count < n:
        candidate += 1
        k = 2
        is_prime = True
        while k * k <= candidate:
            if candidate % k == 0:
                is_prime = False
                break
            k += 1
        if is_prime:
            count += 1
    return candidate


def _sqrt_enclosure(n: int, prec: int) -> Interval:
    """[s, s+1]/2^prec containing sqrt(n)."""
    s = int(_isqrt(n << (2 * prec)))
    return Interval(QQ(s, 1 << prec), QQ(s + 1, 1 << prec))


def _exp_point(x: QQ, prec: int) -> Interval:
    """Enclosure of exp(x) for a dyadic x >= 0, via halving + exact Taylor."""
    halvings = 0
    while x > QQ(1, 2):
        x = x / 2
        halvings += 1
    # Taylor sum with explicit tail bound: for 0 <= x <= 1/2 the tail after
    # the term t_N is at most t_{N+1} / (1 - x/(N+2)) <= 2 t_{N+1}.
    work = prec + 2 * halvings + 8
    threshold = QQ(1, 1 << (work + 2))
    total = QQ_ONE
    term = QQ_ONE
    i = 0
    while True:
        i += 1
        term = term * x / i
        total += term
        if term <= threshold:
            break
    tail = 2 * term * x / (i + 1)
    enclosure = Interval(dyadic_down(total, work), dyadic_up(total + tail, work))
    for _ in range(halvings):
        enclosure = Interval(
            dyadic_down(enclosure.lo * enclosure.lo, work),
            dyadic_up(enclosure.hi * enclosure.hi, work),
        )
    return enclosure


def _exp_sqrt_enclosure(p: int, prec: int) -> Interval:
    """Certified enclosure of exp(sqrt(p)) of width <= 2^-prec."""
    work = prec + 8
    while True:
        s = _sqrt_enclosure(p, work)
        lo = _exp_point(s.lo, work).lo
        hi = _exp_point(s.hi, work).hi
        result = Interval(lo, hi)
        if result.width <= QQ(1, 1 << prec):
            return result
        work *= 2


class Anchor:
    """Append-only tag registry plus refinable coordinate enclosures."""

    #: refinement loops start here and double (spec precision driver)
    START_PRECISION = 32

    def __init__(self):
        self._tags: list[Tag] = []
        self._coords: dict[int, Interval] = {}
        self._coord_prec: dict[int, int] = {}

    # -- allocation -----------------------------------------------------------

    @property
    def high_water(self) -> int:
        return len(self._tags)

    @property
    def tags(self) -> tuple[Tag, ...]:
        return tuple(self._tags)

    def fresh_tags(self, n: int) -> list[Tag]:
        """Allocate n new tags, strictly above every existing tag."""
        if n < 1:
            raise ValueError("need at least one tag")
        start = len(self._tags)
        new = [Tag(start + i) for i in range(n)]
        self._tags.extend(new)
        return new

    def ensure_allocated(self, count: int) -> None:
        """Grow the registry to at least ``count`` tags (session replay)."""
        if count > len(self._tags):
            self.fresh_tags(count - len(self._tags))

    def tag(self, index: int) -> Tag:
        if index >= len(self._tags):
            raise KeyError(f"tag #{index} not allocated")
        return self._tags[index]

    # -- coordinates ----------------------------------------------------------

    def coordinate(self, t: Tag, precision: int) -> Interval:
        """Nested enclosure of x0(t) of width <= 2^-precision."""
        if t.index >= len(self._tags):
            raise KeyError(f"tag #{t.index} not allocated")
        best = self._coords.get(t.index)
        if best is not None and self._coord_prec[t.index] >= precision:
            return best
        fresh = _exp_sqrt_enclosure(_nth_prime(t.index), precision)
        if best is not None:
            fresh = fresh.intersect(best)  # enforce nesting
        self._coords[t.index] = fresh
        self._coord_prec[t.index] = precision
        return fresh

    def coordinate_boxes(self, variables, precision: int) -> dict[str, Box]:
        out = {}
        for v in variables:
            if not (v.startswith("L") and v[1:].isdigit()):
                raise ValueError(f"not a tag variable: {v}")
            iv = self.coordinate(Tag(int(v[1:])), precision)
            out[v] = Box.from_real(iv)
        return out

    def eval_poly(self, poly: MPoly, precision: int) -> Box:
        """Sound refinable enclosure of poly(x0) for poly over tag variables."""
        if poly.is_zero:
            return Box.point(0)
        return box_eval(poly, self.coordinate_boxes(poly.vars, precision), precision)

    def interval_of(self, poly: MPoly, precision: int) -> Interval:
        return self.eval_poly(poly, precision).re

    def sign_of(self, poly: MPoly) -> int:
        """Exact sign of poly(x0) for poly over Q in tag variables.

        Zero only for the zero polynomial: by algebraic independence of the
        coordinates, a nonzero polynomial cannot vanish at the anchor, so the
        refinement loop below terminates.
        """
        if poly.is_zero:
            return 0
        if poly.is_constant:
            return qq_sign(poly.constant_value())
        prec = self.START_PRECISION
        while True:
            s = self.interval_of(poly, prec).sign()
            if s is not None and s != 0:
                return s
            prec *= 2
            if prec > 1 << 22:  # pragma: no cover - indicates a logic bug
                raise RuntimeError("sign refinement failed to converge")

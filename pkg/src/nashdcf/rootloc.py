"""Root location for defining polynomials at the anchor.

A defining polynomial P lives in Q[L...][Z], square-free in Z with nonzero
discriminant and leading coefficient in Q[L...]; by algebraic independence
neither vanishes at the anchor, so P(x0, .) has exactly deg_Z(P) distinct
complex roots.  Real roots are counted and isolated with exact Sturm
chains whose sign queries are answered by the anchor oracle; non-real
roots are located by a deterministic dyadic Durand-Kerner sweep and then
certified (existence and uniqueness) with a Krawczyk test over complex
rectangle arithmetic, using certified coefficient enclosures.

Everything here is exact integer/rational arithmetic; candidates and
certificates are reproducible across machines.
"""

from __future__ import annotations

from .anchor import Anchor
from .intervals import Box, Interval, dyadic_down, dyadic_up
from .polys import MPoly, QQ, QQ_ONE, QQ_ZERO, qq


def dense_z(poly: MPoly, var: str = "Z") -> list[MPoly]:
    return poly.coeffs_in(var)


def _dense_eval_exact(coeffs: list[MPoly], x: QQ) -> MPoly:
    acc = MPoly.zero()
    for c in reversed(coeffs):
        acc = acc.scale(x) + c
    return acc


def _dense_derivative(coeffs: list[MPoly]) -> list[MPoly]:
    return [c.scale(i) for i, c in enumerate(coeffs)][1:]


def _dense_strip(coeffs: list[MPoly]) -> list[MPoly]:
    while coeffs and coeffs[-1].is_zero:
        coeffs.pop()
    return coeffs


def _dense_is_root(coeffs: list[MPoly], x: QQ) -> bool:
    return _dense_eval_exact(coeffs, x).is_zero


def _dense_div_linear(coeffs: list[MPoly], root: QQ) -> list[MPoly]:
    """Exact division by (Z - root) for a rational root."""
    n = len(coeffs) - 1
    out: list[MPoly] = [MPoly.zero()] * n
    carry = coeffs[n]
    for i in range(n - 1, -1, -1):
        out[i] = carry
        carry = coeffs[i] + carry.scale(root)
    if not carry.is_zero:
        raise ArithmeticError("not a root")
    return _dense_strip(out)


class SturmChain:
    """Sturm chain of P in Z over Q(L...), signs decided at the anchor.

    The remainder sequence is the subresultant PRS (exact divisions by the
    known g*h^delta factors control coefficient growth; no gcds needed).
    Each stored element differs from the true Sturm remainder by a factor
    in Q[L...] whose sign at the anchor is computed once, so a parallel
    +-1 multiplier track restores the exact Sturm sign pattern at every
    real evaluation point.
    """

    def __init__(self, poly: MPoly, anchor: Anchor, var: str = "Z"):
        from .polys import div_exact, prem as _mp_prem

        self.anchor = anchor
        self.var = var
        f0 = _dense_strip(poly.coeffs_in(var))
        if not f0:
            raise ValueError("identically zero")
        self.chain: list[list[MPoly]] = [f0]
        self.taus: list[int] = [1]
        d = _dense_derivative(f0)
        if not d:
            self._lead_signs = None
            return
        self.chain.append(d)
        self.taus.append(1)
        one = MPoly.const(1)
        g, h = one, one
        gs, hs = 1, 1  # signs of g, h at the anchor
        zvar = MPoly.variable(var)
        A = MPoly.from_coeffs_in(var, f0)
        B = MPoly.from_coeffs_in(var, d)
        while True:
            dA, dB = A.degree(var), B.degree(var)
            delta = dA - dB
            lb = B.leading_coeff(var)
            lbs = anchor.sign_of(lb)
            R = _mp_prem(A, B, var)
            if R.is_zero:
                break
            divisor = g * h**delta
            Bnew = div_exact(R, divisor)
            # true remainder (A mod B) = Bnew * (g h^delta) / lb^(delta+1)
            sigma = gs * (hs**delta if delta % 2 == 1 else 1) * (
                lbs if (delta + 1) % 2 == 1 else 1
            )
            tau_new = -self.taus[-2] * sigma
            self.chain.append(_dense_strip(Bnew.coeffs_in(var)))
            self.taus.append(tau_new)
            A, B = B, Bnew
            g = A.leading_coeff(var)
            gs = anchor.sign_of(g)
            if delta == 1:
                h, hs = g, gs
            elif delta > 1:
                h = div_exact(g**delta, h ** (delta - 1))
                hs = anchor.sign_of(h)
            if B.degree(var) == 0:
                break
        self._lead_signs = None

    # -- sign variation counting -------------------------------------------

    def _variations(self, signs) -> int:
        count = 0
        prev = 0
        for s in signs:
            if s == 0:
                continue
            if prev != 0 and s != prev:
                count += 1
            prev = s
        return count

    def variations_at(self, x: QQ) -> int:
        signs = [
            tau * self.anchor.sign_of(_dense_eval_exact(f, x))
            for f, tau in zip(self.chain, self.taus)
        ]
        return self._variations(signs)

    def _lead_sign_list(self) -> list[int]:
        if self._lead_signs is None:
            self._lead_signs = [
                tau * self.anchor.sign_of(f[-1]) for f, tau in zip(self.chain, self.taus)
            ]
        return self._lead_signs

    def variations_at_inf(self, positive: bool) -> int:
        signs = []
        for f, s in zip(self.chain, self._lead_sign_list()):
            if not positive and (len(f) - 1) % 2 == 1:
                s = -s
            signs.append(s)
        return self._variations(signs)

    def count(self, lo: QQ | None, hi: QQ | None) -> int:
        """Distinct real roots of P(x0, .) in (lo, hi]; endpoints must not be roots."""
        va = self.variations_at(qq(lo)) if lo is not None else self.variations_at_inf(False)
        vb = self.variations_at(qq(hi)) if hi is not None else self.variations_at_inf(True)
        return va - vb


def coeff_boxes(coeffs: list[MPoly], anchor: Anchor, prec: int) -> list[Box]:
    return [anchor.eval_poly(c, prec) for c in coeffs]


def cauchy_radius(coeffs: list[MPoly], anchor: Anchor) -> QQ:
    """Dyadic B with every complex root of P(x0,.) strictly inside |z| < B."""
    prec = Anchor.START_PRECISION
    lead = coeffs[-1]
    while True:
        lead_box = anchor.eval_poly(lead, prec).re
        lead_lo = lead_box.abs_lower()
        if lead_lo > 0:
            break
        prec *= 2  # terminates: lc is a nonzero polynomial over Q
    top = QQ_ZERO
    for c in coeffs[:-1]:
        hi = anchor.eval_poly(c, prec).re.abs_upper()
        if hi > top:
            top = hi
    return dyadic_up(QQ_ONE + top / lead_lo, 8)


def nonzero_root_floor(coeffs: list[MPoly], anchor: Anchor) -> QQ:
    """Positive dyadic L: every NONZERO root of P(x0,.) has |z| >= L.

    Uses the reciprocal Cauchy bound from the lowest nonzero coefficient;
    the Z^m factor must already be stripped by the caller.
    """
    prec = Anchor.START_PRECISION
    low = coeffs[0]
    if low.is_zero:
        raise ValueError("strip the zero root first")
    while True:
        low_lo = anchor.eval_poly(low, prec).re.abs_lower()
        if low_lo > 0:
            break
        prec *= 2
    top = QQ_ZERO
    for c in coeffs[1:]:
        hi = anchor.eval_poly(c, prec).re.abs_upper()
        if hi > top:
            top = hi
    return low_lo / (low_lo + top)


class RealRoot:
    """An isolated real root: either an exact rational or a shrinking interval."""

    __slots__ = ("chain", "interval", "exact")

    def __init__(self, chain: SturmChain, interval: Interval, exact: QQ | None = None):
        self.chain = chain
        self.interval = interval
        self.exact = exact

    def refine(self) -> None:
        """Halve the isolating interval (spec refinement protocol)."""
        if self.exact is not None:
            return
        lo, hi = self.interval.lo, self.interval.hi
        mid = (lo + hi) / 2
        poly = self.chain.chain[0]
        if _dense_is_root(poly, mid):
            # the pinned root is the only root in here, so it IS mid
            self.exact = mid
            self.interval = Interval(mid, mid)
            return
        if self.chain.count(lo, mid) == 1:
            self.interval = Interval(lo, mid)
        else:
            self.interval = Interval(mid, hi)

    def refine_below(self, width: QQ) -> Interval:
        while self.interval.width > width and self.exact is None:
            self.refine()
        return self.interval

    def box(self) -> Box:
        return Box.from_real(self.interval)


def isolate_real_roots(poly: MPoly, anchor: Anchor, var: str = "Z") -> list[RealRoot]:
    """All real roots of P(x0, .), ascending, each isolated from every other
    complex root's real part only insofar as Sturm isolation guarantees
    (exactly one real root per interval)."""
    coeffs = _dense_strip(poly.coeffs_in(var))
    if not coeffs:
        raise ValueError("identically zero")
    exact_points: list[QQ] = []
    if len(coeffs) > 1 and coeffs[0].is_zero:
        # square-free input: the zero root is simple
        exact_points.append(QQ_ZERO)
        coeffs = coeffs[1:]
    if len(coeffs) == 1:
        chain = None
        roots = []
    else:
        bound = cauchy_radius(coeffs, anchor)
        work = MPoly.from_coeffs_in(var, coeffs)
        chain = SturmChain(work, anchor, var)
        roots = _bisect_real(chain, -bound, bound, exact_points, var)
    out = [RealRoot(chain, Interval(q, q), exact=q) for q in exact_points] + roots
    out.sort(key=lambda r: (r.interval.lo, r.interval.hi))
    return out


def _bisect_real(chain: SturmChain, lo: QQ, hi: QQ, exact_points: list[QQ], var: str):
    poly = chain.chain[0]
    roots: list[RealRoot] = []
    # endpoints beyond the Cauchy radius are never roots
    stack = [(lo, hi, chain.count(lo, hi))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            roots.append(RealRoot(chain, Interval(a, b)))
            continue
        mid = (a + b) / 2
        if _dense_is_root(poly, mid):
            # exact rational root; split it off and recurse on the quotient
            reduced = _dense_div_linear(list(poly), mid)
            exact_points.append(mid)
            sub = SturmChain(MPoly.from_coeffs_in(var, reduced), chain.anchor, var)
            roots.extend(_bisect_real(sub, a, b, exact_points, var))
            continue
        stack.append((a, mid, chain.count(a, mid)))
        stack.append((mid, b, chain.count(mid, b)))
    return roots


# ---------------------------------------------------------------------------
# Non-real roots: deterministic Durand-Kerner candidates + Krawczyk proof
# ---------------------------------------------------------------------------


class _CDyadic:
    """Point complex arithmetic on dyadics with explicit rounding."""

    __slots__ = ("re", "im")

    def __init__(self, re: QQ, im: QQ):
        self.re = re
        self.im = im

    def round(self, prec: int) -> "_CDyadic":
        return _CDyadic(dyadic_down(self.re, prec), dyadic_down(self.im, prec))

    def __add__(self, o):
        return _CDyadic(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return _CDyadic(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        return _CDyadic(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def divide(self, o, prec: int) -> "_CDyadic":
        m2 = o.re * o.re + o.im * o.im
        if m2 == 0:
            raise ZeroDivisionError
        num = self * _CDyadic(o.re, -o.im)
        return _CDyadic(dyadic_down(num.re / m2, prec), dyadic_down(num.im / m2, prec))

    def abs2(self) -> QQ:
        return self.re * self.re + self.im * self.im


def _dk_candidates(coeff_mids: list[_CDyadic], prec: int, sweeps: int) -> list[_CDyadic]:
    """Durand-Kerner iteration; fully deterministic dyadic arithmetic."""
    d = len(coeff_mids) - 1
    lead = coeff_mids[-1]
    monic = [c.divide(lead, prec) for c in coeff_mids]

    def peval(z: _CDyadic) -> _CDyadic:
        acc = _CDyadic(QQ_ZERO, QQ_ZERO)
        for c in reversed(monic):
            acc = (acc * z + c).round(prec + 16)
        return acc

    seed = _CDyadic(qq("2/5"), qq("9/10"))
    zs = []
    cur = _CDyadic(QQ_ONE, QQ_ZERO)
    for _ in range(d):
        cur = (cur * seed).round(prec)
        zs.append(cur)
    for _ in range(sweeps):
        moved = QQ_ZERO
        for j in range(d):
            denom = _CDyadic(QQ_ONE, QQ_ZERO)
            for k in range(d):
                if k != j:
                    denom = (denom * (zs[j] - zs[k])).round(prec + 16)
            if denom.abs2() == 0:
                zs[j] = (zs[j] + _CDyadic(QQ(1, 1 << (prec // 2)), QQ_ZERO)).round(prec)
                continue
            step = peval(zs[j]).divide(denom, prec + 8)
            zs[j] = (zs[j] - step).round(prec)
            if step.abs2() > moved:
                moved = step.abs2()
        if moved < QQ(1, 1 << (2 * prec - 8)):
            break
    return zs


def _poly_box_eval(coeffs: list[Box], z: Box) -> Box:
    acc = Box.point(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def krawczyk_refine(coeffs: list[Box], box: Box, prec: int) -> Box | None:
    """One Krawczyk step: returns a refined box proving EXACTLY ONE root of
    every member polynomial of ``coeffs`` in ``box``, or None.

    Test: K = m - c f(m) + (1 - c f'(B))(B - m) with a point constant c;
    success iff K lies in the interior of B and sup|1 - c f'(B)| < 1
    (existence by Brouwer, uniqueness by contraction of x - c f(x))."""
    dcoeffs = [c * Box.point(i) for i, c in enumerate(coeffs)][1:]
    m = Box.point(box.re.mid, box.im.mid)
    fm = _poly_box_eval(coeffs, m)
    fpB = _poly_box_eval(dcoeffs, box)
    fpm = _poly_box_eval(dcoeffs, m)
    w = _CDyadic(fpm.re.mid, fpm.im.mid)
    if w.abs2() == 0:
        return None
    cpt = _CDyadic(QQ_ONE, QQ_ZERO).divide(w, prec + 8)
    C = Box.point(cpt.re, cpt.im)
    one = Box.point(1)
    contraction = one - C * fpB
    if contraction.abs2().hi >= 1:
        return None
    K = (m - C * fm + contraction * (box - m)).outward(prec)
    if box.strictly_contains(K):
        return K.intersect(box)
    return None


class ComplexRoot:
    """A certified non-real root: Krawczyk box plus its provenance."""

    __slots__ = ("defining_coeffs", "anchor", "box", "_prec")

    def __init__(self, defining_coeffs: list[MPoly], anchor: Anchor, box: Box, prec: int):
        self.defining_coeffs = defining_coeffs
        self.anchor = anchor
        self.box = box
        self._prec = prec

    def refine(self) -> None:
        """Shrink the certified box; precision escalates on stalls."""
        target = self.box.max_side() / 2
        attempts = 0
        while self.box.max_side() > target:
            cb = coeff_boxes(self.defining_coeffs, self.anchor, self._prec)
            refined = krawczyk_refine(cb, self.box, self._prec)
            if refined is not None and refined.max_side() < self.box.max_side():
                self.box = refined
                continue
            self._prec *= 2
            attempts += 1
            if attempts > 24:  # pragma: no cover - indicates a logic bug
                raise RuntimeError("complex refinement stalled")

    def refine_below(self, width: QQ) -> Box:
        while self.box.max_side() > width:
            self.refine()
        return self.box


def isolate_nonreal_roots(
    poly: MPoly, anchor: Anchor, n_real: int, var: str = "Z"
) -> list[ComplexRoot]:
    """Certified boxes for all non-real roots of P(x0, .), conjugate-closed.

    ``n_real`` is the exact real-root count (from Sturm); the polynomial has
    real coefficients at the anchor so non-real roots come in conjugate
    pairs, and the upper-half roots determine everything.
    """
    coeffs = _dense_strip(poly.coeffs_in(var))
    d = len(coeffs) - 1
    pairs = (d - n_real) // 2
    if pairs == 0:
        return []
    prec = 64
    while True:
        boxes = _try_isolate_nonreal(coeffs, anchor, pairs, prec)
        if boxes is not None:
            out = []
            for b in boxes:
                out.append(ComplexRoot(coeffs, anchor, b, prec))
                out.append(ComplexRoot(coeffs, anchor, b.conjugate(), prec))
            return out
        prec *= 2
        if prec > 1 << 16:  # pragma: no cover
            raise RuntimeError("complex isolation failed to converge")


def _try_isolate_nonreal(coeffs: list[MPoly], anchor: Anchor, pairs: int, prec: int):
    cb = coeff_boxes(coeffs, anchor, prec)
    mids = [_CDyadic(b.re.mid, b.im.mid) for b in cb]
    if mids[-1].abs2() == 0:
        return None
    candidates = _dk_candidates(mids, prec, sweeps=16 + 4 * len(coeffs) + prec // 8)
    upper = [z for z in candidates if z.im > 0]
    certified: list[Box] = []
    for z in upper:
        gap = None
        for other in candidates:
            if other is z:
                continue
            g = (z - other).abs2()
            if gap is None or g < gap:
                gap = g
        if gap == 0 or gap is None:
            continue
        side = sqrt_floor_qq(gap) / 4
        refined = None
        for _ in range(8):  # Krawczyk needs a tight box; ladder down
            if side == 0:
                break
            box = Box(
                Interval(dyadic_down(z.re - side, prec), dyadic_up(z.re + side, prec)),
                Interval(dyadic_down(z.im - side, prec), dyadic_up(z.im + side, prec)),
            )
            refined = krawczyk_refine(cb, box, prec)
            if refined is not None:
                break
            side = side / 2
        if refined is None:
            continue
        for _ in range(40):
            if refined.im.lo > 0:
                break
            again = krawczyk_refine(cb, refined, prec)
            if again is None or again.max_side() >= refined.max_side():
                break
            refined = again
        if refined.im.lo <= 0:
            continue
        certified.append(refined)
    certified.sort(key=lambda b: (b.re.lo, b.im.lo))
    pruned: list[Box] = []
    for b in certified:
        if all(b.disjoint(p) for p in pruned):
            pruned.append(b)
    if len(pruned) == pairs:
        return pruned
    return None


def sqrt_floor_qq(x: QQ) -> QQ:
    """Dyadic lower bound of sqrt(x) at 16 fractional bits."""
    from .intervals import sqrt_lower

    return sqrt_lower(x, 16)

"""Independent brute-force oracles.

These deliberately avoid the algorithms under test: resultants are checked
against literal Sylvester determinants (fraction-free Bareiss elimination),
and Sturm counts against Descartes/bisection root isolation.  Expected
values frozen into the test suite were computed with these.
"""

from __future__ import annotations

from nashdcf.polys import MPoly, QQ, div_exact, dq_strip, qq


def sylvester_matrix(a: MPoly, b: MPoly, var: str) -> list[list[MPoly]]:
    da, db = a.degree(var), b.degree(var)
    ac = a.coeffs_in(var)
    bc = b.coeffs_in(var)
    n = da + db
    rows = []
    for i in range(db):
        row = [MPoly.zero()] * n
        for j, c in enumerate(reversed(ac)):
            row[i + j] = c
        rows.append(row)
    for i in range(da):
        row = [MPoly.zero()] * n
        for j, c in enumerate(reversed(bc)):
            row[i + j] = c
        rows.append(row)
    return rows


def det_bareiss(matrix: list[list[MPoly]]) -> MPoly:
    n = len(matrix)
    if n == 0:
        return MPoly.const(1)
    m = [row[:] for row in matrix]
    sign = 1
    prev = MPoly.const(1)
    for k in range(n - 1):
        if m[k][k].is_zero:
            for r in range(k + 1, n):
                if not m[r][k].is_zero:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return MPoly.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = div_exact(num, prev) if not num.is_zero else MPoly.zero()
            m[i][k] = MPoly.zero()
        prev = m[k][k]
    return m[n - 1][n - 1].scale(sign)


def sylvester_resultant(a: MPoly, b: MPoly, var: str) -> MPoly:
    """Resultant as the literal Sylvester determinant."""
    da, db = a.degree(var), b.degree(var)
    if da == 0:
        return a**db
    if db == 0:
        return b**da
    return det_bareiss(sylvester_matrix(a, b, var))


# -- Descartes / bisection real root counting --------------------------------


def _dq_eval(f, x):
    acc = qq(0)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def _translate_to_unit(f, lo, hi):
    """Coefficients of f(lo + (hi-lo)*x)."""
    span = hi - lo
    out = [qq(0)]
    for c in reversed(f):
        new = [qq(0)] * (len(out) + 1)
        for i, v in enumerate(out):
            new[i] += v * lo
            new[i + 1] += v * span
        new[0] += c
        out = new
    return dq_strip(out)


def _taylor_shift_1(f):
    c = list(f)
    n = len(c) - 1
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            c[j] += c[j + 1]
    return c


def _descartes_variations_01(f) -> int:
    """Descartes bound on the number of roots of f in the open (0, 1)."""
    rev = _taylor_shift_1(list(reversed(f)))
    count = 0
    prev = 0
    for c in rev:
        s = 1 if c > 0 else (-1 if c < 0 else 0)
        if s == 0:
            continue
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def count_roots_bisection(f: list[QQ], lo: QQ, hi: QQ) -> int:
    """Distinct real roots of squarefree f in the CLOSED [lo, hi], by
    Descartes-guided bisection (independent of Sturm chains)."""
    f = dq_strip(list(f))
    total = 0
    for endpoint in {lo, hi}:
        if _dq_eval(f, endpoint) == 0:
            total += 1
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        g = _translate_to_unit(f, a, b)
        v = _descartes_variations_01(g)
        if v == 0:
            continue
        if v == 1:
            total += 1
            continue
        mid = (a + b) / 2
        if _dq_eval(f, mid) == 0:
            total += 1
        stack.append((a, mid))
        stack.append((mid, b))
    return total

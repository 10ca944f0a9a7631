"""Dyadic interval and complex rectangle arithmetic: soundness and exactness."""

import random

import pytest

from nashdcf.intervals import (
    Box,
    Interval,
    box_eval,
    dyadic_down,
    dyadic_up,
    floor_log2,
    interval_eval,
    sqrt_lower,
    sqrt_upper,
)
from nashdcf.polys import MPoly, QQ, qq


def test_dyadic_rounding_brackets():
    x = qq("1/3")
    for prec in (4, 10, 30):
        lo, hi = dyadic_down(x, prec), dyadic_up(x, prec)
        assert lo <= x <= hi
        assert hi - lo <= QQ(1, 1 << prec)
        assert (int(lo.denominator) & (int(lo.denominator) - 1)) == 0


def test_floor_log2():
    assert floor_log2(qq(1)) == 0
    assert floor_log2(qq(3)) == 1
    assert floor_log2(qq("1/3")) == -2
    assert floor_log2(qq(8)) == 3
    assert floor_log2(qq("7/8")) == -1


def test_sqrt_bounds():
    for n in (2, 3, 5, 10, 1 << 20):
        lo, hi = sqrt_lower(qq(n), 40), sqrt_upper(qq(n), 40)
        assert lo * lo <= n <= hi * hi
        assert hi - lo <= QQ(4, 1 << 40)


def test_interval_mul_soundness():
    rng = random.Random(5)
    for _ in range(200):
        a = sorted(qq(rng.randint(-8, 8)) for _ in range(2))
        b = sorted(qq(rng.randint(-8, 8)) for _ in range(2))
        ia, ib = Interval(*a), Interval(*b)
        prod = ia * ib
        for x in (a[0], a[1], (a[0] + a[1]) / 2):
            for y in (b[0], b[1], (b[0] + b[1]) / 2):
                assert prod.contains(x * y)


def test_interval_square_tightness():
    iv = Interval(-1, 2)
    assert iv.square() == Interval(0, 4)
    assert Interval(1, 2).square() == Interval(1, 4)
    assert Interval(-3, -2).square() == Interval(4, 9)


def test_interval_power_contains_exact():
    iv = Interval(qq("1/2"), qq("3/2"))
    p = iv.power(5)
    assert p.contains(qq(1))
    assert p.contains(qq("1/32"))
    assert p.contains(qq("243/32"))


def test_reciprocal_relative_precision():
    # tiny magnitudes must keep relative accuracy (regression: box blowup)
    tiny = Interval(QQ(1, 1 << 64), QQ(1, 1 << 64))
    inv = tiny.reciprocal(32)
    assert inv.contains(QQ(1 << 64))
    assert inv.width <= QQ(1 << 64) / (1 << 30)
    with pytest.raises(ZeroDivisionError):
        Interval(-1, 1).reciprocal(16)


def test_box_mul_matches_complex_arithmetic():
    a = Box.point(qq(1), qq(2))   # 1 + 2i
    b = Box.point(qq(3), qq(-1))  # 3 - i
    prod = a * b                  # 5 + 5i
    assert prod.re.contains(5) and prod.im.contains(5)
    assert prod.re.width == 0 and prod.im.width == 0


def test_box_divide_soundness():
    a = Box.point(qq(1), qq(1))
    b = Box.point(qq(0), qq(1))
    out = a.divide(b, 40)  # (1+i)/i = 1 - i
    assert out.re.contains(1) and out.im.contains(-1)


def test_box_eval_examples():
    L1 = MPoly.variable("L1")
    out = box_eval(L1 * L1, {"L1": Box.from_real(Interval(1, 2))}, 32)
    assert out.re == Interval(1, 4)
    zero = box_eval(L1 - L1, {"L1": Box.from_real(Interval(1, 2))}, 32)
    assert zero.contains_zero()
    const = box_eval(MPoly.const(3), {}, 32)
    assert const.re == Interval(3, 3)


def test_box_eval_unassigned_errors():
    with pytest.raises(ValueError):
        box_eval(MPoly.variable("L1"), {}, 32)


def test_interval_eval_soundness_random():
    rng = random.Random(99)
    for _ in range(100):
        variables = ["L1", "L2"]
        terms = {}
        for _ in range(rng.randint(1, 4)):
            key = (rng.randint(0, 3), rng.randint(0, 3))
            terms[key] = qq(rng.randint(-5, 5))
        p = MPoly.from_terms(tuple(variables), terms)
        assign, point = {}, {}
        for v in variables:
            lo = qq(rng.randint(-4, 4))
            hi = lo + rng.randint(0, 3)
            assign[v] = Interval(lo, hi)
            point[v] = lo + (hi - lo) * QQ(rng.randint(0, 4), 4)
        enclosure = interval_eval(p, assign, 64)
        exact = p.eval_rational(point)
        assert enclosure.contains(exact)


def test_interval_eval_width_shrinks():
    p = MPoly.variable("L1") * MPoly.variable("L2") + 1
    widths = []
    for w in (qq(1), qq("1/4"), qq("1/16"), 0):
        assign = {
            "L1": Interval(1, 1 + w),
            "L2": Interval(2, 2 + w),
        }
        widths.append(interval_eval(p, assign, 64).width)
    assert widths[0] > widths[1] > widths[2] > widths[3]
    assert widths[3] == 0

"""Element field: exact arithmetic, decisions, adjunction, conjugation."""

import random

import pytest

from nashdcf.elements import (
    DegreeBudgetError,
    Field,
    adjoin_root,
    conjugate,
    partial_derivative,
    real_roots,
    split_re_im,
)
from nashdcf.polys import QQ, qq


def make_field(tags=2, cap=64):
    f = Field(degree_cap=cap)
    f.anchor.fresh_tags(tags)
    return f


def sqrt_of(field, e):
    """Positive square root via real-index adjunction."""
    return adjoin_root(field, [-e, field.zero(), field.one()], ("real", 2))


# -- constructors ---------------------------------------------------------------


def test_from_rational_examples():
    f = make_field()
    zero = f.rational(0)
    assert zero.is_zero() and zero.real
    one = f.rational(1)
    assert (one - 1).is_zero()
    neg = f.rational("-3/2")
    assert neg.sign() == -1
    box = neg.value_box(20)
    assert box.re.lo == box.re.hi == qq("-3/2")


def test_from_tag_examples():
    f = make_field()
    t0, t1 = f.anchor.tags[:2]
    a = f.tag(t0)
    box = a.value_box(30).re
    assert box.lo > 4 and box.hi < QQ(9, 2)  # around exp(sqrt 2)
    assert (f.tag(t0) - f.tag(t0)).is_zero()
    assert (f.tag(t1) - a).sign() == 1  # exp(sqrt 3) > exp(sqrt 2)


# -- field operations -------------------------------------------------------------


def test_additive_inverse_of_adjoined_roots():
    f = make_field()
    pos = sqrt_of(f, f.rational(2))
    neg = adjoin_root(f, [f.rational(-2), f.zero(), f.one()], ("real", 1))
    assert (pos + neg).is_zero()


def test_sqrt2_squared_is_two():
    f = make_field()
    r = sqrt_of(f, f.rational(2))
    assert (r * r - 2).is_zero()


def test_multiplicative_inverse_of_tag():
    f = make_field()
    a = f.tag(f.anchor.tags[0])
    assert (a * (f.one() / a) - 1).is_zero()


def test_division_by_zero_raises():
    f = make_field()
    r = sqrt_of(f, f.rational(2))
    with pytest.raises(ZeroDivisionError):
        r / (r * r - 2)


# -- is_zero ------------------------------------------------------------------------


def test_is_zero_examples():
    f = make_field()
    assert f.rational(0).is_zero()
    a, b = f.tag(f.anchor.tags[0]), f.tag(f.anchor.tags[1])
    assert not (a - b).is_zero()  # distinct anchor coordinates separate
    r = sqrt_of(f, f.rational(2))
    assert (r * r - 2).is_zero()


def test_is_zero_on_reducible_defining():
    # a root pinned on a square-free but reducible defining polynomial:
    # structural reduction cannot see the zero; the root-floor path must.
    f = make_field()
    r = sqrt_of(f, f.rational(2))
    g = adjoin_root(f, [f.rational(6), f.rational(-5), f.one()], ("real", 1))  # roots 2, 3
    assert (g - 2).is_zero()
    assert not (g - 3).is_zero()
    assert ((r * r - 2) * g).is_zero()


# -- sign -----------------------------------------------------------------------------


def test_sign_examples():
    f = make_field()
    assert f.rational("-3/2").sign() == -1
    a = f.tag(f.anchor.tags[0])
    assert (a - 4).sign() == 1  # exp(sqrt 2) = 4.113... > 4
    r = sqrt_of(f, f.rational(2))
    assert (r - qq("3/2")).sign() == -1


def test_sign_undefined_on_nonreal():
    f = make_field()
    i = f.imag_unit()
    with pytest.raises(ValueError):
        i.sign()


def test_sign_trichotomy_and_multiplicativity():
    f = make_field()
    rng = random.Random(17)
    pool = [
        f.tag(f.anchor.tags[0]),
        f.tag(f.anchor.tags[1]),
        sqrt_of(f, f.rational(2)),
        f.rational("-7/3"),
        f.rational(5),
    ]
    for _ in range(60):
        a = rng.choice(pool) + rng.randint(-3, 3)
        b = rng.choice(pool) * qq(rng.randint(1, 4)) - rng.randint(0, 2)
        sa, sb = a.sign(), b.sign()
        assert (a * b).sign() == sa * sb
        assert (sa == 0) == a.is_zero()


# -- adjunction -----------------------------------------------------------------------


def test_adjoin_real_index_selects_larger_root():
    f = make_field()
    r = sqrt_of(f, f.rational(2))
    assert r.sign() == 1
    assert (r * r - 2).is_zero()


def test_adjoin_smallest_abs_prefers_upper_half():
    f = make_field()
    i = adjoin_root(f, [f.one(), f.zero(), f.one()], "smallest")
    assert not i.real
    assert (i * i + 1).is_zero()
    assert i.value_box(20).im.lo > 0  # +i, not -i


def test_adjoin_degree_one_returns_tag_itself():
    f = make_field()
    a = f.tag(f.anchor.tags[0])
    e = adjoin_root(f, [-a, f.one()], "smallest")  # Z - L0
    assert (e - a).is_zero()
    assert not e.roots  # stays a rational-function element


def test_adjoin_constant_errors():
    f = make_field()
    with pytest.raises(ValueError):
        adjoin_root(f, [f.one()], "smallest")


def test_adjoin_selector_out_of_range():
    f = make_field()
    with pytest.raises(ValueError):
        adjoin_root(f, [f.one(), f.zero(), f.one()], ("real", 1))  # no real roots


def test_adjoin_rational_root_collapses():
    f = make_field()
    e = adjoin_root(f, [f.rational(-4), f.zero(), f.one()], ("real", 2))  # Z^2-4
    assert (e - 2).is_zero()
    assert not e.roots


# -- real_roots ------------------------------------------------------------------------


def test_real_roots_ordering():
    f = make_field()
    roots = real_roots(f, [f.rational(-2), f.zero(), f.one()])
    assert len(roots) == 2
    assert (roots[0] + roots[1]).is_zero()
    assert roots[0].sign() == -1 and roots[1].sign() == 1


def test_real_roots_none_for_sum_of_squares():
    f = make_field()
    assert real_roots(f, [f.one(), f.zero(), f.one()]) == []


def test_real_roots_odd_degree_tag_coefficient():
    f = make_field()
    a = f.tag(f.anchor.tags[0])
    roots = real_roots(f, [-a, f.zero(), f.zero(), f.one()])  # Z^3 - L0
    assert len(roots) == 1
    cube = roots[0] ** 3
    assert (cube - a).is_zero()


def test_real_roots_requires_real_coefficients():
    f = make_field()
    i = f.imag_unit()
    with pytest.raises(ValueError):
        real_roots(f, [i, f.one()])


# -- conjugation and splitting -------------------------------------------------------------


def test_conjugate_fixes_reals():
    f = make_field()
    r = sqrt_of(f, f.rational(2))
    assert (conjugate(r) - r).is_zero()


def test_split_of_imag_unit():
    f = make_field()
    i = f.imag_unit()
    re, im = split_re_im(i)
    assert re.is_zero()
    assert (im - 1).is_zero()


def test_split_round_trip():
    f = make_field()
    a = f.tag(f.anchor.tags[0])
    r = sqrt_of(f, f.rational(2))
    i = f.imag_unit()
    z = r + i * a
    re, im = split_re_im(z)
    assert (re - r).is_zero()
    assert (im - a).is_zero()
    assert (re + i * im - z).is_zero()
    assert conjugate(conjugate(z)).equals(z)


def test_conjugation_involution_random():
    f = make_field()
    rng = random.Random(3)
    i = f.imag_unit()
    a = f.tag(f.anchor.tags[0])
    for _ in range(10):
        z = a * rng.randint(1, 3) + i * qq(rng.randint(-3, 3)) + rng.randint(-2, 2)
        assert conjugate(conjugate(z)).equals(z)


# -- partial derivatives ----------------------------------------------------------------------


def test_partial_derivative_of_tag():
    f = make_field()
    t0, t1 = f.anchor.tags[:2]
    a = f.tag(t0)
    assert (partial_derivative(a, t0) - 1).is_zero()
    assert partial_derivative(a, t1).is_zero()


def test_partial_derivative_implicit_sqrt():
    f = make_field()
    t0 = f.anchor.tags[0]
    a = f.tag(t0)
    s = sqrt_of(f, a)  # sqrt(L0)
    d = partial_derivative(s, t0)
    assert (2 * s * d - 1).is_zero()


def test_partial_derivative_leibniz_sampled():
    f = make_field()
    t0, t1 = f.anchor.tags[:2]
    rng = random.Random(11)
    a0, a1 = f.tag(t0), f.tag(t1)
    s = sqrt_of(f, a0)
    pool = [a0, a1, s, a0 * a1 + 1, s + a1]
    for _ in range(25):
        x = rng.choice(pool)
        y = rng.choice(pool)
        t = rng.choice([t0, t1])
        lhs = partial_derivative(x * y, t)
        rhs = partial_derivative(x, t) * y + x * partial_derivative(y, t)
        assert (lhs - rhs).is_zero()


# -- field axioms, zero divisors, real closedness ------------------------------------------------


def test_field_axioms_sampled():
    f = make_field()
    rng = random.Random(23)
    t0, t1 = f.anchor.tags[:2]
    s = sqrt_of(f, f.rational(2))
    pool = [f.tag(t0), f.tag(t1), s, f.rational("2/3"), f.tag(t0) + s]
    for _ in range(60):
        a = rng.choice(pool) + rng.randint(-2, 2)
        b = rng.choice(pool) * qq(rng.randint(1, 3))
        c = rng.choice(pool)
        assert ((a + b) + c - (a + (b + c))).is_zero()
        assert (a * (b + c) - (a * b + a * c)).is_zero()
        assert (a + b - (b + a)).is_zero()
        if not a.is_zero():
            assert (a * (f.one() / a) - 1).is_zero()


def test_no_zero_divisors():
    f = make_field()
    rng = random.Random(29)
    s = sqrt_of(f, f.rational(2))
    pool = [f.tag(f.anchor.tags[0]), s, f.rational("5/7"), s - 1]
    for _ in range(20):
        a = rng.choice(pool)
        b = rng.choice(pool)
        assert (a * b).is_zero() == (a.is_zero() or b.is_zero())


def test_positive_elements_have_square_roots():
    f = make_field()
    a = f.tag(f.anchor.tags[0]) - 4  # positive, nonrational
    r = sqrt_of(f, a)
    assert r.sign() == 1
    assert (r * r - a).is_zero()


def test_evaluation_soundness_of_sums():
    f = make_field()
    a = f.tag(f.anchor.tags[0])
    b = sqrt_of(f, f.rational(2))
    total = a + b
    for prec in (32, 64, 128):
        sa = a.value_box(prec).re
        sb = b.value_box(prec).re
        st = total.value_box(prec).re
        hull = sa + sb
        assert not (st.hi < hull.lo or hull.hi < st.lo)  # boxes intersect
    w1 = total.value_box(32).re.width
    w2 = total.value_box(256).re.width
    assert w2 < w1


def test_degree_budget_exhaustion():
    f = make_field(cap=8)
    r1 = adjoin_root(f, [f.rational(-2), f.zero(), f.zero(), f.one()], ("real", 1))
    r2 = adjoin_root(f, [f.rational(-3), f.zero(), f.zero(), f.one()], ("real", 1))
    r3 = adjoin_root(f, [f.rational(-5), f.zero(), f.zero(), f.one()], ("real", 1))
    with pytest.raises(DegreeBudgetError):
        # 3 cube roots give a degree-27 defining: over the cap of 8
        (r1 + r2 + r3).standalone_defining()

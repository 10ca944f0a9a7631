"""Differential polynomials, the derivation table, and witness constructions."""

import math
import random

import pytest

from nashdcf.derivation import (
    DerivationTable,
    DiffPoly,
    adjoin_differential_generators,
    blum_witness,
    complexify_delta,
    distinct_solutions,
    ordered_witness,
    root_between,
)
from nashdcf.elements import Field, adjoin_root
from nashdcf.polys import qq


def setup():
    f = Field()
    return f, DerivationTable(f)


def dp(field, terms):
    table = {}
    for exps, v in terms.items():
        table[exps] = v if hasattr(v, "field") else field.rational(v)
    return DiffPoly(field, table)


# -- order/degree conventions -------------------------------------------------


def test_order_and_degree_reading():
    f, _ = setup()
    p = dp(f, {(0, 0, 2): 1, (1, 1): 1})  # (y'')^2 + y y'
    assert p.order == 2
    assert p.degree == 2


def test_constant_has_order_minus_one():
    f, _ = setup()
    assert dp(f, {(): 5}).order == -1


def test_zero_degree_sentinel():
    f, _ = setup()
    assert DiffPoly(f, {}).degree == -math.inf


def test_star_form_round_trip():
    f, _ = setup()
    p = dp(f, {(1, 1): 1, (): 1})  # y y' + 1
    star = p.star_terms()
    assert set(star) == {(1, 1), (0, 0)}
    q = dp(f, {(0, 0, 1): 1, (1,): -1})  # y'' - y
    assert set(q.star_terms()) == {(0, 0, 1), (1, 0, 0)}


def test_zero_value_coefficients_are_dropped():
    f, _ = setup()
    r = adjoin_root(f, [f.rational(-2), f.zero(), f.one()], ("real", 2))
    ghost = r * r - 2  # nonzero representation, zero value
    p = dp(f, {(0, 1): ghost, (1,): 1})
    assert p.order == 0


def test_ord_multiplicativity():
    f, _ = setup()
    rng = random.Random(4)
    for _ in range(20):
        op = rng.randint(0, 2)
        oq = rng.randint(0, 2)
        p = dp(f, {tuple([0] * op + [1]): rng.randint(1, 3)})
        q = dp(f, {tuple([0] * oq + [2]): rng.randint(1, 3), (): 1})
        assert (p * q).order == max(p.order, q.order)


# -- the derivation -----------------------------------------------------------


def test_delta_vanishes_on_rationals():
    f, t = setup()
    assert t.apply_delta(f.rational("22/7")).is_zero()


def test_delta_with_default_pin_is_zero():
    f, t = setup()
    (tag,) = f.anchor.fresh_tags(1)
    a = f.tag(tag)
    assert t.apply_delta(a).is_zero()  # first read pins g = 0
    assert t.is_pinned(tag.index)
    with pytest.raises(KeyError):
        t.pin(tag, f.one())  # pins are permanent


def test_delta_leibniz_expansion():
    f, t = setup()
    t0, t1 = f.anchor.fresh_tags(2)
    a0, a1 = f.tag(t0), f.tag(t1)
    t.pin(t0, a1)
    t.pin(t1, f.one())
    out = t.apply_delta(a0 * a1)
    assert (out - (a1 * a1 + a0)).is_zero()


def test_derivation_axioms_sampled():
    f, t = setup()
    tags = f.anchor.fresh_tags(3)
    a, b, c = (f.tag(x) for x in tags)
    t.pin(tags[0], b)
    t.pin(tags[1], f.one())
    t.pin(tags[2], a * b)
    rng = random.Random(7)
    pool = [a, b, c, a * b + 1, c * c - a]
    for _ in range(30):
        x, y = rng.choice(pool), rng.choice(pool)
        assert (t.apply_delta(x + y) - (t.apply_delta(x) + t.apply_delta(y))).is_zero()
        assert (
            t.apply_delta(x * y) - (t.apply_delta(x) * y + x * t.apply_delta(y))
        ).is_zero()
        assert t.apply_delta(f.rational(rng.randint(-5, 5))).is_zero()


def test_diff_eval_identity_cases():
    f, t = setup()
    (tag,) = f.anchor.fresh_tags(1)
    a = f.tag(tag)
    y = dp(f, {(1,): 1})
    assert (t.diff_eval(y, a) - a).is_zero()
    yprime = dp(f, {(0, 1): 1})
    assert t.diff_eval(yprime, a).is_zero()  # default pin


# -- Blum witnesses --------------------------------------------------------------


def test_blum_yprime():
    f, t = setup()
    p = dp(f, {(0, 1): 1})  # y'
    q = dp(f, {(1,): 1})  # y
    w = blum_witness(f, t, p, q)
    assert t.apply_delta(w).is_zero()
    assert not w.is_zero()


def test_blum_exponential_like():
    f, t = setup()
    p = dp(f, {(0, 1): 1, (1,): -1})  # y' - y
    q = dp(f, {(1,): 1, (): -1})  # y - 1
    w = blum_witness(f, t, p, q)
    assert (t.apply_delta(w) - w).is_zero()
    assert not (w - 1).is_zero()
    assert t.diff_eval(p, w).is_zero()


def test_blum_order_zero_adjoins_a_root():
    f, t = setup()
    p = dp(f, {(2,): 1, (): -2})  # y^2 - 2
    w = blum_witness(f, t, p, dp(f, {(): 1}))
    assert (w * w - 2).is_zero()


def test_blum_preconditions():
    f, t = setup()
    p = dp(f, {(0, 1): 1})
    with pytest.raises(ValueError):
        blum_witness(f, t, p, DiffPoly(f, {}))  # q = 0
    with pytest.raises(ValueError):
        blum_witness(f, t, p, dp(f, {(0, 1): 1}))  # ord q = ord p
    with pytest.raises(ValueError):
        blum_witness(f, t, dp(f, {(): 3}), dp(f, {(): 1}))  # p constant


def test_blum_construction_invariant():
    f, t = setup()
    p = dp(f, {(0, 0, 1): 1, (1,): -1})  # y'' - y
    q = dp(f, {(0, 1): 1})  # y'
    before = f.anchor.high_water
    w = blum_witness(f, t, p, q)
    tags = f.anchor.tags[before : before + 2]
    jets = t.jet(w, 2)
    assert (jets[0] - f.tag(tags[0])).is_zero()
    assert (jets[1] - f.tag(tags[1])).is_zero()
    assert t.diff_eval(p, w).is_zero()
    assert not t.diff_eval(q, w).is_zero()


# -- distinct solutions ------------------------------------------------------------


def test_distinct_solutions_examples():
    f, t = setup()
    sols = distinct_solutions(f, t, 3)
    p0 = dp(f, {(0, 1): 1, (1, 1): 1, (1,): -1})
    for s in sols:
        assert t.diff_eval(p0, s).is_zero()
        assert not s.is_zero()
    for i in range(3):
        for j in range(i):
            assert not (sols[i] - sols[j]).is_zero()


# -- ordered witnesses ----------------------------------------------------------------


def test_ordered_exponential_at_one():
    f, t = setup()
    p = dp(f, {(0, 1): 1, (1,): -1})  # y' - y
    q = dp(f, {(1,): 1})  # y
    w = ordered_witness(f, t, p, [q], [f.one(), f.one()])
    assert (t.apply_delta(w) - w).is_zero()
    assert w.sign() == 1
    box = w.value_box(40).re
    assert box.lo > qq("9/10") and box.hi < qq("11/10")  # lands near the target


def test_ordered_flat_inside_window():
    f, t = setup()
    p = dp(f, {(0, 1): 1})  # y'
    q = dp(f, {(): 1, (2,): -1})  # 1 - y^2
    w = ordered_witness(f, t, p, [q], [f.zero(), f.zero()])
    assert t.apply_delta(w).is_zero()
    assert t.diff_eval(q, w).sign() == 1  # -1 < w < 1
    assert not w.is_zero()


def test_ordered_rejects_degenerate_point():
    f, t = setup()
    p = dp(f, {(0, 2): 1})  # (y')^2: d/dx1 vanishes at (0, 0)
    with pytest.raises(ValueError):
        ordered_witness(f, t, p, [], [f.zero(), f.zero()])


def test_ordered_rejects_nonvanishing_point():
    f, t = setup()
    p = dp(f, {(0, 1): 1, (1,): -1})
    with pytest.raises(ValueError):
        ordered_witness(f, t, p, [], [f.one(), f.rational(2)])


# -- differential intermediate values ----------------------------------------------------


def test_root_between_linear_flow():
    f, t = setup()
    p = dp(f, {(0, 1): 1, (1,): 1, (): -1})  # y' + y - 1
    c = root_between(f, t, p, f.zero(), f.rational(2))
    assert t.diff_eval(p, c).is_zero()
    assert c.sign() == 1 and (2 - c).sign() == 1
    assert (t.apply_delta(c) - (1 - c)).is_zero()


def test_root_between_order_zero_shortcut():
    f, t = setup()
    p = dp(f, {(2,): 1, (): -2})  # y^2 - 2
    c = root_between(f, t, p, f.one(), f.rational(2))
    assert (c * c - 2).is_zero()
    assert (c - 1).sign() == 1 and (2 - c).sign() == 1


def test_root_between_requires_sign_change():
    f, t = setup()
    p = dp(f, {(0, 1): 1, (1,): 1, (): -1})
    with pytest.raises(ValueError):
        root_between(f, t, p, f.rational(2), f.rational(3))


# -- prescribed-derivative generators ----------------------------------------------------


def test_generator_with_unit_derivative():
    f, t = setup()
    (e,) = adjoin_differential_generators(f, t, [1])
    assert (t.apply_delta(e) - 1).is_zero()


def test_exponential_like_generator():
    f, t = setup()
    (e,) = adjoin_differential_generators(f, t, [lambda gens: gens[0]])
    assert (t.apply_delta(e) - e).is_zero()


def test_sine_cosine_pair():
    f, t = setup()
    s, c = adjoin_differential_generators(f, t, [lambda g: g[1], lambda g: -g[0]])
    assert (t.apply_delta(s) - c).is_zero()
    assert (t.apply_delta(c) + s).is_zero()
    assert (t.apply_delta(t.apply_delta(s)) + s).is_zero()


# -- complexified derivation ---------------------------------------------------------------


def test_complexify_reduces_to_real():
    f, t = setup()
    (e,) = adjoin_differential_generators(f, t, [1])
    lhs, rhs = complexify_delta(f, t, e, f.zero())
    assert (lhs - rhs).is_zero()
    assert (lhs - t.apply_delta(e)).is_zero()


def test_delta_of_imag_unit_is_zero():
    f, t = setup()
    i = f.imag_unit()
    assert t.apply_delta(i).is_zero()
    lhs, rhs = complexify_delta(f, t, f.zero(), f.one())
    assert lhs.is_zero() and rhs.is_zero()


def test_complexify_random_pairs():
    f, t = setup()
    tags = f.anchor.fresh_tags(2)
    a, b = f.tag(tags[0]), f.tag(tags[1])
    t.pin(tags[0], b)
    t.pin(tags[1], a)
    rng = random.Random(15)
    for _ in range(10):
        f1 = a * rng.randint(1, 3) + rng.randint(-2, 2)
        f2 = b * rng.randint(1, 3) - rng.randint(0, 2)
        lhs, rhs = complexify_delta(f, t, f1, f2)
        assert (lhs - rhs).is_zero()


# -- chain rule through adjoined roots -------------------------------------------------------


def test_delta_commutes_with_algebraic_relations():
    # differentiate the defining relation of an adjoined square root
    f, t = setup()
    tags = f.anchor.fresh_tags(2)
    a = f.tag(tags[0])
    t.pin(tags[0], f.tag(tags[1]))
    s = adjoin_root(f, [-a, f.zero(), f.one()], ("real", 2))  # s^2 = L0
    lhs = t.apply_delta(s * s)
    rhs = t.apply_delta(a)
    assert (lhs - rhs).is_zero()
    # chain rule: d(s) = d(L0) / (2 s)
    expect = rhs / (2 * s)
    assert (t.apply_delta(s) - expect).is_zero()

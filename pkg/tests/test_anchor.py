"""Tag allocation and certified anchor coordinates.

Coordinate enclosures are checked against mpmath as the independent
arbitrary-precision exp/sqrt oracle.
"""

import mpmath
import pytest

from nashdcf.anchor import Anchor, Tag, _nth_prime
from nashdcf.polys import MPoly, QQ


def oracle_coordinate(k: int) -> QQ:
    """exp(sqrt(p_k)) to 60 significant digits, as an exact rational."""
    with mpmath.workdps(60):
        value = mpmath.exp(mpmath.sqrt(_nth_prime(k)))
        sign, man, exp, _ = mpmath.mpf(value)._mpf_
    q = QQ(int(man)) * (QQ(2) ** exp if exp >= 0 else QQ(1, 2 ** (-exp)))
    return -q if sign else q


def test_fresh_tags_monotone():
    a = Anchor()
    first = a.fresh_tags(2)
    assert [t.index for t in first] == [0, 1]
    third = a.fresh_tags(1)
    assert third[0].index == 2
    assert first[0] < first[1] < third[0]


def test_fresh_tags_pairwise_disjoint():
    a = Anchor()
    seen = set()
    for _ in range(3):
        batch = {t.index for t in a.fresh_tags(3)}
        assert not (batch & seen)
        seen |= batch


def test_coordinate_tag0_matches_exp_sqrt2():
    a = Anchor()
    (t0,) = a.fresh_tags(1)
    iv = a.coordinate(t0, 7)
    assert iv.width <= QQ(1, 128)
    assert iv.contains(oracle_coordinate(0))  # 4.11325...
    assert iv.lo > 4 and iv.hi < QQ(9, 2)


def test_coordinate_tag1_matches_exp_sqrt3():
    a = Anchor()
    a.fresh_tags(2)
    iv = a.coordinate(Tag(1), 7)
    assert iv.contains(oracle_coordinate(1))  # 5.65223...
    assert iv.lo > QQ(11, 2) and iv.hi < 6


def test_coordinate_nesting():
    a = Anchor()
    (t,) = a.fresh_tags(1)
    prev = a.coordinate(t, 16)
    for prec in (17, 32, 64, 128):
        cur = a.coordinate(t, prec)
        assert prev.contains_interval(cur)
        assert cur.width <= QQ(1, 1 << prec)
        prev = cur


def test_coordinates_strictly_increasing():
    a = Anchor()
    tags = a.fresh_tags(6)
    ivs = [a.coordinate(t, 40) for t in tags]
    for left, right in zip(ivs, ivs[1:]):
        assert left.hi < right.lo


def test_high_precision_against_oracle():
    a = Anchor()
    tags = a.fresh_tags(4)
    for k, t in enumerate(tags):
        iv = a.coordinate(t, 150)
        assert iv.contains(oracle_coordinate(k))


def test_eval_poly_sign_positive():
    a = Anchor()
    (t0,) = a.fresh_tags(1)
    p = MPoly.variable(t0.var) - 4  # exp(sqrt 2) - 4 > 0
    assert a.sign_of(p) == 1
    box = a.eval_poly(p, 64)
    assert box.re.lo > 0


def test_eval_poly_zero_and_cancellation():
    a = Anchor()
    (t0,) = a.fresh_tags(1)
    assert a.eval_poly(MPoly.zero(), 32).contains_zero()
    assert a.sign_of(MPoly.zero()) == 0
    p = MPoly.variable(t0.var) - MPoly.variable(t0.var)
    assert p.is_zero  # cancels symbolically; box is exactly [0,0]
    w1 = a.eval_poly(MPoly.variable(t0.var), 32).re.width
    w2 = a.eval_poly(MPoly.variable(t0.var), 128).re.width
    assert w2 < w1


def test_unallocated_tag_errors():
    a = Anchor()
    with pytest.raises(KeyError):
        a.coordinate(Tag(0), 10)

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from regnet_complexity.numerics import (
    FlaggedInterval,
    Rect,
    format_number,
    interval_affine_image,
    interval_intersect,
    parse_rational,
    rect_intersect,
    to_float,
)

unit_fractions = st.fractions(min_value=0, max_value=1, max_denominator=64)
slopes = st.fractions(min_value=0, max_value=1, max_denominator=16).filter(lambda a: 0 < a < 1)


@st.composite
def intervals(draw):
    lo = draw(unit_fractions)
    hi = draw(unit_fractions)
    if lo > hi:
        lo, hi = hi, lo
    if lo == hi:
        return FlaggedInterval.singleton(lo)
    return FlaggedInterval(lo, hi, draw(st.booleans()), draw(st.booleans()))


def test_parse_rational_reads_decimal_text_exactly():
    assert parse_rational("0.93") == Fraction(93, 100)
    assert parse_rational(0.93) == Fraction(93, 100)
    assert parse_rational("3/7") == Fraction(3, 7)
    assert parse_rational(2) == Fraction(2)


@pytest.mark.parametrize("value", ["abc", "1/0", True, None])
def test_parse_rational_rejects_garbage(value):
    with pytest.raises(TypeError):
        parse_rational(value)


def test_format_number():
    assert format_number(Fraction(1, 3)) == "1/3"
    assert format_number(0.5) == "0.5"


def test_to_float_reads_numbers_and_rational_text():
    assert to_float(Fraction(1, 2)) == 0.5
    assert to_float(Fraction(1, 3)) == 1 / 3
    assert to_float("3/4") == 0.75
    assert to_float(2) == 2.0


def test_make_returns_none_for_empty_sets():
    assert FlaggedInterval.make(Fraction(1, 2), Fraction(1, 2), True, False) is None
    assert FlaggedInterval.make(Fraction(1), Fraction(0)) is None
    with pytest.raises(ValueError):
        FlaggedInterval(Fraction(1, 2), Fraction(1, 2), False, True)


def test_intersection_respects_flags():
    left = FlaggedInterval(Fraction(0), Fraction(1, 2), True, False)
    right = FlaggedInterval(Fraction(1, 2), Fraction(1), True, True)
    assert interval_intersect(left, right) is None
    closed = FlaggedInterval.closed(Fraction(0), Fraction(1, 2))
    assert interval_intersect(closed, right) == FlaggedInterval.singleton(Fraction(1, 2))


def test_affine_image_keeps_flags_and_rejects_bad_slopes():
    side = FlaggedInterval(Fraction(0), Fraction(1, 2), True, False)
    image = interval_affine_image(side, Fraction(1, 4), Fraction(3, 4))
    assert image == FlaggedInterval(Fraction(3, 4), Fraction(7, 8), True, False)
    with pytest.raises(ValueError):
        interval_affine_image(side, Fraction(1), Fraction(0))
    with pytest.raises(ValueError):
        interval_affine_image(side, Fraction(0), Fraction(0))


def test_distance_and_string_forms():
    side = FlaggedInterval(Fraction(1, 4), Fraction(1, 2), False, True)
    assert side.distance_to(Fraction(0)) == Fraction(1, 4)
    assert side.distance_to(Fraction(1)) == Fraction(1, 2)
    assert side.distance_to(Fraction(1, 3)) == 0
    assert str(side) == "(1/4, 1/2]"
    assert str(FlaggedInterval.singleton(Fraction(1, 5))) == "{1/5}"


def test_rect_operations():
    cube = Rect.unit_cube(2)
    corner = Rect.of([FlaggedInterval.closed(Fraction(0), Fraction(1, 2)), FlaggedInterval.singleton(Fraction(1))])
    assert cube.contains((Fraction(1, 3), Fraction(2, 3)))
    assert rect_intersect(cube, corner) == corner
    with pytest.raises(ValueError):
        rect_intersect(cube, Rect.unit_cube(3))
    with pytest.raises(ValueError):
        cube.contains((Fraction(0),))
    assert str(corner) == "[0, 1/2] x {1}"


@given(intervals(), intervals())
def test_intersection_is_commutative(u, v):
    assert interval_intersect(u, v) == interval_intersect(v, u)


@given(intervals(), intervals(), unit_fractions)
def test_intersection_is_the_set_intersection(u, v, x):
    meet = interval_intersect(u, v)
    inside = u.contains(x) and v.contains(x)
    assert (meet is not None and meet.contains(x)) == inside


@given(intervals(), slopes, unit_fractions, unit_fractions)
def test_affine_image_maps_members_to_members(u, a, b, x):
    image = interval_affine_image(u, a, b)
    assert image.contains(a * x + b) == u.contains(x)


@given(intervals(), intervals())
def test_subset_agrees_with_intersection(u, v):
    if u.is_subset(v):
        assert interval_intersect(u, v) == u


@given(intervals(), intervals(), slopes, unit_fractions)
def test_affine_image_commutes_with_intersection(u, v, a, b):
    meet = interval_intersect(u, v)
    image_of_meet = None if meet is None else interval_affine_image(meet, a, b)
    assert image_of_meet == interval_intersect(interval_affine_image(u, a, b), interval_affine_image(v, a, b))


@given(intervals(), slopes, unit_fractions)
def test_affine_image_contracts_width(u, a, b):
    assert interval_affine_image(u, a, b).width == a * u.width

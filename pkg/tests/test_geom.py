from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from infrared.geom import (
    Direction,
    InvalidInput,
    Point,
    directions_form_fan,
    is_convex_polygon,
    orient,
    rational,
    sort_by_angle,
)

coord = st.fractions(min_value=-50, max_value=50, max_denominator=12)
points = st.builds(Point, coord, coord)
nonzero_int = st.integers(-6, 6).filter(bool)


def P(x, y):
    return Point(Fraction(x), Fraction(y))


@pytest.mark.parametrize(
    "pts, expected",
    [
        ([(0, 0), (1, 0), (0, 1)], 1),
        ([(0, 0), (1, 1), (2, 2)], 0),
        ([(0, 0), (0, 1), (1, 0)], -1),
    ],
)
def test_orient_examples(pts, expected):
    assert orient(*(P(*p) for p in pts)) == expected


@given(points, points, points)
def test_orient_antisymmetric_and_cyclic(p, q, r):
    assert orient(p, q, r) == -orient(q, p, r)
    assert orient(p, q, r) == orient(q, r, p)


@given(points, points, points, st.fractions(min_value=Fraction(1, 10), max_value=20))
def test_orient_scale_invariant(p, q, r, k):
    assert orient(p, q, r) == orient(p.scale(k), q.scale(k), r.scale(k))
    # a half turn about the origin keeps orientation
    assert orient(p, q, r) == orient(p.scale(-k), q.scale(-k), r.scale(-k))


@given(points, points, points, points)
def test_orient_translation_invariant(p, q, r, t):
    assert orient(p, q, r) == orient(p + t, q + t, r + t)


def test_float_coordinates_rejected():
    with pytest.raises(InvalidInput):
        rational(0.5)
    assert rational("3/4") == Fraction(3, 4)


@pytest.mark.parametrize(
    "pts, expected",
    [
        ([(0, 0), (2, 0), (1, 1)], True),
        ([(0, 0), (1, 0), (2, 0), (1, 1)], False),
        ([(0, 0), (2, 0), (2, 2), (1, Fraction(1, 2))], False),
        ([(0, 0), (1, 1), (2, 0)], False),
    ],
)
def test_convex_polygon_examples(pts, expected):
    assert is_convex_polygon([P(*p) for p in pts]) is expected


def test_convex_polygon_needs_three_vertices():
    with pytest.raises(InvalidInput):
        is_convex_polygon([P(0, 0), P(1, 0)])


def test_doubly_wound_star_is_not_convex():
    # the pentagram turns left at every vertex but winds twice
    star = [P(0, 10), P(-6, -8), P(10, 3), P(-10, 3), P(6, -8)]
    star = star[::-1] if orient(star[0], star[1], star[2]) < 0 else star
    assert not is_convex_polygon(star)


@pytest.mark.parametrize(
    "dirs, expected",
    [
        ([(1, 0), (0, 1), (-1, -1)], True),
        ([(1, 0), (0, 1), (-1, 0)], False),
        ([(1, 0), (0, 1)], False),
    ],
)
def test_fan_examples(dirs, expected):
    assert directions_form_fan({Direction(*d) for d in dirs}) is expected


def test_fan_errors():
    with pytest.raises(InvalidInput):
        directions_form_fan([])
    with pytest.raises(InvalidInput):
        directions_form_fan([Direction(1, 0), Direction(2, 0), Direction(0, 1)])


def test_direction_is_primitive():
    assert Direction(4, -6) == Direction(2, -3)
    assert Direction(Fraction(1, 2), Fraction(1, 3)) == Direction(3, 2)
    with pytest.raises(InvalidInput):
        Direction(0, 0)


@given(st.lists(st.tuples(nonzero_int, nonzero_int), min_size=1, max_size=6), st.integers(1, 5))
def test_fan_invariant_under_positive_scaling(raw, k):
    dirs = {Direction(x, y) for x, y in raw}
    scaled = {Direction(d.dx * k, d.dy * k) for d in dirs}
    assert scaled == dirs
    assert directions_form_fan(dirs) == directions_form_fan(scaled)


@given(st.lists(st.tuples(nonzero_int, nonzero_int), min_size=3, max_size=8, unique=True))
def test_fan_matches_gap_oracle(raw):
    # oracle: no closed half-plane through the origin contains all the rays
    dirs = {Direction(x, y) for x, y in raw}
    vs = [d.vector() for d in dirs]
    probes = [Point(-v.y, v.x) for v in vs] + [Point(v.y, -v.x) for v in vs]
    in_half_plane = any(all(p.x * v.x + p.y * v.y >= 0 for v in vs) for p in probes)
    assert directions_form_fan(dirs) == (not in_half_plane)


@given(st.lists(st.tuples(nonzero_int, nonzero_int), min_size=1, max_size=8, unique=True))
def test_sort_by_angle_is_a_rotation_order(raw):
    import math

    vs = [Point(x, y) for x, y in raw]
    got = sort_by_angle(vs)
    angles = [math.atan2(float(v.y), float(v.x)) % (2 * math.pi) for v in got]
    assert angles == sorted(angles)

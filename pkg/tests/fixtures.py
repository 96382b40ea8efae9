"""Shared point configurations and curve constructions for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from infrared.geom import Point, dot, rot90
from infrared.sampling import random_config
from infrared.subdivision import PointConfig
from infrared.winding import ClosedPLCurve, on_segment

TRIANGLE = PointConfig.from_coords([(0, 0), (4, 0), (1, 3)])
QUAD = PointConfig.from_coords([(0, 0), (4, 0), (5, 3), (1, 4)])
TRIANGLE_1 = PointConfig.from_coords([(0, 0), (6, 0), (2, 5), (3, 2)])
TRIANGLE_2 = PointConfig.from_coords([(0, 0), (9, 0), (4, 8), (3, 2), (5, 4)])
QUAD_1 = PointConfig.from_coords([(0, 0), (6, 0), (7, 5), (1, 6), (3, 2)])
PENTAGON = PointConfig.from_coords([(0, 0), (5, 0), (7, 4), (3, 7), (-1, 4)])
HEXAGON = PointConfig.from_coords([(0, 0), (4, -1), (7, 2), (6, 6), (2, 7), (-1, 3)])
PENTAGON_1 = PointConfig.from_coords([(0, 0), (8, 0), (10, 6), (4, 10), (-2, 6), (3, 5)])
QUAD_2 = PointConfig.from_coords([(0, 0), (10, 0), (11, 9), (1, 10), (3, 3), (7, 5)])

# two nested triangles; contains the classical non-regular triangulation
NESTED = PointConfig.from_coords([(0, 0), (24, 0), (12, 20), (10, 6), (15, 7), (11, 11)])
NESTED_NONREGULAR = {
    "outer": ["p0", "p1", "p2"],
    "cells": [["p0", "p1", "p4"], ["p0", "p3", "p2"], ["p0", "p4", "p3"], ["p1", "p2", "p5"],
              ["p1", "p5", "p4"], ["p2", "p3", "p5"], ["p3", "p4", "p5"]],
}
# the symmetric nested triangles: lines p0p3, p1p4, p2p5 meet in one point
SYMMETRIC_NESTED = PointConfig.from_coords([(0, 0), (12, 0), (6, 10), (5, 3), (7, 3), (6, 5)])
NESTED_7 = PointConfig.from_coords([(0, 0), (24, 0), (12, 20), (10, 6), (15, 7), (11, 11), (13, 10)])

HAND_MADE = {
    "triangle": TRIANGLE,
    "quad": QUAD,
    "triangle+1": TRIANGLE_1,
    "triangle+2": TRIANGLE_2,
    "quad+1": QUAD_1,
    "pentagon": PENTAGON,
    "hexagon": HEXAGON,
    "pentagon+1": PENTAGON_1,
    "quad+2": QUAD_2,
    "nested": NESTED,
    "nested+1": NESTED_7,
}


def _random_fixtures() -> dict[str, PointConfig]:
    out = {}
    for n, seeds in ((5, range(3)), (6, range(4)), (7, range(4))):
        for seed in seeds:
            out[f"random{n}-{seed}"] = random_config(random.Random(1000 * n + seed), n)
    return out


FIXTURES: dict[str, PointConfig] = {**HAND_MADE, **_random_fixtures()}

for _name, _cfg in FIXTURES.items():
    assert _cfg.general_position and _cfg.strongly_generic, _name


def fixtures_up_to(n: int) -> dict[str, PointConfig]:
    return {k: v for k, v in FIXTURES.items() if len(v.ids) <= n}


# -- moving the origin across a wall ------------------------------------------


def _seg_dist2_bound(p: Point, a: Point, b: Point) -> Fraction:
    """Squared distance from p to segment ab, exactly."""
    d = b - a
    t = dot(p - a, d) / dot(d, d)
    t = min(max(t, Fraction(0)), Fraction(1))
    q = a + d.scale(t)
    return dot(p - q, p - q)


def crossing_pair(curve: ClosedPLCurve, seg: int, on_line: bool) -> tuple[ClosedPLCurve, ClosedPLCurve] | None:
    """Two translates of ``curve`` placing the origin just right and just left of a wall.

    The wall is the interior of segment ``seg`` or, with ``on_line``, a point
    of its prolongation beyond the end vertex. Returns None when that point
    lies on the curve itself.
    """
    segs = list(curve.segments())
    a, b = segs[seg]
    d = b - a
    x = b + d.scale(Fraction(1, 2)) if on_line else a + d.scale(Fraction(1, 3))
    others = [s for i, s in enumerate(segs) if i != seg]
    if on_line:
        others = segs
    if any(on_segment(x, p, q) for p, q in others):
        return None
    gap2 = min(_seg_dist2_bound(x, p, q) for p, q in others)
    normal = rot90(d)
    n2 = dot(normal, normal)
    # step of squared length at most gap2 / 16
    k = Fraction(1)
    while k * k * n2 > gap2 / 16:
        k /= 2
    step = normal.scale(k)
    left, right = x + step, x - step
    # translating the curve by -x puts the origin at x; it sits left of the wall at `left`
    return curve.translate(-right), curve.translate(-left)


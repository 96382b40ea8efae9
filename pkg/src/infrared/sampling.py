"""Seeded generators for curves, bundles and point configurations.

Used by the property sweeps in the command-line tool and by the test suite.
Every generator takes a ``random.Random`` so results are reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .geom import Direction, InvalidInput, Point, sort_by_angle
from .subdivision import PointConfig
from .winding import ClosedPLCurve, EquivariantBundleData, ToricFan, is_formula_generic, line_bundle, on_segment


def random_rational(rng: random.Random, lo: int = -10, hi: int = 10, den: int = 2) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_curve(rng: random.Random, min_segments: int = 5, max_segments: int = 12,
                 bound: int = 10, generic: bool = True) -> ClosedPLCurve:
    """One closed loop avoiding the origin; redrawn until the formula applies if ``generic``."""
    while True:
        n = rng.randint(min_segments, max_segments)
        pts = tuple(Point(random_rational(rng, -bound, bound), random_rational(rng, -bound, bound)) for _ in range(n))
        try:
            curve = ClosedPLCurve((pts,))
        except InvalidInput:
            continue
        if any(on_segment(Point(0, 0), a, b) for a, b in curve.segments()):
            continue
        if generic and not is_formula_generic(curve):
            continue
        return curve


def random_fan(rng: random.Random, min_rays: int = 3, max_rays: int = 6, bound: int = 4) -> ToricFan:
    while True:
        n = rng.randint(min_rays, max_rays)
        dirs = set()
        while len(dirs) < n:
            x, y = rng.randint(-bound, bound), rng.randint(-bound, bound)
            if (x, y) != (0, 0):
                dirs.add(Direction(x, y))
        rays = [Direction.of(v) for v in sort_by_angle(d.vector() for d in dirs)]
        try:
            return ToricFan(tuple(rays))
        except InvalidInput:
            continue


def random_bundle(rng: random.Random, fan: ToricFan, max_rank: int = 2, bound: int = 6) -> EquivariantBundleData:
    """Direct sum of up to ``max_rank`` line bundles with random ray values."""
    parts = [
        line_bundle(fan, [rng.randint(-bound, bound) for _ in fan.rays])
        for _ in range(rng.randint(1, max_rank))
    ]
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


def random_config(rng: random.Random, n: int, bound: int = 20, strongly_generic: bool = True) -> PointConfig:
    """n distinct integer points in general position (and strongly generic by default)."""
    while True:
        coords = {(rng.randint(-bound, bound), rng.randint(-bound, bound)) for _ in range(n)}
        if len(coords) < n:
            continue
        cfg = PointConfig.from_coords(sorted(coords, key=lambda c: (c[0], c[1])))
        if not cfg.general_position:
            continue
        if strongly_generic and not cfg.strongly_generic:
            continue
        return cfg


def x_monotone_paths(config: PointConfig) -> list[list[str]]:
    """All vertex sequences of length >= 2 with strictly increasing x."""
    ids = sorted(config.ids, key=lambda i: (config.pos(i).x, i))
    out = []
    for mask in range(1, 1 << len(ids)):
        chosen = [ids[i] for i in range(len(ids)) if mask >> i & 1]
        if len(chosen) < 2:
            continue
        xs = [config.pos(i).x for i in chosen]
        if all(a < b for a, b in zip(xs, xs[1:])):
            out.append(chosen)
    return sorted(out, key=lambda p: (len(p), p))


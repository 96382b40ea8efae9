"""Winding numbers of closed polygonal 1-cycles and characteristic curves.

Two independent routes to the index of a curve around the origin:

* :func:`winding_oracle` counts signed crossings with a generic ray;
* :func:`winding_formula` evaluates the turning-number identity
  ``index = k - sum(a_i) + sum(b_i)``, where ``a_i`` records whether the
  origin is left of the i-th prolonged segment and ``b_i`` whether it is in
  the left region of the angle formed by segments i and i+1.

Characteristic curves of equivariant bundles over toric domains are built
from per-sector character multisets; the invariant Euler characteristic is
the index of that curve.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .geom import (
    ORIGIN,
    Direction,
    InvalidInput,
    Point,
    _crosses_reference,
    cross,
    directions_form_fan,
    dot,
    rot90,
    rot_minus90,
)


class OnCurve(InvalidInput):
    """The origin lies on the curve."""


class DegenerateTurn(InvalidInput):
    """A loop doubles back on itself (consecutive opposite directions)."""


class NonGeneric(InvalidInput):
    """The origin lies on a prolonged segment, so the formula terms are undefined."""


class InvalidBundle(InvalidInput):
    pass


Loop = tuple[Point, ...]


@dataclass(frozen=True)
class ClosedPLCurve:
    components: tuple[Loop, ...]

    def __post_init__(self):
        comps = tuple(tuple(loop) for loop in self.components)
        for loop in comps:
            if len(loop) < 3:
                raise InvalidInput(f"loop needs at least 3 vertices: {loop}")
            for a, b in _segments(loop):
                if a == b:
                    raise InvalidInput(f"zero-length segment at {a}")
        object.__setattr__(self, "components", comps)

    def __add__(self, other: ClosedPLCurve) -> ClosedPLCurve:
        return ClosedPLCurve(self.components + other.components)

    def translate(self, v: Point) -> ClosedPLCurve:
        return ClosedPLCurve(tuple(tuple(p + v for p in loop) for loop in self.components))

    def segments(self) -> Iterator[tuple[Point, Point]]:
        for loop in self.components:
            yield from _segments(loop)

    def to_json(self) -> dict:
        return {"components": [[p.to_json() for p in loop] for loop in self.components]}

    @classmethod
    def from_json(cls, data: dict) -> ClosedPLCurve:
        return cls(tuple(tuple(Point.from_json(p) for p in loop) for loop in data["components"]))


def _segments(loop: Sequence[Point]) -> Iterator[tuple[Point, Point]]:
    n = len(loop)
    for i in range(n):
        yield loop[i], loop[(i + 1) % n]


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """Is p on the closed segment [a, b]?"""
    if cross(b - a, p - a) != 0:
        return False
    return dot(p - a, p - b) <= 0


# -- oracle -------------------------------------------------------------------


def _scan_parameters() -> Iterator[int]:
    yield 0
    for t in itertools.count(1):
        yield t
        yield -t


def generic_ray(curve: ClosedPLCurve) -> Point:
    """First direction (1, t), t = 0, 1, -1, 2, ... whose line misses every vertex."""
    verts = [p for loop in curve.components for p in loop]
    for t in _scan_parameters():
        d = Point(1, t)
        if all(cross(d, p) != 0 for p in verts):
            return d
    raise AssertionError("unreachable")


def winding_oracle(curve: ClosedPLCurve, perturb: bool = False) -> int:
    """Winding number around the origin by signed crossings of a generic ray."""
    if any(on_segment(ORIGIN, a, b) for a, b in curve.segments()):
        if not perturb:
            raise OnCurve("origin lies on the curve")
        curve = detour_curve(curve)
    d = generic_ray(curve)
    total = 0
    for p, q in curve.segments():
        sp, sq = cross(d, p), cross(d, q)
        if (sp < 0) == (sq < 0):
            continue
        lam = sp / (sp - sq)
        x = p + (q - p).scale(lam)
        if dot(x, d) > 0:
            total += 1 if sp < 0 else -1
    return total


# -- formula ------------------------------------------------------------------


def _directions(loop: Sequence[Point]) -> list[Point]:
    n = len(loop)
    return [loop[(i + 1) % n] - loop[i] for i in range(n)]


def turning_number(loop: Sequence[Point]) -> int:
    """Winding of the tangent direction of a closed polygonal loop."""
    ds = _directions(loop)
    n = len(ds)
    try:
        return sum(_crosses_reference(ds[i], ds[(i + 1) % n]) for i in range(n))
    except InvalidInput as exc:
        raise DegenerateTurn(str(exc)) from None


def merge_collinear(loop: Sequence[Point]) -> Loop:
    """Drop vertices where the loop continues straight on."""
    pts = list(loop)
    changed = True
    while changed and len(pts) > 3:
        changed = False
        n = len(pts)
        for i in range(n):
            a, v, b = pts[i - 1], pts[i], pts[(i + 1) % n]
            if cross(v - a, b - v) == 0 and dot(v - a, b - v) > 0:
                del pts[i]
                changed = True
                break
    return tuple(pts)


@dataclass(frozen=True)
class WindingReport:
    index: int
    turning_number: int
    a_terms: tuple[int, ...]
    b_terms: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "turning_number": self.turning_number,
            "a_terms": list(self.a_terms),
            "b_terms": list(self.b_terms),
        }


def _loop_terms(loop: Loop) -> tuple[int, list[int], list[int]]:
    k = turning_number(loop)
    n = len(loop)
    a_terms = []
    for p, q in _segments(loop):
        side = cross(q - p, ORIGIN - p)
        if side == 0:
            raise NonGeneric(f"origin on the line through {p} and {q}")
        a_terms.append(1 if side > 0 else 0)
    b_terms = []
    for i in range(n):
        d_in = loop[(i + 1) % n] - loop[i]
        d_out = loop[(i + 2) % n] - loop[(i + 1) % n]
        a_in, a_out = a_terms[i], a_terms[(i + 1) % n]
        # left turn: left region is the wedge (both half-planes); right turn: the union
        if cross(d_in, d_out) > 0:
            b_terms.append(a_in & a_out)
        else:
            b_terms.append(a_in | a_out)
    return k, a_terms, b_terms


def winding_formula(curve: ClosedPLCurve) -> WindingReport:
    k_total = 0
    a_all: list[int] = []
    b_all: list[int] = []
    for loop in curve.components:
        k, a_terms, b_terms = _loop_terms(merge_collinear(loop))
        k_total += k
        a_all += a_terms
        b_all += b_terms
    return WindingReport(k_total - sum(a_all) + sum(b_all), k_total, tuple(a_all), tuple(b_all))


def is_formula_generic(curve: ClosedPLCurve) -> bool:
    try:
        winding_formula(curve)
    except InvalidInput:
        return False
    return True


# -- going around the origin --------------------------------------------------


def _ccw_arc(n_from: Point, n_to: Point) -> list[Point]:
    """Directions strictly between n_from and n_to, stepping counterclockwise by quarter turns."""
    out = []
    cur = n_from
    while True:
        c, d = cross(cur, n_to), dot(cur, n_to)
        if (c == 0 and d > 0) or (c > 0 and d >= 0):
            return out
        cur = rot90(cur)
        out.append(cur)


def _epsilon(points: Sequence[Point], normals: Sequence[Point]) -> Fraction:
    big = max([abs(c) for p in points for c in (p.x, p.y)] + [Fraction(1)])
    den = max([c.denominator for p in points for c in (p.x, p.y)] + [1])
    nmax = max([abs(v.x) + abs(v.y) for v in normals] + [Fraction(1)])
    D = 2 * math.ceil(big) * den * math.ceil(nmax) + 1
    return Fraction(1, 2 * D)


def detour_loop(loop: Sequence[Point], fallback: Sequence[Point | None] | None = None) -> tuple[Loop, bool]:
    """Reroute every segment through the origin so the origin ends up on its left.

    A segment ``a -> b`` through the origin is replaced by ``a -> eps*n -> b``
    where ``n`` is its right normal; where the loop has a vertex at the origin
    the two detour points are joined by a counterclockwise arc. Zero-length
    segments at the origin take their direction from ``fallback``. Returns the
    new vertex list and whether a vertex sat exactly on the origin.
    """
    n = len(loop)
    segs = [(loop[i], loop[(i + 1) % n]) for i in range(n)]
    touches = [on_segment(ORIGIN, a, b) for a, b in segs]
    if not any(touches):
        return tuple(loop), False
    normals: list[Point | None] = []
    for i, (a, b) in enumerate(segs):
        if not touches[i]:
            normals.append(None)
            continue
        u = b - a
        if u.is_zero():
            u = fallback[i] if fallback else None
            if u is None:
                raise OnCurve("zero-length segment at the origin without a direction")
        normals.append(rot_minus90(u))
    eps = _epsilon(loop, [v for v in normals if v is not None])
    out: list[Point] = []
    vertex_hit = False
    for i, (a, b) in enumerate(segs):
        if a.is_zero():
            vertex_hit = True
            prev = normals[i - 1]
            for v in _ccw_arc(prev, normals[i]):
                out.append(v.scale(eps))
        else:
            out.append(a)
        if touches[i]:
            out.append(normals[i].scale(eps))
    return _dedupe(out), vertex_hit


def _dedupe(pts: Sequence[Point]) -> Loop:
    out: list[Point] = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return tuple(out)


def detour_curve(curve: ClosedPLCurve) -> ClosedPLCurve:
    return ClosedPLCurve(tuple(detour_loop(loop)[0] for loop in curve.components))


# -- toric data ---------------------------------------------------------------


@dataclass(frozen=True)
class ToricFan:
    """Rays listed counterclockwise; sector i lies between rays i and i+1."""

    rays: tuple[Direction, ...]

    def __post_init__(self):
        rays = tuple(self.rays)
        object.__setattr__(self, "rays", rays)
        if len(set(rays)) != len(rays) or not directions_form_fan(rays):
            raise InvalidInput(f"rays do not form a fan: {rays}")
        n = len(rays)
        if any(cross(rays[i].vector(), rays[(i + 1) % n].vector()) <= 0 for i in range(n)):
            raise InvalidInput("fan rays must be listed in counterclockwise order")


@dataclass(frozen=True)
class EquivariantBundleData:
    fan: ToricFan
    characters: tuple[tuple[Point, ...], ...]

    def __post_init__(self):
        chars = tuple(tuple(s) for s in self.characters)
        object.__setattr__(self, "characters", chars)
        n = len(self.fan.rays)
        if len(chars) != n:
            raise InvalidBundle(f"expected {n} sectors, got {len(chars)}")
        ranks = {len(s) for s in chars}
        if len(ranks) != 1:
            raise InvalidBundle(f"sectors have different ranks: {sorted(ranks)}")
        for i in range(n):
            r = self.fan.rays[(i + 1) % n].vector()
            left = sorted(dot(p, r) for p in chars[i])
            right = sorted(dot(p, r) for p in chars[(i + 1) % n])
            if left != right:
                raise InvalidBundle(
                    f"sectors {i} and {(i + 1) % n} disagree on ray {self.fan.rays[(i + 1) % n].to_json()}"
                )

    @property
    def rank(self) -> int:
        return len(self.characters[0])

    def __add__(self, other: EquivariantBundleData) -> EquivariantBundleData:
        if other.fan != self.fan:
            raise InvalidBundle("direct sum needs a common fan")
        return EquivariantBundleData(self.fan, tuple(a + b for a, b in zip(self.characters, other.characters)))

    def to_json(self) -> dict:
        return {
            "fan": [r.to_json() for r in self.fan.rays],
            "characters": [[p.to_json() for p in s] for s in self.characters],
        }

    @classmethod
    def from_json(cls, data: dict) -> EquivariantBundleData:
        fan = ToricFan(tuple(Direction(*d) for d in data["fan"]))
        return cls(fan, tuple(tuple(Point.from_json(p) for p in s) for s in data["characters"]))


def line_bundle(fan: ToricFan, values: Sequence) -> EquivariantBundleData:
    """Rank-1 data whose character on sector i pairs to values[i], values[i+1] with its bounding rays."""
    n = len(fan.rays)
    chars = []
    for i in range(n):
        r1, r2 = fan.rays[i].vector(), fan.rays[(i + 1) % n].vector()
        m1, m2 = Fraction(values[i]), Fraction(values[(i + 1) % n])
        det = cross(r1, r2)
        chars.append((Point((m1 * r2.y - m2 * r1.y) / det, (r1.x * m2 - r2.x * m1) / det),))
    return EquivariantBundleData(fan, tuple(chars))


@dataclass
class CharacteristicCurve:
    curve: ClosedPLCurve
    notes: list[str] = field(default_factory=list)


def _strand_matchings(bundle: EquivariantBundleData) -> list[list[int]]:
    """perm[i][j] = index in sector i+1 matched to character j of sector i."""
    n, k = len(bundle.fan.rays), bundle.rank
    perms = []
    for i in range(n):
        r = bundle.fan.rays[(i + 1) % n].vector()
        here = sorted(range(k), key=lambda j: (dot(bundle.characters[i][j], r), j))
        there = sorted(range(k), key=lambda j: (dot(bundle.characters[(i + 1) % n][j], r), j))
        perm = [0] * k
        for a, b in zip(here, there):
            perm[a] = b
        perms.append(perm)
    return perms


def build_characteristic_curve(bundle: EquivariantBundleData) -> CharacteristicCurve:
    n, k = len(bundle.fan.rays), bundle.rank
    perms = _strand_matchings(bundle)
    seen: set[int] = set()
    loops: list[Loop] = []
    notes: list[str] = []
    for start in range(k):
        if start in seen:
            continue
        pts: list[Point] = []
        fallback: list[Point] = []
        j = start
        while True:
            seen.add(j)
            for i in range(n):
                pts.append(bundle.characters[i][j])
                # the strand leaving sector i crosses ray i+1 moving counterclockwise
                fallback.append(rot90(bundle.fan.rays[(i + 1) % n].vector()))
                j = perms[i][j]
            if j == start:
                break
        loop, vertex_hit = detour_loop(pts, fallback)
        if vertex_hit:
            notes.append(f"strand starting at character {start} of sector 0 has a vertex at the origin")
        loop = _dedupe(loop)
        if len(loop) >= 3:
            loops.append(loop)
        else:
            notes.append(f"strand starting at character {start} of sector 0 is degenerate and dropped")
    return CharacteristicCurve(ClosedPLCurve(tuple(loops)), notes)


def characteristic_curve(bundle: EquivariantBundleData) -> ClosedPLCurve:
    return build_characteristic_curve(bundle).curve


def invariant_euler_characteristic(bundle: EquivariantBundleData) -> int:
    curve = characteristic_curve(bundle)
    chi = winding_oracle(curve)
    if is_formula_generic(curve):
        via_formula = winding_formula(curve).index
        if via_formula != chi:
            raise AssertionError(f"oracle {chi} and formula {via_formula} disagree on {curve}")
    return chi

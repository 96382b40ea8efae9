"""Exact rational plane geometry.

Every coordinate is a :class:`fractions.Fraction`; predicates return exact
signs, so nothing downstream ever needs a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import gcd
from typing import Iterable, Sequence, Union

RationalLike = Union[Fraction, int, str]


class InvalidInput(ValueError):
    """Raised when an operation receives structurally invalid data."""


def rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to a Fraction. Floats are rejected to keep things exact."""
    if isinstance(value, float):
        raise InvalidInput(f"refusing float coordinate {value!r}; use 'a/b' strings")
    if isinstance(value, str):
        value = value.strip()
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True, slots=True)
class Point:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", rational(self.x))
        object.__setattr__(self, "y", rational(self.y))

    def __add__(self, other: Point) -> Point:
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point) -> Point:
        return Point(self.x - other.x, self.y - other.y)

    def __neg__(self) -> Point:
        return Point(-self.x, -self.y)

    def scale(self, k: RationalLike) -> Point:
        k = rational(k)
        return Point(self.x * k, self.y * k)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def to_json(self) -> dict:
        return {"x": format_rational(self.x), "y": format_rational(self.y)}

    @classmethod
    def from_json(cls, data) -> Point:
        if isinstance(data, dict):
            return cls(rational(data["x"]), rational(data["y"]))
        x, y = data
        return cls(rational(x), rational(y))


ORIGIN = Point(0, 0)


def cross(u: Point, v: Point) -> Fraction:
    return u.x * v.y - u.y * v.x


def dot(u: Point, v: Point) -> Fraction:
    return u.x * v.x + u.y * v.y


def sign(q) -> int:
    return (q > 0) - (q < 0)


def rot90(v: Point) -> Point:
    """Rotate counterclockwise by a quarter turn."""
    return Point(-v.y, v.x)


def rot_minus90(v: Point) -> Point:
    """Rotate clockwise by a quarter turn (the right normal of ``v``)."""
    return Point(v.y, -v.x)


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of (q - p) x (r - p); +1 for a counterclockwise turn."""
    return sign((q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x))


def is_convex_polygon(vertices: Sequence[Point]) -> bool:
    """True iff the cyclic vertex list is a strictly convex counterclockwise polygon."""
    n = len(vertices)
    if n < 3:
        raise InvalidInput(f"a polygon needs at least 3 vertices, got {n}")
    if len(set(vertices)) != n:
        return False
    for i in range(n):
        if orient(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]) != 1:
            return False
    # Locally convex with every turn left can still wind more than once.
    total = 0
    for i in range(n):
        a = vertices[(i + 1) % n] - vertices[i]
        b = vertices[(i + 2) % n] - vertices[(i + 1) % n]
        total += _crosses_reference(a, b)
    return total == 1


def polygon_area2(vertices: Sequence[Point]) -> Fraction:
    """Twice the signed area (positive for counterclockwise)."""
    n = len(vertices)
    return sum((cross(vertices[i], vertices[(i + 1) % n]) for i in range(n)), Fraction(0))


def point_strictly_inside(p: Point, polygon: Sequence[Point]) -> bool:
    """Strict interior test for a counterclockwise convex polygon."""
    n = len(polygon)
    return all(orient(polygon[i], polygon[(i + 1) % n], p) == 1 for i in range(n))


def point_in_closed(p: Point, polygon: Sequence[Point]) -> bool:
    """Closed containment test for a counterclockwise convex polygon."""
    n = len(polygon)
    return all(orient(polygon[i], polygon[(i + 1) % n], p) >= 0 for i in range(n))


def interiors_disjoint(P: Sequence[Point], Q: Sequence[Point]) -> bool:
    """Separating-axis test for two counterclockwise convex polygons."""
    for A, B in ((P, Q), (Q, P)):
        n = len(A)
        for i in range(n):
            a, b = A[i], A[(i + 1) % n]
            if all(orient(a, b, q) <= 0 for q in B):
                return True
    return False


# -- directions ---------------------------------------------------------------


@dataclass(frozen=True, slots=True, order=True)
class Direction:
    """A ray direction, stored as a primitive integer vector."""

    dx: int
    dy: int

    def __post_init__(self):
        dx, dy = rational(self.dx), rational(self.dy)
        if dx == 0 and dy == 0:
            raise InvalidInput("direction must be nonzero")
        den = dx.denominator * dy.denominator // gcd(dx.denominator, dy.denominator)
        ix, iy = int(dx * den), int(dy * den)
        g = gcd(ix, iy)
        object.__setattr__(self, "dx", ix // g)
        object.__setattr__(self, "dy", iy // g)

    @classmethod
    def of(cls, v: Point) -> Direction:
        return cls(v.x, v.y)

    def vector(self) -> Point:
        return Point(self.dx, self.dy)

    def __neg__(self) -> Direction:
        return Direction(-self.dx, -self.dy)

    def to_json(self) -> list:
        return [self.dx, self.dy]


def _half(v: Point) -> int:
    """0 for angles in [0, pi), 1 for [pi, 2pi)."""
    return 0 if (v.y > 0 or (v.y == 0 and v.x > 0)) else 1


def angle_less(u: Point, v: Point) -> bool:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu < hv
    return cross(u, v) > 0


def sort_by_angle(vectors: Iterable[Point]) -> list[Point]:
    def cmp(u, v):
        if angle_less(u, v):
            return -1
        if angle_less(v, u):
            return 1
        return 0

    return sorted(vectors, key=cmp_to_key(cmp))


def directions_form_fan(dirs: Iterable[Direction]) -> bool:
    """Do the rays cut the plane into angles that are each strictly less than pi?"""
    dirs = list(dirs)
    if not dirs:
        raise InvalidInput("empty direction set")
    if len(set(dirs)) != len(dirs):
        raise InvalidInput("directions must be pairwise non-equivalent")
    if len(dirs) < 3:
        return False
    vs = sort_by_angle(d.vector() for d in dirs)
    n = len(vs)
    return all(cross(vs[i], vs[(i + 1) % n]) > 0 for i in range(n))


def _crosses_reference(a: Point, b: Point, ref: Point = Point(1, 0)) -> int:
    """Signed count of passes over ``ref`` when turning from ``a`` to ``b`` the short way.

    Counterclockwise turns count ``ref`` in the half-open arc (a, b]; clockwise
    turns uncount it on (b, a]. Raises on a reversal.
    """
    c = cross(a, b)
    if c == 0:
        if dot(a, b) < 0:
            raise InvalidInput("reversal: consecutive directions are opposite")
        return 0
    if c > 0:
        return 1 if _in_ccw_arc(ref, a, b) else 0
    return -1 if _in_ccw_arc(ref, b, a) else 0


def _in_ccw_arc(r: Point, a: Point, b: Point) -> bool:
    """Is r in the half-open arc (a, b], which is shorter than pi?"""
    if cross(a, r) <= 0:
        return False
    cb = cross(r, b)
    if cb > 0:
        return True
    return cb == 0 and dot(r, b) > 0

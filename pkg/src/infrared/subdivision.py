"""Point configurations, convex subdivisions and their admissibility.

A subdivision is admissible (regular) when some concave piecewise-linear
function on the outer polygon has exactly the given cells as its domains of
linearity. Deciding that is an exact strict-feasibility problem in the
heights, solved with :mod:`infrared.linalg`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from . import linalg
from .geom import (
    InvalidInput,
    Point,
    cross,
    interiors_disjoint,
    is_convex_polygon,
    orient,
    point_in_closed,
    point_strictly_inside,
    polygon_area2,
)


class GeneralPositionError(InvalidInput):
    """Three points of the configuration are collinear."""


class InvalidSubdivision(InvalidInput):
    pass


@dataclass(frozen=True)
class PointConfig:
    points: tuple[tuple[str, Point], ...]

    def __post_init__(self):
        pts = tuple((str(i), p) for i, p in self.points)
        object.__setattr__(self, "points", pts)
        ids = [i for i, _ in pts]
        if len(set(ids)) != len(ids):
            raise InvalidInput(f"duplicate point ids in {ids}")
        if len({p for _, p in pts}) != len(pts):
            raise InvalidInput("point positions must be pairwise distinct")
        object.__setattr__(self, "_pos", dict(pts))

    @classmethod
    def from_coords(cls, coords: Iterable, prefix: str = "p") -> PointConfig:
        return cls(tuple((f"{prefix}{i}", Point(*xy)) for i, xy in enumerate(coords)))

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(i for i, _ in self.points)

    def pos(self, pid: str) -> Point:
        try:
            return self._pos[pid]
        except KeyError:
            raise InvalidInput(f"unknown point id {pid!r}") from None

    def positions(self, ids: Sequence[str]) -> list[Point]:
        return [self.pos(i) for i in ids]

    def collinear_triple(self) -> tuple[str, str, str] | None:
        for (a, p), (b, q), (c, r) in itertools.combinations(self.points, 3):
            if orient(p, q, r) == 0:
                return a, b, c
        return None

    @property
    def general_position(self) -> bool:
        return self.collinear_triple() is None

    def concurrent_lines(self) -> tuple[tuple[str, str], ...] | None:
        """Three lines through pairwise disjoint point pairs that meet in one point, if any."""
        pairs = list(itertools.combinations(self.points, 2))
        for trio in itertools.combinations(pairs, 3):
            ids = [i for pair in trio for i, _ in pair]
            if len(set(ids)) < 6:
                continue
            (_, a), (_, b) = trio[0]
            (_, c), (_, d) = trio[1]
            (_, e), (_, f) = trio[2]
            hit = _line_intersection(a, b, c, d)
            if hit is not None and orient(e, f, hit) == 0:
                return tuple((x[0], y[0]) for x, y in trio)
        return None

    @property
    def strongly_generic(self) -> bool:
        """No three collinear points and no three concurrent lines through disjoint pairs."""
        return self.general_position and self.concurrent_lines() is None

    def require_general_position(self) -> None:
        bad = self.collinear_triple()
        if bad is not None:
            raise GeneralPositionError(f"points {', '.join(bad)} are collinear")

    def to_json(self) -> dict:
        return {"points": [{"id": i, **p.to_json()} for i, p in self.points]}

    @classmethod
    def from_json(cls, data: dict) -> PointConfig:
        return cls(tuple((d["id"], Point.from_json(d)) for d in data["points"]))


def _line_intersection(a: Point, b: Point, c: Point, d: Point) -> Point | None:
    den = cross(b - a, d - c)
    if den == 0:
        return None
    t = cross(c - a, d - c) / den
    return a + (b - a).scale(t)


def _rotate_min(ids: Sequence[str]) -> tuple[str, ...]:
    k = min(range(len(ids)), key=lambda i: ids[i])
    return tuple(ids[k:]) + tuple(ids[:k])


@dataclass(frozen=True, order=True)
class Cell:
    """Counterclockwise vertex ids, rotated so the smallest id comes first."""

    vertex_ids: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertex_ids", _rotate_min(tuple(self.vertex_ids)))

    def __len__(self) -> int:
        return len(self.vertex_ids)

    def edges(self) -> list[tuple[str, str]]:
        v = self.vertex_ids
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def key(self) -> tuple[str, ...]:
        return tuple(sorted(self.vertex_ids))


def make_cell(config: PointConfig, ids: Iterable[str]) -> Cell:
    """Order ``ids`` counterclockwise; they must be in strictly convex position."""
    ids = list(ids)
    hull = convex_hull(config, ids)
    if len(hull) != len(ids):
        raise InvalidInput(f"points {ids} are not in strictly convex position")
    return Cell(tuple(hull))


def convex_hull(config: PointConfig, ids: Sequence[str]) -> list[str]:
    """Strict convex hull vertices, counterclockwise (monotone chain)."""
    pts = sorted(ids, key=lambda i: (config.pos(i).x, config.pos(i).y))
    if len(pts) < 3:
        return pts

    def half(seq):
        out: list[str] = []
        for i in seq:
            while len(out) >= 2 and orient(config.pos(out[-2]), config.pos(out[-1]), config.pos(i)) <= 0:
                out.pop()
            out.append(i)
        return out

    lower, upper = half(pts), half(reversed(pts))
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class Subdivision:
    outer: Cell
    cells: tuple[Cell, ...]

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(sorted(self.cells, key=Cell.key)))

    @property
    def k(self) -> int:
        return len(self.cells)

    def internal_edges(self) -> list[tuple[str, str]]:
        """Undirected internal edges as sorted id pairs, in canonical order."""
        boundary = {frozenset(e) for e in self.outer.edges()}
        seen = {frozenset(e) for c in self.cells for e in c.edges()}
        return sorted(tuple(sorted(e)) for e in seen - boundary)

    @property
    def s(self) -> int:
        return len(self.internal_edges())

    def used_ids(self) -> set[str]:
        return {v for c in self.cells for v in c.vertex_ids}

    def is_trivial(self) -> bool:
        return self.k == 1

    def to_json(self) -> dict:
        return {"outer": list(self.outer.vertex_ids), "cells": [list(c.vertex_ids) for c in self.cells]}

    @classmethod
    def from_json(cls, data: dict, config: PointConfig | None = None) -> Subdivision:
        if config is not None:
            return cls(make_cell(config, data["outer"]), tuple(make_cell(config, c) for c in data["cells"]))
        return cls(Cell(tuple(data["outer"])), tuple(Cell(tuple(c)) for c in data["cells"]))


def trivial_subdivision(outer: Cell) -> Subdivision:
    return Subdivision(outer, (outer,))


def validate_subdivision(sub: Subdivision, config: PointConfig) -> None:
    """Check that the cells tile the outer polygon exactly."""
    for c in (sub.outer, *sub.cells):
        if len(c) < 3 or not is_convex_polygon(config.positions(c.vertex_ids)):
            raise InvalidSubdivision(f"cell {c.vertex_ids} is not a strictly convex counterclockwise polygon")
    outer_pts = config.positions(sub.outer.vertex_ids)
    for c in sub.cells:
        if not all(point_in_closed(p, outer_pts) for p in config.positions(c.vertex_ids)):
            raise InvalidSubdivision(f"cell {c.vertex_ids} leaves the outer polygon")
    area = sum((polygon_area2(config.positions(c.vertex_ids)) for c in sub.cells), Fraction(0))
    if area != polygon_area2(outer_pts):
        raise InvalidSubdivision("cell areas do not add up to the outer area")
    directed: dict[tuple[str, str], int] = {}
    for c in sub.cells:
        for e in c.edges():
            if e in directed:
                raise InvalidSubdivision(f"edge {e} used twice with the same orientation")
            directed[e] = 1
    boundary = set(sub.outer.edges())
    for (u, v) in directed:
        if (u, v) in boundary:
            continue
        if (v, u) not in directed:
            raise InvalidSubdivision(f"edge {(u, v)} is neither on the boundary nor shared")
    if not boundary <= set(directed):
        raise InvalidSubdivision("outer boundary edges are not all covered by cells")


# -- enumeration --------------------------------------------------------------


@lru_cache(maxsize=None)
def _all_cells(config: PointConfig) -> tuple[Cell, ...]:
    config.require_general_position()
    out = []
    ids = config.ids
    for r in range(3, len(ids) + 1):
        for subset in itertools.combinations(ids, r):
            hull = convex_hull(config, subset)
            if len(hull) == r:
                out.append(Cell(tuple(hull)))
    return tuple(sorted(out, key=lambda c: (len(c), c.key())))


def is_empty_cell(config: PointConfig, cell: Cell) -> bool:
    poly = config.positions(cell.vertex_ids)
    used = set(cell.vertex_ids)
    return not any(point_strictly_inside(p, poly) for i, p in config.points if i not in used)


def enumerate_cells(config: PointConfig, empty_only: bool = False) -> list[Cell]:
    """All strictly convex polygons with vertices in the configuration."""
    cells = _all_cells(config)
    if empty_only:
        return [c for c in cells if is_empty_cell(config, c)]
    return list(cells)


def cells_inside(config: PointConfig, outer: Cell) -> list[Cell]:
    poly = config.positions(outer.vertex_ids)
    return [c for c in _all_cells(config) if all(point_in_closed(p, poly) for p in config.positions(c.vertex_ids))]


@lru_cache(maxsize=None)
def _subdivisions(config: PointConfig, outer: Cell) -> tuple[Subdivision, ...]:
    candidates = cells_inside(config, outer)
    if outer not in candidates:
        raise InvalidInput(f"outer {outer.vertex_ids} is not a cell of the configuration")
    by_edge: dict[tuple[str, str], list[Cell]] = {}
    for c in candidates:
        for e in c.edges():
            by_edge.setdefault(e, []).append(c)
    polys = {c: config.positions(c.vertex_ids) for c in candidates}
    results: list[Subdivision] = []

    def place(frontier: frozenset, placed: list[Cell]):
        if not frontier:
            results.append(Subdivision(outer, tuple(placed)))
            return
        edge = min(frontier)
        for c in by_edge.get(edge, ()):
            if any(not interiors_disjoint(polys[c], polys[d]) for d in placed):
                continue
            nxt = set(frontier)
            ok = True
            for u, v in c.edges():
                if (u, v) in nxt:
                    nxt.remove((u, v))
                elif (v, u) in nxt:
                    ok = False  # another placed cell already sits on this side
                    break
                else:
                    nxt.add((v, u))
            if ok:
                place(frozenset(nxt), placed + [c])

    place(frozenset(outer.edges()), [])
    results.sort(key=lambda s: [c.key() for c in s.cells])
    return tuple(results)


def enumerate_subdivisions(config: PointConfig, outer: Cell, include_trivial: bool = False) -> list[Subdivision]:
    """All subdivisions of ``outer`` into cells of the configuration, in canonical order."""
    config.require_general_position()
    subs = list(_subdivisions(config, outer))
    if include_trivial:
        return subs
    return [s for s in subs if not s.is_trivial()]


# -- admissibility ------------------------------------------------------------


def _barycentric(q: Point, a: Point, b: Point, c: Point) -> tuple[Fraction, Fraction, Fraction]:
    det = cross(b - a, c - a)
    s = cross(q - a, c - a) / det
    t = cross(b - a, q - a) / det
    return 1 - s - t, s, t


def _affine_row(cell: Cell, q: Point, config: PointConfig, index: dict[str, int], n: int) -> list[Fraction]:
    """Coefficients (in the heights) of the cell's affine function evaluated at q."""
    a, b, c = cell.vertex_ids[:3]
    lam = _barycentric(q, config.pos(a), config.pos(b), config.pos(c))
    row = [Fraction(0)] * n
    for vid, l in zip((a, b, c), lam):
        row[index[vid]] += l
    return row


def _height_system(sub: Subdivision, config: PointConfig):
    outer_poly = config.positions(sub.outer.vertex_ids)
    used = sub.used_ids()
    unused = [i for i, p in config.points if i not in used and point_strictly_inside(p, outer_poly)]
    var_ids = sorted(used) + unused
    index = {v: j for j, v in enumerate(var_ids)}
    n = len(var_ids)
    eqs: list[list[Fraction]] = []
    for cell in sub.cells:
        for vid in cell.vertex_ids[3:]:
            row = _affine_row(cell, config.pos(vid), config, index, n)
            row[index[vid]] -= 1
            eqs.append(row)
    strict: list[list[Fraction]] = []
    owner: dict[tuple[str, str], Cell] = {}
    for cell in sub.cells:
        for e in cell.edges():
            owner[e] = cell
    for u, v in sub.internal_edges():
        c1, c2 = owner[(u, v)], owner[(v, u)]
        far = next(x for x in c2.vertex_ids if x not in (u, v))
        row = _affine_row(c1, config.pos(far), config, index, n)
        row[index[far]] -= 1
        strict.append(row)
    polys = [(c, config.positions(c.vertex_ids)) for c in sub.cells]
    for pid in unused:
        p = config.pos(pid)
        cell = next(c for c, poly in polys if point_strictly_inside(p, poly))
        row = _affine_row(cell, p, config, index, n)
        row[index[pid]] -= 1
        strict.append(row)
    return var_ids, eqs, strict


def admissibility_witness(sub: Subdivision, config: PointConfig) -> dict[str, Fraction] | None:
    """Heights of a strictly concave lift inducing ``sub``, or None if there is none."""
    var_ids, eqs, strict = _height_system(sub, config)
    n = len(var_ids)
    basis = linalg.nullspace(eqs, n) if eqs else [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    G = linalg.restrict(strict, basis)
    z = linalg.strict_solution(G, len(basis))
    if z is None:
        return None
    heights = [sum((zj * v[i] for zj, v in zip(z, basis)), Fraction(0)) for i in range(n)]
    return dict(zip(var_ids, heights))


def is_admissible(sub: Subdivision, config: PointConfig) -> bool:
    return _admissible_cached(sub, config)


@lru_cache(maxsize=None)
def _admissible_cached(sub: Subdivision, config: PointConfig) -> bool:
    return admissibility_witness(sub, config) is not None


def check_heights(sub: Subdivision, config: PointConfig, heights: dict[str, Fraction]) -> bool:
    """Independent verification that ``heights`` induce ``sub`` as a concave lift."""
    var_ids, eqs, strict = _height_system(sub, config)
    h = [heights[v] for v in var_ids]
    return all(v == 0 for v in linalg.apply(eqs, h)) and all(v > 0 for v in linalg.apply(strict, h))


def expected_codimension(sub: Subdivision) -> int:
    return 2 * sub.k - sub.s - 2


# -- coarsening order ---------------------------------------------------------


def refines(fine: Subdivision, coarse: Subdivision, config: PointConfig) -> bool:
    """Is every cell of ``fine`` contained in some cell of ``coarse``?"""
    if fine.outer != coarse.outer:
        return False
    polys = [config.positions(c.vertex_ids) for c in coarse.cells]
    for c in fine.cells:
        pts = config.positions(c.vertex_ids)
        if not any(all(point_in_closed(p, poly) for p in pts) for poly in polys):
            return False
    return True


def coarsenings(sub: Subdivision, config: PointConfig) -> list[Subdivision]:
    """Minimal proper coarsenings of ``sub`` (nothing strictly in between)."""
    config.require_general_position()
    coarser = [
        s for s in enumerate_subdivisions(config, sub.outer, include_trivial=True)
        if s != sub and refines(sub, s, config)
    ]
    return [
        s for s in coarser
        if not any(t != s and refines(t, s, config) for t in coarser)
    ]

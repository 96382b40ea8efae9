"""Graphs with directions, their realization cones, and duality with subdivisions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from . import linalg
from .geom import Direction, InvalidInput, Point, cross, directions_form_fan, dot, rot_minus90
from .subdivision import (
    Cell,
    PointConfig,
    Subdivision,
    admissibility_witness,
    enumerate_cells,
    enumerate_subdivisions,
    expected_codimension,
    is_admissible,
)

INF = "INF"


class InvalidGraph(InvalidInput):
    pass


@dataclass(frozen=True, order=True)
class Edge:
    a: str
    b: str
    direction: Direction

    def reversed(self) -> Edge:
        return Edge(self.b, self.a, -self.direction)

    def is_internal(self) -> bool:
        return self.a != INF and self.b != INF

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "dir": self.direction.to_json()}


@dataclass(frozen=True)
class DirectionGraph:
    finite_vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        verts = tuple(self.finite_vertices)
        edges = tuple(self.edges)
        object.__setattr__(self, "finite_vertices", verts)
        object.__setattr__(self, "edges", edges)
        if INF in verts or len(set(verts)) != len(verts):
            raise InvalidGraph(f"bad vertex list {verts}")
        known = set(verts) | {INF}
        for e in edges:
            if e.a not in known or e.b not in known:
                raise InvalidGraph(f"edge {e.to_json()} has an unknown endpoint")
            if e.a == e.b:
                raise InvalidGraph(f"loop edge at {e.a}")

    @property
    def v(self) -> int:
        return len(self.finite_vertices)

    @property
    def e(self) -> int:
        return sum(1 for x in self.edges if x.is_internal())

    def internal_edges(self) -> list[Edge]:
        return [x for x in self.edges if x.is_internal()]

    def outgoing(self, vertex: str) -> list[Direction]:
        out = []
        for x in self.edges:
            if x.a == vertex:
                out.append(x.direction)
            elif x.b == vertex:
                out.append(-x.direction)
        return out

    def fan_violations(self) -> list[str]:
        """Vertices (INF included) whose outgoing directions fail to form a fan."""
        bad = []
        for vertex in (*self.finite_vertices, INF):
            dirs = self.outgoing(vertex)
            if vertex == INF and not dirs:
                continue
            if len(set(dirs)) != len(dirs) or not dirs or not directions_form_fan(set(dirs)):
                bad.append(vertex)
        return bad

    def validate(self) -> None:
        bad = self.fan_violations()
        if bad:
            raise InvalidGraph(f"outgoing directions do not form a fan at {bad}")

    def reverse_all(self) -> DirectionGraph:
        return DirectionGraph(self.finite_vertices, tuple(e.reversed() for e in self.edges))

    def canonical(self) -> tuple:
        """Orientation-independent fingerprint: each edge stored with a < b."""
        norm = []
        for e in self.edges:
            norm.append(e if (e.a, e.b) <= (e.b, e.a) else e.reversed())
        return tuple(sorted(self.finite_vertices)), tuple(sorted(norm))

    def to_json(self) -> dict:
        return {"vertices": list(self.finite_vertices), "edges": [e.to_json() for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> DirectionGraph:
        return cls(
            tuple(data["vertices"]),
            tuple(Edge(e["a"], e["b"], Direction(*e["dir"])) for e in data["edges"]),
        )


@dataclass(frozen=True)
class Web:
    graph: DirectionGraph
    positions: dict

    def is_valid(self) -> bool:
        for e in self.graph.internal_edges():
            step = self.positions[e.b] - self.positions[e.a]
            d = e.direction.vector()
            if cross(step, d) != 0 or dot(step, d) <= 0:
                return False
        return True

    def to_json(self) -> dict:
        return {"positions": {k: self.positions[k].to_json() for k in self.graph.finite_vertices}}


@dataclass(frozen=True)
class Realization:
    realizable: bool
    dimension: int
    witness: Web | None


def _components(vertices: Iterable[str], edges: Iterable[tuple[str, str]]) -> list[list[str]]:
    parent = {x: x for x in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[str, list[str]] = {}
    for x in parent:
        groups.setdefault(find(x), []).append(x)
    return [groups[k] for k in sorted(groups)]


def _cone_system(graph: DirectionGraph):
    """Equalities and strict rows in the free coordinates; one pinned vertex per component."""
    comps = _components(graph.finite_vertices, [(e.a, e.b) for e in graph.internal_edges()])
    pinned = {c[0] for c in comps}
    free = [x for x in graph.finite_vertices if x not in pinned]
    col = {x: 2 * i for i, x in enumerate(free)}
    n = 2 * len(free)
    eqs, strict = [], []
    for e in graph.internal_edges():
        dx, dy = e.direction.dx, e.direction.dy
        eq = [Fraction(0)] * n
        ineq = [Fraction(0)] * n
        for vid, s in ((e.b, 1), (e.a, -1)):
            if vid in col:
                j = col[vid]
                eq[j] += s * dy
                eq[j + 1] -= s * dx
                ineq[j] += s * dx
                ineq[j + 1] += s * dy
        eqs.append(eq)
        strict.append(ineq)
    return free, n, eqs, strict


def realization_cone_solve(graph: DirectionGraph) -> Realization:
    free, n, eqs, strict = _cone_system(graph)
    basis = linalg.nullspace(eqs, n) if eqs else [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    G = linalg.restrict(strict, basis)
    z = linalg.strict_solution(G, len(basis))
    if z is not None:
        coords = [sum((zj * v[i] for zj, v in zip(z, basis)), Fraction(0)) for i in range(n)]
        pos = {x: Point(0, 0) for x in graph.finite_vertices}
        for i, x in enumerate(free):
            pos[x] = Point(coords[2 * i], coords[2 * i + 1])
        web = Web(graph, pos)
        assert web.is_valid()
        return Realization(True, len(basis), web)
    implicit, _ = linalg.implicit_equalities(G, len(basis))
    forced = [G[i] for i in sorted(implicit)]
    dim = len(basis) - (linalg.rank(forced, len(basis)) if forced else 0)
    return Realization(False, dim, None)


def is_realizable(graph: DirectionGraph) -> bool:
    return _realizable_cached(graph.canonical())


@lru_cache(maxsize=None)
def _realizable_cached(key) -> bool:
    verts, edges = key
    return realization_cone_solve(DirectionGraph(verts, edges)).realizable


def expected_dimension(graph: DirectionGraph) -> int:
    return 2 * graph.v - graph.e - 2


# -- semi-realizability -------------------------------------------------------


def _quotient(graph: DirectionGraph, comp_of: dict[str, str]) -> DirectionGraph | None:
    """Contract each component to its representative; None if parallel edges clash."""
    merged: dict[tuple[str, str], set[Direction]] = {}
    for e in graph.edges:
        a = comp_of.get(e.a, e.a)
        b = comp_of.get(e.b, e.b)
        if a == b:
            continue
        if (a, b) > (b, a):
            a, b, d = b, a, -e.direction
        else:
            d = e.direction
        dirs = merged.setdefault((a, b), set())
        if -d in dirs:
            return None
        dirs.add(d)
    edges = tuple(Edge(a, b, d) for (a, b), ds in sorted(merged.items()) for d in sorted(ds, key=Direction.to_json))
    verts = tuple(sorted(set(comp_of.values())))
    return DirectionGraph(verts, edges)


def _shrunk_subgraph(graph: DirectionGraph, members: set[str]) -> DirectionGraph:
    """The component with every edge that leaves it turned into an edge to infinity."""
    edges = []
    seen_inf: set[tuple[str, Direction]] = set()
    for e in graph.edges:
        ina, inb = e.a in members, e.b in members
        if ina and inb:
            edges.append(e)
        elif ina or inb:
            out = e if ina else e.reversed()
            key = (out.a, out.direction)
            if key not in seen_inf:
                seen_inf.add(key)
                edges.append(Edge(out.a, INF, out.direction))
    return DirectionGraph(tuple(sorted(members)), tuple(edges))


def _valid_directions(graph: DirectionGraph) -> bool:
    for vertex in graph.finite_vertices:
        dirs = graph.outgoing(vertex)
        if len(set(dirs)) != len(dirs) or len(dirs) < 3 or not directions_form_fan(dirs):
            return False
    inf = set(graph.outgoing(INF))
    return not inf or (len(inf) >= 3 and directions_form_fan(inf))


def is_semi_realizable(graph: DirectionGraph) -> bool:
    """Realizable, or realizable after shrinking semi-realizable subgraphs to points."""
    return _semi_cached(graph.canonical())


@lru_cache(maxsize=None)
def _semi_cached(key) -> bool:
    verts, edges = key
    graph = DirectionGraph(verts, edges)
    if is_realizable(graph):
        return True
    internal = graph.internal_edges()
    # smallest zero-length sets first; the first success ends the search
    for size in range(1, len(internal) + 1):
        for Z in itertools.combinations(range(len(internal)), size):
            if _almost_realization(graph, internal, Z):
                return True
    return False


def _almost_realization(graph: DirectionGraph, internal: list[Edge], Z: tuple[int, ...]) -> bool:
    zset = set(Z)
    comps = _components(graph.finite_vertices, [(internal[i].a, internal[i].b) for i in Z])
    if len(comps) < 2:
        return False
    comp_of = {x: c[0] for c in comps for x in c}
    # edges outside Z must have positive length, so they cannot sit inside a shrunk piece
    for i, e in enumerate(internal):
        if i not in zset and comp_of[e.a] == comp_of[e.b]:
            return False
    quotient = _quotient(graph, comp_of)
    if quotient is None or not _valid_directions(quotient) or not is_realizable(quotient):
        return False
    for c in comps:
        if len(c) > 1:
            piece = _shrunk_subgraph(graph, set(c))
            if not _valid_directions(piece) or not is_semi_realizable(piece):
                return False
    return True


# -- duality ------------------------------------------------------------------


def cell_vertex_name(index: int) -> str:
    return f"c{index}"


def dual_graph(sub: Subdivision, config: PointConfig) -> DirectionGraph:
    """Finite vertex per cell, edge per shared edge, infinity edge per boundary edge.

    The edge leaving cell i carries the primal edge (oriented with cell i on
    its left) rotated by -90 degrees, i.e. the outward normal of cell i.
    """
    names = {c: cell_vertex_name(i) for i, c in enumerate(sub.cells)}
    owner = {}
    for c in sub.cells:
        for e in c.edges():
            owner[e] = c
    boundary = set(sub.outer.edges())
    edges = []
    for c in sub.cells:
        for u, v in c.edges():
            normal = Direction.of(rot_minus90(config.pos(v) - config.pos(u)))
            if (u, v) in boundary:
                edges.append(Edge(names[c], INF, normal))
            else:
                other = owner[(v, u)]
                if names[c] < names[other]:
                    edges.append(Edge(names[c], names[other], normal))
    return DirectionGraph(tuple(names[c] for c in sub.cells), tuple(edges))


def web_from_heights(sub: Subdivision, config: PointConfig, heights: dict) -> Web:
    """Place each dual vertex at minus the gradient of the lift on its cell."""
    graph = dual_graph(sub, config)
    pos = {}
    for i, c in enumerate(sub.cells):
        a, b, d = (config.pos(x) for x in c.vertex_ids[:3])
        ha, hb, hd = (heights[x] for x in c.vertex_ids[:3])
        det = cross(b - a, d - a)
        gx = ((hb - ha) * (d.y - a.y) - (hd - ha) * (b.y - a.y)) / det
        gy = ((b.x - a.x) * (hd - ha) - (d.x - a.x) * (hb - ha)) / det
        pos[cell_vertex_name(i)] = Point(-gx, -gy)
    return Web(graph, pos)


@dataclass
class DualityViolation:
    outer: list[str]
    subdivision: dict
    admissible: bool
    realizable: bool

    def to_json(self) -> dict:
        return {
            "outer": self.outer,
            "subdivision": self.subdivision,
            "admissible": self.admissible,
            "realizable": self.realizable,
        }


def duality_check_outer(config: PointConfig, outer: Cell) -> list[DualityViolation]:
    out = []
    for sub in enumerate_subdivisions(config, outer, include_trivial=True):
        adm = is_admissible(sub, config)
        real = is_realizable(dual_graph(sub, config))
        if adm != real:
            out.append(DualityViolation(list(outer.vertex_ids), sub.to_json(), adm, real))
    return out


def duality_check(config: PointConfig) -> list[DualityViolation]:
    """Admissibility versus realizability of the dual graph, over every subdivision."""
    config.require_general_position()
    return [v for outer in enumerate_cells(config) for v in duality_check_outer(config, outer)]


def dual_check_details(sub: Subdivision, config: PointConfig) -> dict:
    graph = dual_graph(sub, config)
    sol = realization_cone_solve(graph)
    heights = admissibility_witness(sub, config)
    return {
        "expected_codimension": expected_codimension(sub),
        "expected_dimension": expected_dimension(graph),
        "realizable": sol.realizable,
        "dimension": sol.dimension,
        "admissible": heights is not None,
    }

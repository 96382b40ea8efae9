"""Frames over a planar point configuration and the mod-2 infrared algebra.

A frame is a convex polygon over the configuration whose edges each carry a
label in {0, 1}. Elements of the frame space are finite sets of frames
(coefficients in the field with two elements). The RP and CP models differ
only in how the two labels on the two sides of an internal edge are paired.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .geom import InvalidInput, Point, orient
from .subdivision import (
    Cell,
    InvalidSubdivision,
    PointConfig,
    Subdivision,
    convex_hull,
    coarsenings,
    enumerate_cells,
    enumerate_subdivisions,
    expected_codimension,
    is_admissible,
    make_cell,
    validate_subdivision,
)
from .web import dual_graph, is_realizable


class PairingModel(enum.Enum):
    RP = "RP"
    CP = "CP"

    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Allowed (label on one side, label on the other side) of an internal edge."""
        if self is PairingModel.RP:
            return ((0, 0), (1, 1))
        return ((0, 1), (1, 0))

    def compatible(self, x: int, y: int) -> bool:
        return (x, y) in self.pairs()

    def triangle_labels(self) -> list[tuple[int, int, int]]:
        cube = itertools.product((0, 1), repeat=3)
        if self is PairingModel.RP:
            return [t for t in cube if sum(t) % 2 == 0]
        return [t for t in cube if sum(t) == 2]


@dataclass(frozen=True, order=True)
class Frame:
    """A cell with a label on each edge; labels[i] sits on (v_i, v_{i+1})."""

    vertex_ids: tuple[str, ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        ids, labels = tuple(self.vertex_ids), tuple(int(x) for x in self.labels)
        if len(ids) != len(labels):
            raise InvalidInput("one label per boundary edge is required")
        if any(x not in (0, 1) for x in labels):
            raise InvalidInput(f"labels must be 0 or 1, got {labels}")
        k = min(range(len(ids)), key=lambda i: ids[i])
        object.__setattr__(self, "vertex_ids", ids[k:] + ids[:k])
        object.__setattr__(self, "labels", labels[k:] + labels[:k])

    @property
    def cell(self) -> Cell:
        return Cell(self.vertex_ids)

    def label_map(self) -> dict[tuple[str, str], int]:
        return dict(zip(self.cell.edges(), self.labels))

    def to_json(self) -> dict:
        return {"cell": list(self.vertex_ids), "labels": list(self.labels)}

    @classmethod
    def from_json(cls, data: dict) -> Frame:
        return cls(tuple(data["cell"]), tuple(data["labels"]))


def make_frame(config: PointConfig, ids: Sequence[str], labels: Sequence[int]) -> Frame:
    """Frame on the given cyclic vertex list; the labels follow that list's edges."""
    cell = make_cell(config, ids)
    given = {(ids[i], ids[(i + 1) % len(ids)]): labels[i] for i in range(len(ids))}
    if set(given) != set(cell.edges()):
        raise InvalidInput(f"vertices {list(ids)} are not listed counterclockwise")
    return Frame(cell.vertex_ids, tuple(given[e] for e in cell.edges()))


class AlgebraElement:
    """Finite mod-2 sum of frames."""

    __slots__ = ("_support",)

    def __init__(self, frames: Iterable[Frame] = ()):
        support: set[Frame] = set()
        for f in frames:
            support ^= {f}
        self._support = frozenset(support)

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        out = AlgebraElement()
        out._support = self._support ^ other._support
        return out

    def __contains__(self, frame: Frame) -> bool:
        return frame in self._support

    def __iter__(self) -> Iterator[Frame]:
        return iter(sorted(self._support))

    def __len__(self) -> int:
        return len(self._support)

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraElement) and self._support == other._support

    def __hash__(self) -> int:
        return hash(self._support)

    def __repr__(self) -> str:
        return f"AlgebraElement({sorted(self._support)!r})"

    def coefficient(self, frame: Frame) -> int:
        return int(frame in self._support)

    def polygons(self) -> set[Cell]:
        return {f.cell for f in self._support}

    def to_json(self) -> list:
        return [f.to_json() for f in self]

    @classmethod
    def from_json(cls, data: list) -> AlgebraElement:
        return cls(Frame.from_json(d) for d in data)


def build_mc_element(config: PointConfig, model: PairingModel) -> AlgebraElement:
    """Decorated empty triangles: even label sum for RP, label sum exactly 2 for CP."""
    config.require_general_position()
    frames = []
    for cell in enumerate_cells(config, empty_only=True):
        if len(cell) != 3:
            continue
        for labels in model.triangle_labels():
            frames.append(Frame(cell.vertex_ids, labels))
    return AlgebraElement(frames)


@lru_cache(maxsize=None)
def codim_one_subdivisions(config: PointConfig, outer: Cell) -> tuple[Subdivision, ...]:
    """Subdivisions of expected codimension 1 whose dual web exists."""
    out = []
    for sub in enumerate_subdivisions(config, outer):
        if expected_codimension(sub) != 1:
            continue
        real = is_realizable(dual_graph(sub, config))
        if real != is_admissible(sub, config):
            raise AssertionError(f"admissibility and dual realizability disagree on {sub.to_json()}")
        if real:
            out.append(sub)
    return tuple(out)


def _owners(sub: Subdivision) -> dict[tuple[str, str], Cell]:
    return {e: c for c in sub.cells for e in c.edges()}


def subdivision_count(sub: Subdivision, boundary: dict[tuple[str, str], int],
                      phi: AlgebraElement, model: PairingModel) -> int:
    """Number of internal labelings making every decorated cell a frame of phi."""
    support = phi.polygons()
    if any(c not in support for c in sub.cells):
        return 0
    owners = _owners(sub)
    internal = sub.internal_edges()
    total = 0
    for choice in itertools.product(model.pairs(), repeat=len(internal)):
        labels = dict(boundary)
        for (u, v), (x, y) in zip(internal, choice):
            labels[(u, v)] = x
            labels[(v, u)] = y
        if all(Frame(c.vertex_ids, tuple(labels[e] for e in c.edges())) in phi for c in sub.cells):
            total += 1
    return total


def mc_defect_terms(frame: Frame, phi: AlgebraElement, model: PairingModel,
                    config: PointConfig) -> list[tuple[Subdivision, int]]:
    """Per-subdivision contributions (mod 2 nonzero ones only) to the defect of ``frame``."""
    config.require_general_position()
    boundary = frame.label_map()
    out = []
    for sub in codim_one_subdivisions(config, frame.cell):
        n = subdivision_count(sub, boundary, phi, model)
        if n % 2:
            out.append((sub, n))
    return out


def mc_defect(frame: Frame, phi: AlgebraElement, model: PairingModel, config: PointConfig) -> int:
    return len(mc_defect_terms(frame, phi, model, config)) % 2


def all_frames(config: PointConfig) -> Iterator[Frame]:
    for cell in enumerate_cells(config):
        for labels in itertools.product((0, 1), repeat=len(cell)):
            yield Frame(cell.vertex_ids, labels)


def l_k_structure_constants(frames: Sequence[Frame], config: PointConfig,
                            model: PairingModel = PairingModel.RP) -> AlgebraElement:
    """The k-ary bracket on decorated frames, glued along a codimension-1 subdivision."""
    config.require_general_position()
    k = len(frames)
    if k < 1:
        raise InvalidInput("l_k needs at least one input")
    cells = [f.cell for f in frames]
    if k == 1 or len(set(cells)) != k:
        return AlgebraElement()
    ids = sorted({v for c in cells for v in c.vertex_ids})
    hull = convex_hull(config, ids)
    sub = Subdivision(Cell(tuple(hull)), tuple(cells))
    try:
        validate_subdivision(sub, config)
    except InvalidSubdivision:
        return AlgebraElement()
    if expected_codimension(sub) != 1 or not is_realizable(dual_graph(sub, config)):
        return AlgebraElement()
    labels: dict[tuple[str, str], int] = {}
    for f in frames:
        labels.update(f.label_map())
    for u, v in sub.internal_edges():
        if not model.compatible(labels[(u, v)], labels[(v, u)]):
            return AlgebraElement()
    outer = sub.outer
    return AlgebraElement([Frame(outer.vertex_ids, tuple(labels[e] for e in outer.edges()))])


@dataclass
class PairingViolation:
    outer: list[str]
    subdivision: dict
    coarsenings: list[dict]

    def to_json(self) -> dict:
        return {"outer": self.outer, "subdivision": self.subdivision, "coarsenings": self.coarsenings}


def codim2_pairing_outer(config: PointConfig, outer: Cell) -> list[PairingViolation]:
    out = []
    for sub in enumerate_subdivisions(config, outer):
        if expected_codimension(sub) != 2 or not is_admissible(sub, config):
            continue
        found = [c for c in coarsenings(sub, config)
                 if expected_codimension(c) == 1 and is_admissible(c, config)]
        if len(found) != 2:
            out.append(PairingViolation(list(outer.vertex_ids), sub.to_json(), [c.to_json() for c in found]))
    return out


def codim2_pairing_check(config: PointConfig) -> list[PairingViolation]:
    """Every admissible codimension-2 subdivision must have exactly two admissible codimension-1 coarsenings."""
    config.require_general_position()
    return [v for outer in enumerate_cells(config) for v in codim2_pairing_outer(config, outer)]


def mc_check_cell(config: PointConfig, phi: AlgebraElement, model: PairingModel, cell: Cell) -> list[dict]:
    """Defect of every boundary labeling of one polygon, in label order."""
    out = []
    for labels in itertools.product((0, 1), repeat=len(cell)):
        frame = Frame(cell.vertex_ids, labels)
        terms = mc_defect_terms(frame, phi, model, config)
        entry = {"frame": frame.to_json(), "defect": len(terms) % 2}
        if entry["defect"]:
            entry["subdivisions"] = [{"subdivision": sub.to_json(), "count": n} for sub, n in terms]
        out.append(entry)
    return out


# -- concave paths and the bar construction ----------------------------------


def _concave(pts: Sequence[Point]) -> bool:
    """x strictly increasing and every turn clockwise."""
    if len(pts) < 2 or any(a.x >= b.x for a, b in zip(pts, pts[1:])):
        return False
    return all(orient(a, b, c) == -1 for a, b, c in zip(pts, pts[1:], pts[2:]))


@dataclass(frozen=True)
class ConcavePath:
    vertex_ids: tuple[str, ...]
    points: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertex_ids", tuple(self.vertex_ids))
        object.__setattr__(self, "points", tuple(self.points))
        if len(self.vertex_ids) != len(self.points) or not _concave(self.points):
            raise InvalidInput(f"{list(self.vertex_ids)} is not a concave x-monotone path")


def is_concave_path(config: PointConfig, ids: Sequence[str]) -> bool:
    return _concave(config.positions(ids))


def concave_path(config: PointConfig, ids: Sequence[str]) -> ConcavePath:
    return ConcavePath(tuple(ids), tuple(config.positions(ids)))


def concave_compose(p: ConcavePath | None, q: ConcavePath | None) -> ConcavePath | None:
    """Concatenate when the ends meet and the result is still concave; None is zero."""
    if p is None or q is None or p.vertex_ids[-1] != q.vertex_ids[0]:
        return None
    pts = p.points + q.points[1:]
    if not _concave(pts):
        return None
    return ConcavePath(p.vertex_ids + q.vertex_ids[1:], pts)


@dataclass(frozen=True)
class BarWord:
    """An x-monotone path with marks on some internal vertices (given by position)."""

    path: tuple[str, ...]
    marks: frozenset[int]

    def pieces(self) -> list[tuple[str, ...]]:
        cuts = [0, *sorted(self.marks), len(self.path) - 1]
        return [self.path[a:b + 1] for a, b in zip(cuts, cuts[1:])]

    def is_valid(self, config: PointConfig) -> bool:
        if not all(0 < m < len(self.path) - 1 for m in self.marks):
            return False
        return all(is_concave_path(config, piece) for piece in self.pieces())

    def faces(self) -> list[BarWord]:
        return [BarWord(self.path, self.marks - {m}) for m in sorted(self.marks)]


def _gf2_rank(rows: list[int]) -> int:
    pivots: dict[int, int] = {}
    r = 0
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top not in pivots:
                pivots[top] = row
                r += 1
                break
            row ^= pivots[top]
    return r


def bar_homology(config: PointConfig, path: Sequence[str]) -> dict[int, int]:
    """Mod-2 homology ranks of the bar complex on one x-monotone path, by number of marks.

    Faces whose merged piece is not concave are absent from the complex, so
    those terms of the differential vanish.
    """
    path = tuple(path)
    pts = config.positions(path)
    if len(path) < 2 or any(a.x >= b.x for a, b in zip(pts, pts[1:])):
        raise InvalidInput(f"path {list(path)} is not x-monotone")
    words: dict[int, list[BarWord]] = {}
    for r in range(len(path) - 1):
        for marks in itertools.combinations(range(1, len(path) - 1), r):
            w = BarWord(path, frozenset(marks))
            if w.is_valid(config):
                words.setdefault(r, []).append(w)
    index = {w: i for ws in words.values() for i, w in enumerate(ws)}
    boundary_rank: dict[int, int] = {}
    for deg, ws in words.items():
        rows = []
        for w in ws:
            row = 0
            for face in w.faces():
                if face in index:
                    row ^= 1 << index[face]
            rows.append(row)
        boundary_rank[deg] = _gf2_rank(rows)
    out = {}
    for deg, ws in words.items():
        h = len(ws) - boundary_rank.get(deg, 0) - boundary_rank.get(deg + 1, 0)
        if h:
            out[deg] = h
    return out


def is_convex_path(config: PointConfig, path: Sequence[str]) -> bool:
    pts = config.positions(path)
    return all(orient(a, b, c) == 1 for a, b, c in zip(pts, pts[1:], pts[2:]))

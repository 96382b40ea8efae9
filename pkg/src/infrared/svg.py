"""Standalone SVG drawings of subdivisions, webs and closed curves.

Output depends only on the input objects, so repeated renders are
byte-identical.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Iterable
from xml.sax.saxutils import escape

from .geom import InvalidInput, Point
from .subdivision import PointConfig, Subdivision
from .web import INF, DirectionGraph, Web, realization_cone_solve
from .winding import ClosedPLCurve

SIZE = 400
MARGIN = 30

_HEADER = (
    '<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">\n'
    "<defs>\n"
    '<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto">'
    '<path d="M0,0 L10,5 L0,10 z" fill="#333"/></marker>\n'
    '<clipPath id="frame"><rect x="0" y="0" width="{s}" height="{s}"/></clipPath>\n'
    "</defs>\n"
    '<rect x="0" y="0" width="{s}" height="{s}" fill="white"/>\n'
)


class RenderRefused(InvalidInput):
    pass


class _Frame:
    """Affine map from data coordinates onto the fixed viewbox, y pointing up."""

    def __init__(self, points: Iterable[Point]):
        pts = list(points) or [Point(0, 0)]
        xs, ys = [p.x for p in pts], [p.y for p in pts]
        self.x0, self.y0 = min(xs), min(ys)
        span = max(max(xs) - self.x0, max(ys) - self.y0) or Fraction(1)
        self.k = Fraction(SIZE - 2 * MARGIN) / span
        self.span = span

    def __call__(self, p: Point) -> tuple[str, str]:
        x = MARGIN + (p.x - self.x0) * self.k
        y = SIZE - MARGIN - (p.y - self.y0) * self.k
        return f"{float(x):.3f}", f"{float(y):.3f}"


def _doc(body: list[str]) -> str:
    return _HEADER.format(s=SIZE) + "".join(line + "\n" for line in body) + "</svg>\n"


def _label(xy: tuple[str, str], text: str) -> str:
    x, y = xy
    return f'<text x="{x}" y="{y}" dx="5" dy="-5" font-size="11" font-family="monospace">{escape(text)}</text>'


def render_subdivision(sub: Subdivision, config: PointConfig) -> str:
    ids = config.ids
    fr = _Frame(config.positions(ids))
    body = []
    for i, c in enumerate(sub.cells):
        pts = " ".join(",".join(fr(config.pos(v))) for v in c.vertex_ids)
        shade = 235 - 20 * (i % 4)
        body.append(f'<polygon class="cell" points="{pts}" fill="rgb({shade},{shade},250)" stroke="#333" stroke-width="1"/>')
    for u, v in sub.internal_edges():
        (x1, y1), (x2, y2) = fr(config.pos(u)), fr(config.pos(v))
        body.append(f'<line class="internal" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#c0392b" stroke-width="2.5"/>')
    for pid in ids:
        x, y = fr(config.pos(pid))
        used = pid in sub.used_ids()
        body.append(f'<circle class="vertex" cx="{x}" cy="{y}" r="3" fill="{"#111" if used else "#999"}"/>')
        body.append(_label((x, y), pid))
    return _doc(body)


def render_web(web: Web) -> str:
    if not web.is_valid():
        raise RenderRefused("positions do not realize the graph")
    graph = web.graph
    pos = [web.positions[v] for v in graph.finite_vertices]
    base = _Frame(pos)
    reach = base.span
    ends = list(pos)
    rays = []
    for e in graph.edges:
        if e.is_internal():
            continue
        start, d = (web.positions[e.a], e.direction.vector()) if e.b == INF else (web.positions[e.b], -e.direction.vector())
        # normalise the ray length in the sup norm so it leaves the drawn area
        size = max(abs(d.x), abs(d.y))
        tip = start + d.scale(reach / size)
        rays.append((start, tip))
        ends.append(tip)
    fr = _Frame(ends)
    body = ['<g clip-path="url(#frame)">']
    for start, tip in rays:
        (x1, y1), (x2, y2) = fr(start), fr(tip)
        body.append(f'<line class="ray" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#777" stroke-dasharray="4 3" marker-end="url(#arrow)"/>')
    for e in graph.internal_edges():
        (x1, y1), (x2, y2) = fr(web.positions[e.a]), fr(web.positions[e.b])
        body.append(f'<line class="edge" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#333" stroke-width="2" marker-end="url(#arrow)"/>')
    body.append("</g>")
    for v in graph.finite_vertices:
        xy = fr(web.positions[v])
        body.append(f'<circle class="vertex" cx="{xy[0]}" cy="{xy[1]}" r="4" fill="#1f4e79"/>')
        body.append(_label(xy, v))
    return _doc(body)


def render_graph(graph: DirectionGraph) -> str:
    """Draw a graph at its realization witness; refuses when none exists."""
    sol = realization_cone_solve(graph)
    if not sol.realizable:
        raise RenderRefused("graph has no realization to draw")
    return render_web(sol.witness)


def render_curve(curve: ClosedPLCurve) -> str:
    origin = Point(0, 0)
    fr = _Frame([origin, *(p for loop in curve.components for p in loop)])
    body = []
    for loop in curve.components:
        pts = " ".join(",".join(fr(p)) for p in (*loop, loop[0]))
        body.append(f'<polyline class="loop" points="{pts}" fill="none" stroke="#1f4e79" stroke-width="1.5" marker-mid="url(#arrow)"/>')
    x, y = fr(origin)
    body.append(f'<circle class="origin" cx="{x}" cy="{y}" r="4" fill="#c0392b"/>')
    body.append(_label((x, y), "0"))
    return _doc(body)


def render_svg(obj, out: str | Path, config: PointConfig | None = None) -> Path:
    """Write any drawable object to ``out``; subdivisions also need their config."""
    if isinstance(obj, Subdivision):
        if config is None:
            raise InvalidInput("rendering a subdivision needs its point configuration")
        text = render_subdivision(obj, config)
    elif isinstance(obj, Web):
        text = render_web(obj)
    elif isinstance(obj, DirectionGraph):
        text = render_graph(obj)
    elif isinstance(obj, ClosedPLCurve):
        text = render_curve(obj)
    else:
        raise InvalidInput(f"cannot render {type(obj).__name__}")
    path = Path(out)
    path.write_text(text, encoding="utf-8")
    return path

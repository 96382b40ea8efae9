"""Command-line front end.

Every subcommand reads JSON files, writes one JSON report (or an SVG for
``render``) and exits with 0 when no violation was found, 1 when the report
lists violations and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

from . import __version__
from .algebra import (
    AlgebraElement,
    PairingModel,
    bar_homology,
    build_mc_element,
    codim2_pairing_outer,
    is_convex_path,
    mc_check_cell,
)
from .geom import InvalidInput, format_rational
from .subdivision import (
    PointConfig,
    Subdivision,
    admissibility_witness,
    convex_hull,
    enumerate_cells,
    enumerate_subdivisions,
    expected_codimension,
    make_cell,
    validate_subdivision,
)
from .svg import RenderRefused, render_curve, render_graph, render_subdivision, render_web
from .web import (
    DirectionGraph,
    dual_graph,
    duality_check_outer,
    expected_dimension,
    is_semi_realizable,
    realization_cone_solve,
    web_from_heights,
)
from .sampling import random_curve
from .winding import (
    ClosedPLCurve,
    EquivariantBundleData,
    build_characteristic_curve,
    invariant_euler_characteristic,
    winding_formula,
    winding_oracle,
)

THREADS_ENV = "INFRARED_THREADS"


class InputError(Exception):
    """Bad command-line input; the message names the offending file or datum."""


# -- plumbing ------------------------------------------------------------------


def workers() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    return max(1, n)


def fan_out(fn: Callable, jobs: Sequence[tuple]) -> list:
    """Run fn(*job) for every job; results come back in job order."""
    n = workers()
    if n == 1 or len(jobs) < 2:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from None


def parse(path: str, what: str, build: Callable[[Any], Any]) -> Any:
    data = load_json(path)
    try:
        return build(data)
    except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
        raise InputError(f"{path}: not a valid {what} ({type(exc).__name__}: {exc})") from None


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _ids(raw: str) -> list[str]:
    return [x for x in raw.split(",") if x]


def _config(path: str) -> PointConfig:
    return parse(path, "point configuration", PointConfig.from_json)


def _subdivision(path: str, config: PointConfig) -> Subdivision:
    sub = parse(path, "subdivision", lambda d: Subdivision.from_json(d, config))
    validate_subdivision(sub, config)
    return sub


def _check_size(config: PointConfig, limit: int, path: str) -> None:
    if len(config.ids) > limit:
        raise InputError(f"{path}: {len(config.ids)} points exceeds --max-points {limit}")


def _heights_json(heights: dict | None) -> dict | None:
    if heights is None:
        return None
    return {k: format_rational(v) for k, v in sorted(heights.items())}


# -- subcommands ---------------------------------------------------------------


def cmd_winding(args) -> dict:
    curve = parse(args.curve, "curve", ClosedPLCurve.from_json)
    oracle = winding_oracle(curve)
    report: dict = {"index": oracle, "oracle": oracle, "violations": []}
    try:
        formula = winding_formula(curve)
    except InvalidInput as exc:
        report.update(formula=None, formula_skipped=str(exc), methods_agree=None)
        return report
    report["formula"] = formula.to_json()
    report["methods_agree"] = formula.index == oracle
    if formula.index != oracle:
        report["violations"].append({"oracle": oracle, "formula": formula.index})
    return report


def cmd_winding_sweep(args) -> dict:
    rng = random.Random(args.seed)
    bad = []
    for i in range(args.count):
        curve = random_curve(rng)
        a, b = winding_oracle(curve), winding_formula(curve).index
        if a != b:
            bad.append({"sample": i, "curve": curve.to_json(), "oracle": a, "formula": b})
    return {"seed": args.seed, "count": args.count, "violations": bad}


def cmd_euler(args) -> dict:
    bundle = parse(args.bundle, "bundle", EquivariantBundleData.from_json)
    built = build_characteristic_curve(bundle)
    return {
        "chi": invariant_euler_characteristic(bundle),
        "rank": bundle.rank,
        "curve": built.curve.to_json(),
        "notes": built.notes,
        "violations": [],
    }


def cmd_subdivide(args) -> dict:
    config = _config(args.config)
    config.require_general_position()
    outer = make_cell(config, _ids(args.outer)) if args.outer else make_cell(config, convex_hull(config, config.ids))
    subs = enumerate_subdivisions(config, outer, include_trivial=args.include_trivial)
    return {
        "outer": list(outer.vertex_ids),
        "count": len(subs),
        "subdivisions": [
            {**s.to_json(), "expected_codimension": expected_codimension(s)} for s in subs
        ],
        "violations": [],
    }


def cmd_admissible(args) -> dict:
    config = _config(args.config)
    config.require_general_position()
    sub = _subdivision(args.subdivision, config)
    heights = admissibility_witness(sub, config)
    return {
        "admissible": heights is not None,
        "heights": _heights_json(heights),
        "expected_codimension": expected_codimension(sub),
        "violations": [],
    }


def cmd_dual(args) -> dict:
    config = _config(args.config)
    config.require_general_position()
    sub = _subdivision(args.subdivision, config)
    graph = dual_graph(sub, config)
    return {"graph": graph.to_json(), "fan_violations": graph.fan_violations(), "violations": []}


def _graph_from(data: Any) -> DirectionGraph:
    return DirectionGraph.from_json(data["graph"] if "graph" in data else data)


def cmd_realize(args) -> dict:
    graph = parse(args.graph, "graph", _graph_from)
    sol = realization_cone_solve(graph)
    report = {
        "realizable": sol.realizable,
        "dimension": sol.dimension,
        "expected_dimension": expected_dimension(graph),
        "witness": sol.witness.to_json() if sol.witness else None,
        "violations": [],
    }
    if args.semi:
        report["semi_realizable"] = is_semi_realizable(graph)
    return report


def cmd_duality_check(args) -> dict:
    config = _config(args.config)
    config.require_general_position()
    _check_size(config, args.max_points, args.config)
    found = fan_out(duality_check_outer, [(config, c) for c in enumerate_cells(config)])
    return {"points": len(config.ids), "violations": [v.to_json() for vs in found for v in vs]}


def _model(raw: str) -> PairingModel:
    return PairingModel(raw.upper())


def cmd_mc_build(args) -> dict:
    config = _config(args.config)
    model = _model(args.model)
    phi = build_mc_element(config, model)
    return {"model": model.value, "element": phi.to_json(), "size": len(phi), "violations": []}


def _element_from(data: Any) -> AlgebraElement:
    return AlgebraElement.from_json(data["element"] if isinstance(data, dict) else data)


def cmd_mc_check(args) -> dict:
    config = _config(args.config)
    config.require_general_position()
    _check_size(config, args.max_points, args.config)
    model = _model(args.model)
    if args.element:
        phi = parse(args.element, "algebra element", _element_from)
    else:
        phi = build_mc_element(config, model)
    cells = enumerate_cells(config, empty_only=args.empty_only)
    per_cell = fan_out(mc_check_cell, [(config, phi, model, c) for c in cells])
    frames = [entry for entries in per_cell for entry in entries]
    return {
        "model": model.value,
        "frames": frames,
        "violations": [e for e in frames if e["defect"]],
    }


def cmd_codim2_check(args) -> dict:
    config = _config(args.config)
    config.require_general_position()
    _check_size(config, args.max_points, args.config)
    found = fan_out(codim2_pairing_outer, [(config, c) for c in enumerate_cells(config)])
    return {"points": len(config.ids), "violations": [v.to_json() for vs in found for v in vs]}


def cmd_bar(args) -> dict:
    config = _config(args.config)
    config.require_general_position()
    path = _ids(args.path)
    ranks = bar_homology(config, path)
    convex = is_convex_path(config, path)
    total = sum(ranks.values())
    expected = 1 if convex else 0
    report = {
        "path": path,
        "ranks": {str(k): v for k, v in sorted(ranks.items())},
        "total": total,
        "convex": convex,
        "violations": [],
    }
    if total != expected or (convex and ranks.get(len(path) - 2) != 1):
        report["violations"].append({"expected_total": expected, "total": total})
    return report


def cmd_render(args) -> str:
    if args.kind == "subdivision":
        config = _config(args.inputs[0])
        return render_subdivision(_subdivision(_need(args, 2), config), config)
    if args.kind == "web":
        config = _config(args.inputs[0])
        sub = _subdivision(_need(args, 2), config)
        heights = admissibility_witness(sub, config)
        if heights is None:
            raise RenderRefused(f"{args.inputs[1]}: subdivision is not admissible, its dual web has no witness")
        return render_web(web_from_heights(sub, config, heights))
    if args.kind == "graph":
        return render_graph(parse(args.inputs[0], "graph", _graph_from))
    if args.kind == "curve":
        return render_curve(parse(args.inputs[0], "curve", ClosedPLCurve.from_json))
    bundle = parse(args.inputs[0], "bundle", EquivariantBundleData.from_json)
    return render_curve(build_characteristic_curve(bundle).curve)


def _need(args, n: int) -> str:
    if len(args.inputs) < n:
        raise InputError(f"render {args.kind} needs {n} input files")
    return args.inputs[n - 1]


# -- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="infrared", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_text: str):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("-o", "--output", help="write the report here instead of stdout")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("winding", cmd_winding, "winding number of a closed curve, both methods")
    sp.add_argument("curve")
    sp = add("winding-sweep", cmd_winding_sweep, "compare both winding methods on random curves")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=1000)
    sp = add("euler", cmd_euler, "invariant Euler characteristic of bundle data")
    sp.add_argument("bundle")
    sp = add("subdivide", cmd_subdivide, "enumerate subdivisions of a cell")
    sp.add_argument("config")
    sp.add_argument("--outer", help="comma separated vertex ids (default: convex hull)")
    sp.add_argument("--include-trivial", action="store_true")
    sp = add("admissible", cmd_admissible, "decide admissibility and print a height witness")
    sp.add_argument("config")
    sp.add_argument("subdivision")
    sp = add("dual", cmd_dual, "dual graph with directions of a subdivision")
    sp.add_argument("config")
    sp.add_argument("subdivision")
    sp = add("realize", cmd_realize, "realization cone of a graph with directions")
    sp.add_argument("graph")
    sp.add_argument("--semi", action="store_true", help="also decide semi-realizability")
    for name, fn, default, text in (
        ("duality-check", cmd_duality_check, 7, "admissibility versus dual realizability"),
        ("codim2-check", cmd_codim2_check, 6, "codimension-2 pairing check"),
    ):
        sp = add(name, fn, text)
        sp.add_argument("config")
        sp.add_argument("--max-points", type=int, default=default)
    sp = add("mc-build", cmd_mc_build, "explicit Maurer-Cartan element")
    sp.add_argument("config")
    sp.add_argument("--model", default="RP", choices=["RP", "CP", "rp", "cp"])
    sp = add("mc-check", cmd_mc_check, "Maurer-Cartan defect of every frame")
    sp.add_argument("config")
    sp.add_argument("--model", default="RP", choices=["RP", "CP", "rp", "cp"])
    sp.add_argument("--element", help="element file (default: the explicit element for the model)")
    sp.add_argument("--empty-only", action="store_true", help="only frames on empty polygons")
    sp.add_argument("--max-points", type=int, default=7)
    sp = add("bar", cmd_bar, "homology of the bar complex on one path")
    sp.add_argument("config")
    sp.add_argument("--path", required=True, help="comma separated vertex ids")
    sp = add("render", cmd_render, "draw a subdivision, web, graph or curve as SVG")
    sp.add_argument("kind", choices=["subdivision", "web", "graph", "curve", "bundle"])
    sp.add_argument("inputs", nargs="+")
    return p


def main(argv: Iterable[str] | None = None) -> int:
    args = build_parser().parse_args(None if argv is None else list(argv))
    try:
        result = args.fn(args)
    except (InputError, InvalidInput) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if isinstance(result, str):
        write(result, args.output)
        return 0
    write(dump_report(result), args.output)
    return 1 if result["violations"] else 0


if __name__ == "__main__":
    sys.exit(main())

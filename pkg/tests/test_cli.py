import json

import pytest

from fixtures import NESTED, NESTED_NONREGULAR, QUAD, fixtures_up_to
from infrared.algebra import AlgebraElement, PairingModel, build_mc_element
from infrared.cli import main
from infrared.geom import Direction, Point
from infrared.subdivision import PointConfig, Subdivision, convex_hull, enumerate_subdivisions, make_cell
from infrared.svg import RenderRefused, render_svg
from infrared.web import dual_graph
from infrared.winding import ClosedPLCurve, ToricFan, line_bundle

SQUARE = {"components": [[{"x": "1", "y": "1"}, {"x": "-1", "y": "1"}, {"x": "-1", "y": "-1"}, {"x": "1", "y": "-1"}]]}


@pytest.fixture
def files(tmp_path):
    def put(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    return put


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def quad_diagonal():
    return enumerate_subdivisions(QUAD, make_cell(QUAD, convex_hull(QUAD, QUAD.ids)))[0]


def test_winding_square(capsys, files):
    code, out, _ = run(capsys, "winding", files("sq.json", SQUARE))
    rep = json.loads(out)
    assert code == 0 and rep["index"] == 1 and rep["methods_agree"] is True and rep["violations"] == []


def test_mc_check_convex_quadrilateral(capsys, files):
    code, out, _ = run(capsys, "mc-check", files("q.json", QUAD.to_json()), "--model", "RP")
    rep = json.loads(out)
    assert code == 0 and rep["violations"] == []
    assert {e["defect"] for e in rep["frames"]} == {0}


def test_mc_check_reports_a_bad_element(capsys, files):
    cfg = files("q.json", QUAD.to_json())
    element = files("e.json", build_mc_element(QUAD, PairingModel.CP).to_json())
    code, out, _ = run(capsys, "mc-check", cfg, "--model", "RP", "--element", element)
    rep = json.loads(out)
    assert code == 1 and rep["violations"]
    assert all("subdivisions" in v for v in rep["violations"])


def test_admissible_on_nonregular_fixture(capsys, files):
    code, out, _ = run(capsys, "admissible", files("n.json", NESTED.to_json()), files("s.json", NESTED_NONREGULAR))
    assert code == 0 and json.loads(out)["admissible"] is False


def test_input_errors_exit_2(capsys, files, tmp_path):
    code, _, err = run(capsys, "winding", str(tmp_path / "missing.json"))
    assert code == 2 and "missing.json" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "euler", str(bad))
    assert code == 2 and "bad.json" in err
    code, _, err = run(capsys, "winding", files("c.json", {"components": [[{"x": "0.5", "y": "1"}]]}))
    assert code == 2
    collinear = {"points": [{"id": f"p{i}", "x": str(i), "y": "0"} for i in range(3)]}
    code, _, err = run(capsys, "duality-check", files("l.json", collinear))
    assert code == 2 and "collinear" in err.lower()
    code, _, err = run(capsys, "codim2-check", files("big.json", fixtures_up_to(7)["random7-0"].to_json()))
    assert code == 2 and "max-points" in err


def test_render_refuses_unrealizable_web(capsys, files):
    n = files("n.json", NESTED.to_json())
    s = files("s.json", NESTED_NONREGULAR)
    code, _, err = run(capsys, "render", "web", n, s)
    assert code == 2 and "RenderRefused" in err
    g = files("g.json", dual_graph(Subdivision.from_json(NESTED_NONREGULAR, NESTED), NESTED).to_json())
    code, _, err = run(capsys, "render", "graph", g)
    assert code == 2


def test_svg_structure(capsys, files, tmp_path):
    q = files("q.json", QUAD.to_json())
    s = files("s.json", quad_diagonal().to_json())
    code, out, _ = run(capsys, "render", "subdivision", q, s)
    assert code == 0 and out.count('class="cell"') == 2 and out.count('class="internal"') == 1
    code, out, _ = run(capsys, "render", "web", q, s)
    assert out.count('class="vertex"') == 2 and out.count('class="edge"') == 1 and out.count('class="ray"') == 4
    bundle = line_bundle(ToricFan((Direction(1, 0), Direction(0, 1), Direction(-1, -1))), [-1, -1, -1])
    code, out, _ = run(capsys, "render", "bundle", files("b.json", bundle.to_json()))
    assert out.count("<polyline") == 1 and out.count('class="origin"') == 1
    path = render_svg(ClosedPLCurve.from_json(SQUARE), tmp_path / "sq.svg")
    assert path.read_text().startswith("<svg")


def test_render_svg_refuses_graph_without_realization(tmp_path):
    g = dual_graph(Subdivision.from_json(NESTED_NONREGULAR, NESTED), NESTED)
    with pytest.raises(RenderRefused):
        render_svg(g, tmp_path / "g.svg")


@pytest.mark.parametrize(
    "argv",
    [
        ["subdivide", "{cfg}"],
        ["duality-check", "{cfg}"],
        ["codim2-check", "{cfg}"],
        ["mc-build", "{cfg}", "--model", "CP"],
        ["mc-check", "{cfg}", "--model", "CP"],
        ["bar", "{cfg}", "--path", "p0,p3,p1"],
        ["render", "subdivision", "{cfg}", "{sub}"],
        ["winding-sweep", "--count", "30", "--seed", "7"],
    ],
)
def test_reports_are_byte_identical(argv, files, tmp_path, monkeypatch):
    cfg = files("n.json", NESTED.to_json())
    sub = files("s.json", NESTED_NONREGULAR)
    args = [a.format(cfg=cfg, sub=sub) for a in argv]
    outs = []
    for i, threads in enumerate(["1", "2"]):
        monkeypatch.setenv("INFRARED_THREADS", threads)
        target = tmp_path / f"out{i}"
        assert main(args + ["-o", str(target)]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_round_trips():
    for cfg in fixtures_up_to(6).values():
        assert PointConfig.from_json(json.loads(json.dumps(cfg.to_json()))) == cfg
    element = build_mc_element(NESTED, PairingModel.RP)
    assert AlgebraElement.from_json(json.loads(json.dumps(element.to_json()))) == element
    curve = ClosedPLCurve.from_json(SQUARE)
    assert ClosedPLCurve.from_json(curve.to_json()) == curve
    assert Point.from_json(["1/3", "-2"]) == Point("1/3", -2)

import json

import pytest

from depthcut import formats, render
from depthcut.cli import main
from depthcut.exact import Q
from depthcut.geom import Triangle3


def P(*v):
    return tuple(Q(x) for x in v)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def triple(tmp_path, capsys):
    path = tmp_path / "triple.json"
    assert run(capsys, "gen", "cyclic-triple", "-o", path)[0] == 0
    return path


def test_gen_to_stdout(capsys):
    code, out, _ = run(capsys, "gen", "random", "--n", 5, "--seed", 2)
    assert code == 0
    doc = json.loads(out)
    assert len(doc["objects"]) == 5


def test_cut_pipeline_and_outputs(tmp_path, capsys, triple):
    frags, stats, obj = tmp_path / "f.json", tmp_path / "s.json", tmp_path / "f.obj"
    code, _, _ = run(capsys, "cut", triple, "-o", frags, "--stats", stats, "--export-obj", obj, "--triangulate")
    assert code == 0
    st = json.loads(stats.read_text())
    assert st["oracle_ok"] and st["n"] == 3
    out = formats.load_objects(frags)
    assert all(len(f.pts) == 3 for f in out)
    assert obj.read_text().count("\nf ") + obj.read_text().startswith("f ") == len(out)
    assert run(capsys, "verify", frags)[0] == 0
    code, out, _ = run(capsys, "order", frags)
    assert code == 0 and json.loads(out)["acyclic"]


def test_cut_lines_with_cutset(tmp_path, capsys):
    scene, cs = tmp_path / "w.json", tmp_path / "cs.json"
    run(capsys, "gen", "weave3", "-o", scene)
    code, _, _ = run(capsys, "cut", scene, "--algorithm", "lines", "--cutset", cs, "-o", tmp_path / "o.json")
    assert code == 0
    assert json.loads(cs.read_text())["kind"] == "cutset"


def test_order_reports_cycle(capsys, triple):
    code, out, _ = run(capsys, "order", triple)
    assert code == 0
    doc = json.loads(out)
    assert doc["acyclic"] is False and len(doc["cycle"]) == 3


def test_verify_semantics(capsys, triple):
    # the generator records the cycle it built, so the scene verifies
    assert run(capsys, "verify", triple)[0] == 0
    assert run(capsys, "verify", triple, "--acyclic")[0] == 3


def test_verify_gadget(tmp_path, capsys):
    path = tmp_path / "g.json"
    run(capsys, "gen", "fig3", "-o", path)
    code, out, _ = run(capsys, "verify", path)
    assert code == 0 and json.loads(out)["fig3"]["plane_cut"]


def test_render_modes(tmp_path, capsys, triple):
    frags = tmp_path / "f.json"
    run(capsys, "cut", triple, "-o", frags)
    code, out, _ = run(capsys, "render", frags, "--mode", "diff", "--width", 48, "--height", 48)
    assert code == 0 and json.loads(out)["differing"] == 0
    ppm = tmp_path / "p.ppm"
    assert run(capsys, "render", frags, "--width", 30, "--height", 20, "-o", ppm)[0] == 0
    assert render.read_ppm(ppm.read_bytes())[:2] == (30, 20)
    # a cyclic scene has no painter order
    assert run(capsys, "render", triple, "-o", ppm)[0] == 3


def test_render_diff_mismatch(tmp_path, capsys, monkeypatch):
    path = tmp_path / "s.json"
    run(capsys, "gen", "random", "--n", 4, "-o", path)
    real = render.painter

    def blank(objs, *a, **kw):
        r = real(objs, *a, **kw)
        r.winner = [-1] * len(r.winner)
        return r

    monkeypatch.setattr(render, "painter", blank)
    assert run(capsys, "render", path, "--mode", "diff", "--width", 16, "--height", 16)[0] == 3


def test_invalid_inputs(tmp_path, capsys, triple):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "verify", bad)[0] == 2
    assert run(capsys, "cut", tmp_path / "missing.json")[0] == 2
    # lines algorithm on triangles
    assert run(capsys, "cut", triple, "--algorithm", "lines")[0] == 2
    # two crossing triangles
    a = Triangle3(P(0, 0, 0), P(2, 0, 0), P(0, 2, 2), id="a")
    b = Triangle3(P(0, 0, 2), P(2, 0, 2), P(0, 2, 0), id="b")
    inter = tmp_path / "i.json"
    formats.dump({"objects": [formats.object_to_json(a), formats.object_to_json(b)]}, inter)
    assert run(capsys, "verify", inter)[0] == 2
    assert run(capsys, "cut", inter)[0] == 2


def test_bench_csv_and_fit(tmp_path, capsys):
    fit = tmp_path / "fit.json"
    code, out, err = run(capsys, "bench", "--families", "parallel-segments", "--n", 8, 16, "--fit", fit)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("family,algorithm,n,K") and len(lines) == 3
    assert json.loads(fit.read_text())[0]["points"] == 2
    assert "slope" in err

import io
import json
import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

from conesurf import geom
from conesurf.cli import dumps, run
from conesurf.repvariety import parse_marking
from conesurf.surface import parse_surface

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

# argv (relative to tests/data) -> golden file; regenerate with CONESURF_REGEN_GOLDEN=1
CASES = {
    "invariants_tetra": ["invariants", "tetra.json"],
    "invariants_torus_text": ["invariants", "torus.json", "--output", "text"],
    "validate_pillow": ["validate", "pillow.json", "--marking", "pillow.marking.json",
                        "--beta", "-0.5,-0.5,-0.5,-0.5"],
    "holonomy_torus_a": ["holonomy", "torus.json", "--loop", "torus.a.loop.json"],
    "holonomy_torus_b": ["holonomy", "torus.json", "--path", "t0:0,t1:0", "--base", "t0"],
    "develop_torus": ["develop", "torus.json", "--path", "t0:1,t1:0"],
    "classify_pillow": ["classify", "pillow.json", "--marking", "pillow.marking.json",
                        "--beta", "-0.5,-0.5,-0.5,-0.5"],
    "classify_cube": ["classify", "cube.json", "--marking", "cube.marking.json",
                      "--beta", ",".join(["-0.25"] * 8)],
    "subdivide_pillow": ["subdivide", "pillow.json", "--edge", "t0:0", "--t", "0.25",
                         "--remap", "pillow.marking.json"],
    "dm_check": ["dm-check", "--beta", "-0.25,-0.25,-0.75,-0.75"],
    "cohom_commutator": ["cohom", "--generators", "2", "--rho", "1j,-1",
                         "--relators", "x1 x2 x1^-1 x2^-1"],
}


def cli(argv, cwd=DATA):
    out, err = io.StringIO(), io.StringIO()
    old = os.getcwd()
    os.chdir(cwd)
    try:
        code = run(argv, out, err)
    finally:
        os.chdir(old)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    code, out, _ = cli(CASES[name])
    assert code == 0
    path = GOLDEN / f"{name}.out"
    if os.environ.get("CONESURF_REGEN_GOLDEN"):
        path.write_text(out, encoding="utf-8")
    assert out == path.read_text(encoding="utf-8")
    assert cli(CASES[name])[1] == out


def test_invariants_values():
    doc = json.loads(cli(["invariants", "tetra.json"])[1])
    assert doc["chi"] == 2 and doc["genus"] == 0
    assert abs(doc["area"] - math.sqrt(3)) < 1e-9
    assert len(doc["vertices"]) == 4
    for v in doc["vertices"]:
        assert abs(v["beta"] + 0.5) < 1e-12 and abs(v["theta"] - math.pi) < 1e-12
    assert abs(doc["gauss_bonnet_residual"]) < 1e-9


def test_classify_values():
    doc = json.loads(cli(CASES["classify_pillow"])[1])
    assert list(doc) == ["g", "n", "torus", "proj"]
    assert doc["g"] == 0 and doc["n"] == 4 and doc["torus"] == [] and len(doc["proj"]) == 2


def test_holonomy_values():
    a = json.loads(cli(CASES["holonomy_torus_a"])[1])
    b = json.loads(cli(CASES["holonomy_torus_b"])[1])
    assert a["u"] == [1, 0] and a["v"] == [1, 0] and a["fixed_point"] is None
    assert b["v"] == [0, -1]


def test_small_commands():
    assert json.loads(cli(CASES["dm_check"])[1]) == {"satisfied": True}
    assert json.loads(cli(["dm-check", "--beta", "-0.1,-0.1,-0.9,-0.9"])[1]) == {"satisfied": False}
    doc = json.loads(cli(CASES["cohom_commutator"])[1])
    assert (doc["z1"], doc["b1"], doc["h1"]) == (1, 1, 0)
    doc = json.loads(cli(["cohom", "--generators", "3", "--rho", "1,1,1"])[1])
    assert doc["h1"] == 3


def test_subdivide_output_parses():
    doc = json.loads(cli(CASES["subdivide_pillow"])[1])
    s = parse_surface(json.dumps(doc["surface"]))
    m = parse_marking(json.dumps(doc["marking"]))
    assert len(s.charts) == 6 and doc["new_vertex"] in {v.id for v in s.vertex_classes}
    assert m.n == 4


def test_exit_codes(tmp_path):
    assert cli([])[0] == 2
    assert cli(["frobnicate"])[0] == 2
    assert cli(["invariants"])[0] == 2
    assert cli(["cohom", "--generators", "2", "--rho", "1j"])[0] == 2
    assert cli(["subdivide", "pillow.json", "--edge", "zzz"])[0] == 2
    bad = tmp_path / "open.json"
    doc = json.loads((DATA / "torus.json").read_text())
    doc["gluings"].pop()
    bad.write_text(json.dumps(doc))
    code, out, err = cli(["validate", str(bad)])
    assert code == 1 and out == "" and "OpenSurface" in err
    (tmp_path / "junk.json").write_text("{nope")
    assert cli(["invariants", str(tmp_path / "junk.json")])[0] == 1
    assert cli(["invariants", str(tmp_path / "missing.json")])[0] == 1
    # wrong orders are cross-checked against the measured cone angles
    code, _, err = cli(["classify", "pillow.json", "--marking", "pillow.marking.json",
                        "--beta", "-0.25,-0.25,-0.75,-0.75"])
    assert code == 1
    code, _, err = cli(["classify", "torus.json", "--marking", "pillow.marking.json",
                        "--beta", "-0.5,-0.5,-0.5,-0.5"])
    assert code == 1
    code, _, err = cli(["dm-check", "--beta", "-0.5,-0.5,-0.5,-0.6"])
    assert code == 1 and "HypothesisViolated" in err
    code, out, _ = cli(["validate", "pillow.json", "--marking", "pillow.marking.json",
                        "--beta", "-0.5,-0.5,-0.5,-0.25"])
    assert code == 1 and json.loads(out)["marking"]["passed"] is False


def test_batch(tmp_path):
    for name in ("tetra.json", "torus.json", "pillow.json", "pillow.marking.json"):
        (tmp_path / name).write_text((DATA / name).read_text())
    code, out, _ = cli(["invariants", "--batch", str(tmp_path)])
    doc = json.loads(out)
    assert code == 0 and sorted(doc["files"]) == ["pillow.json", "tetra.json", "torus.json"]
    (tmp_path / "bad.json").write_text("[]")
    code, out, _ = cli(["validate", "--batch", str(tmp_path)])
    assert code == 1 and "error" in json.loads(out)["files"]["bad.json"]


def test_build_writes_round_trippable_files(tmp_path):
    code, out, _ = cli(["build", "cube", "--edge", "2", "--out-dir", str(tmp_path)])
    assert code == 0
    doc = json.loads(out)
    s = parse_surface(Path(doc["surface"]).read_bytes())
    assert abs(s.charts["t00"].edge_length(0) - 2) < 1e-12
    m = parse_marking(Path(doc["marking"]).read_text())
    assert m.n == 8
    code, out, _ = cli(["build", "torus", "--periods", "2,0,0.5,1", "--out-dir", str(tmp_path)])
    loops = json.loads(out)["loops"]
    code, out, _ = cli(["holonomy", str(tmp_path / "flat_torus.json"), "--loop", loops["b"]])
    assert json.loads(out)["v"] == [-0.5, -1]
    assert cli(["build", "double_polygon", "--polygon", "0,0,1,0,0.5,-1", "--out-dir", str(tmp_path)])[0] == 1


def test_develop_svg(tmp_path):
    svg = tmp_path / "chain.svg"
    code, _, _ = cli(["develop", "torus.json", "--path", "t0:1,t1:0", "--svg", str(svg),
                      "--svg-scale", "50"])
    assert code == 0 and svg.read_text().count("<polygon") == 3


def test_tolerance_env(monkeypatch):
    monkeypatch.setenv("CONESURF_TOL", "1e-6")
    before = geom.get_tol()
    assert cli(["invariants", "tetra.json"])[0] == 0
    assert geom.get_tol() == before
    monkeypatch.setenv("CONESURF_TOL", "-3")
    assert cli(["invariants", "tetra.json"])[0] == 2


def test_dumps_format():
    text = dumps({"b": 0.1, "a": [1, -0.0, float("nan")], "z": 1 + 2j})
    assert text == '{\n  "b": 0.10000000000000001,\n  "a": [1, 0, null],\n  "z": [1, 2]\n}'


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "conesurf", "dm-check", "--beta", "-0.5,-0.5,-0.5,-0.5"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout) == {"satisfied": True}

import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from regtrace import __version__
from regtrace.cli import main


def run(tmp_path, *args, name="out"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_generate(tmp_path):
    code, out = run(tmp_path, "generate", "--kind", "petersen")
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["vertex_count"] == 10 and len(doc["edges"]) == 15
    assert set(doc) == {"name", "vertex_count", "edges"}

    code, out = run(tmp_path, "generate", "--kind", "cycle", "--n", "7")
    assert json.loads(out.read_text())["vertex_count"] == 7

    args = ("generate", "--kind", "random-regular", "--n", "10", "--degree", "3", "--seed", "7")
    _, a = run(tmp_path, *args, name="a.json")
    _, b = run(tmp_path, *args, name="b.json")
    assert a.read_bytes() == b.read_bytes()
    assert [p.name for p in tmp_path.iterdir() if p.name.endswith(".tmp")] == []


def test_census(tmp_path):
    code, out = run(tmp_path, "census", "--kind", "complete", "--n", "4", "--l-max", "6")
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 7
    assert rows[3] == {"l": "3", "p_l": "24", "gp_l": "24"}

    _, out = run(tmp_path, "census", "--kind", "cycle", "--n", "5", "--l-max", "5")
    row5 = read_csv(out)[5]
    assert row5["gp_l"] == "10" and row5["p_l"] == "10"

    _, out = run(tmp_path, "census", "--kind", "petersen", "--l-max", "4")
    assert {r["gp_l"] for r in read_csv(out)} == {"0"}


def test_census_json_and_graph_file(tmp_path):
    _, gfile = run(tmp_path, "generate", "--kind", "hypercube", "--n", "3", name="cube.json")
    code, out = run(tmp_path, "census", "--graph", str(gfile), "--l-max", "4", "--format", "json")
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["schema_version"] == 1 and doc["version"] == __version__
    assert doc["config"]["graph"] == str(gfile)
    assert doc["census"][4] == {"l": 4, "p_l": 168, "gp_l": 48}


def test_verify_k4_passes(tmp_path):
    code, out = run(tmp_path, "verify", "--kind", "complete", "--n", "4")
    assert code == 0
    report = json.loads(out.read_text())
    assert report["passed"]
    names = [s["name"] for s in report["stages"]]
    assert names == ["master_identity", "homotopy_census", "spectrum", "gp_inversion",
                     "trace_formula", "ahumada"]
    assert report["config"]["l_max"] == 12 and report["config"]["t_values"] == [0.25, 0.5, 1.0]


def test_verify_loose_eigensolver_fails(tmp_path):
    code, out = run(tmp_path, "verify", "--kind", "petersen", "--eigen-tol", "1e-2",
                    "--budget-paths", "1000")
    assert code == 1
    report = json.loads(out.read_text())
    stage = {s["name"]: s for s in report["stages"]}["gp_inversion"]
    assert not stage["passed"]
    assert stage["error"].startswith("NotNearInteger")


def test_verify_cycle_runs_polygon_stage(tmp_path):
    code, out = run(tmp_path, "verify", "--kind", "cycle", "--n", "5")
    assert code == 0
    stages = {s["name"]: s for s in json.loads(out.read_text())["stages"]}
    assert stages["polygon_identity"]["passed"]


def test_density(tmp_path):
    code, out = run(tmp_path, "density", "--kind", "petersen", "--l-trunc", "12", "--grid", "201")
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 201
    s = np.array([float(r["s"]) for r in rows])
    rho = np.array([float(r["rho_con"]) for r in rows])
    assert np.all(np.abs(s) < 2 * np.sqrt(2))
    assert abs(np.trapezoid(rho, s) - 10) < 1e-3


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kind": "complete", "n": 4, "l_max": 3}))
    code, out = run(tmp_path, "census", "--config", str(cfg))
    assert code == 0 and len(read_csv(out)) == 4
    code, out = run(tmp_path, "census", "--config", str(cfg), "--l-max", "5")
    assert len(read_csv(out)) == 6
    cfg.write_text(json.dumps({"colour": "red"}))
    assert main(["census", "--config", str(cfg)]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["census"],
        ["census", "--kind", "petersen", "--graph", "x.json"],
        ["census", "--graph", "/nonexistent/graph.json"],
        ["census", "--kind", "random-regular", "--n", "7", "--degree", "3"],
        ["verify", "--kind", "petersen", "--format", "csv"],
        ["census", "--kind", "petersen", "--budget-paths", "0"],
        ["density", "--kind", "petersen", "--grid", "1"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_bad_graph_document(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "p", "vertex_count": 4, "edges": [[0, 1], [1, 2], [2, 0], [0, 3]]}))
    assert main(["census", "--graph", str(bad)]) == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "regtrace", "census", "--kind", "complete", "--n", "4",
                           "--l-max", "3"], capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[-1] == "3,24,24"

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from scrollforge.cli import main
from scrollforge.scroll import RuledQuinticSurface, canonical_scroll


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_examples(capsys):
    code, out, _ = run(capsys, "classify", "--q", "7", "--h", "1,0,0,0,0,0,0")
    assert code == 0
    assert json.loads(out) == {"hyperplane": [1, 0, 0, 0, 0, 0, 0], "type": "Conic", "g": 1, "generators": ["inf"], "span_dim": 2}
    code, out, _ = run(capsys, "classify", "--q", "7", "--h", "0,0,0,0,1,0,0")
    assert code == 0
    assert json.loads(out)["type"] == "TwistedCubic" and json.loads(out)["g"] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--q", "7", "--h", "0,0,0,0,0,0,0"],
        ["classify", "--q", "7", "--h", "1,0,0"],
        ["classify", "--q", "7", "--h", "1,0,0,0,0,0,9"],
        ["classify", "--q", "7"],
        ["census", "--q", "6"],
        ["construct", "--q", "4"],
        ["construct", "--q", "11"],
        ["verify", "--q", "7", "--theorem", "no-such-check"],
        ["census", "--q", "7", "--workers", "0"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_construct(capsys):
    code, out, _ = run(capsys, "construct", "--q", "7")
    info = json.loads(out)
    assert code == 0
    assert info["points"] == 64 and info["generators"] == 8
    assert info["field"] == {"p": 7, "k": 1, "modulus": [0, 1]}


def test_dump_round_trip(tmp_path, capsys):
    path = tmp_path / "scroll.json"
    code, out, _ = run(capsys, "dump", "--q", "8", "--out", str(path))
    assert code == 0 and out == ""
    data = json.loads(path.read_text())
    V = RuledQuinticSurface.from_json(data)
    assert V.points == canonical_scroll(8).points
    assert len(data["points"]) == 81


def test_census_formats_and_worker_independence(tmp_path, capsys):
    bodies = []
    for workers in ("1", "2"):
        path = tmp_path / f"c{workers}.json"
        assert main(["census", "--q", "7", "--workers", workers, "--out", str(path)]) == 0
        rep = json.loads(path.read_text())
        rep.pop("wall_time_ms")
        bodies.append(json.dumps(rep))
    assert bodies[0] == bodies[1]
    code, out, _ = run(capsys, "census", "--q", "7", "--format", "md")
    assert code == 0 and "| quintic | 115248 |" in out


def test_verify_selected(capsys):
    code, out, _ = run(capsys, "verify", "--q", "7", "--theorem", "cubics-pairwise,generators-independent", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["theorem,status", "cubics-pairwise,pass", "generators-independent,pass"]
    code, out, _ = run(capsys, "verify", "--q", "7", "--theorem", "nucleus", "--theorem", "splash")
    data = json.loads(out)
    assert code == 0 and [r["name"] for r in data["results"]] == ["nucleus", "splash"]
    assert "no curve-misses-C quartic exists at odd q" in data["results"][0]["detail"]["note"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "scrollforge", "classify", "--q", "7", "--h", "0,0,0,0,0,0,0"], capture_output=True, text=True)
    assert res.returncode == 2
    assert "zero vector" in res.stderr

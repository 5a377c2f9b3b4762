from __future__ import annotations

import json
import subprocess
import sys

import pytest

from quartic_values.cli import run


def test_analyze_writes_verified_json(tmp_path, capsys):
    out = tmp_path / "out.json"
    assert run(["analyze", "(x^2-2*y^2)^2 + x", "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["verdict"]["tag"] == "UnboundedBelow"
    assert "verdict:    UnboundedBelow" in capsys.readouterr().out
    assert run(["verify", str(out)]) == 0


def test_verify_rejects_tampered_report(tmp_path, capsys):
    out = tmp_path / "out.json"
    run(["analyze", "(x^2-2*y^2)^2 + x", "--json", str(out)])
    data = json.loads(out.read_text())
    data["certificate"]["points"][-1][2] = "5"
    out.write_text(json.dumps(data))
    assert run(["verify", str(out)]) == 4
    assert "recorded value mismatch" in capsys.readouterr().err


def test_exit_codes_for_bad_input(tmp_path, capsys):
    assert run(["analyze", "x^5"]) == 3
    assert run(["analyze", "x^^2"]) == 2
    assert run(["analyze"]) == 2
    assert run(["density", "x^2+y^2", "--N", ""]) == 2
    assert run(["density", "x^2+y^2", "--N", "10,abc"]) == 2
    assert run(["witness", "x^4-y^4", "--below", "lots"]) == 2
    assert run(["verify", str(tmp_path / "missing.json")]) == 2
    assert run(["frobnicate"]) == 2
    capsys.readouterr()


def test_file_input(tmp_path, capsys):
    src = tmp_path / "poly.txt"
    src.write_text("x^4 + y^4 + x\n")
    assert run(["analyze", "--file", str(src)]) == 0
    assert "SparseValues(Sqrt)" in capsys.readouterr().out


def test_witness_below_target(tmp_path, capsys):
    out = tmp_path / "w.json"
    assert run(["witness", "(x^2-2*y^2)^2 + x", "--below", "-1000000", "--json", str(out)]) == 0
    pts = json.loads(out.read_text())["certificate"]["points"]
    assert int(pts[-1][2]) < -(10 ** 6)
    assert [-239, 169, "-238"] in pts
    capsys.readouterr()


def test_density_csv_and_class(capsys):
    assert run(["density", "x^2+y^2", "--N", "1000,10000"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "N,count,exhaustive"
    assert [ln.split(",")[0] for ln in lines[1:3]] == ["1000", "10000"]
    assert lines[3] == "class: LandauLogHalf"
    assert run(["density", "x^4+y^4", "--N", "10000"]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "class: Sqrt"


def test_oracle_summary(capsys):
    assert run(["oracle", "x^2+y^2", "--box", "50", "--range", "100"]) == 0
    out = capsys.readouterr().out
    # 44 distinct values, 43 of them positive
    assert "44 distinct values, 43 in [1, 100], exhaustive=True" in out


def test_plots_are_written(tmp_path, capsys):
    pytest.importorskip("matplotlib")
    a, b = tmp_path / "o.png", tmp_path / "d.png"
    assert run(["oracle", "x^2+y^2", "--box", "20", "--range", "200", "--plot", str(a)]) == 0
    assert run(["density", "x^2+y^2", "--N", "100,1000", "--plot", str(b)]) == 0
    for p in (a, b):
        assert p.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    capsys.readouterr()


def test_json_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(["analyze", "x*y*(x*y+1)", "--json", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "quartic_values.cli", "analyze", "x^5"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 3
    assert "unsupported input" in proc.stderr

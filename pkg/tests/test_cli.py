import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qutrit_bloch.bloch import decompose
from qutrit_bloch.cli import TOL_ENV, run
from qutrit_bloch.io import dumps, read_trajectory_csv, rho_dict, state_dict, write_state
from qutrit_bloch.bloch import QutritCoefficients


@pytest.fixture
def files(tmp_path, example_rho):
    paths = {
        "mixed": tmp_path / "mixed.json",
        "example": tmp_path / "example.json",
        "examplerho": tmp_path / "examplerho.json",
        "bad": tmp_path / "bad.json",
        "ket1": tmp_path / "ket1.json",
        "ket2": tmp_path / "ket2.json",
        "rest": tmp_path / "rest.json",
        "d4": tmp_path / "d4.json",
    }
    write_state(paths["mixed"], QutritCoefficients((1 / 3, 1 / 3, 1 / 3)))
    write_state(paths["example"], decompose(example_rho))
    paths["examplerho"].write_text(dumps(rho_dict(example_rho)))
    write_state(paths["bad"], QutritCoefficients((1, 0, 0), (0.1, 0, 0)))
    write_state(paths["ket1"], QutritCoefficients((1, 0, 0)))
    write_state(paths["ket2"], QutritCoefficients((0, 1, 0)))
    write_state(paths["rest"], QutritCoefficients((0, 0.5, 0.5)))
    paths["d4"].write_text(dumps(rho_dict(np.eye(4) / 4)))
    return paths


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_valid_and_invalid(capsys, files):
    code, out, _ = call(capsys, "check", files["mixed"])
    assert code == 0 and "verdict: valid" in out
    code, out, _ = call(capsys, "check", files["mixed"], "--format", "json")
    rep = json.loads(out)
    assert rep["overall"] and all(e["pass"] for e in rep["entries"])
    code, out, _ = call(capsys, "check", files["bad"])
    assert code == 1 and "minor{1,2}" in out and "FAIL" in out


def test_check_qudit_is_labelled(capsys, files):
    code, out, _ = call(capsys, "check", files["d4"], "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["scope"] == "necessary conditions only" and len(rep["entries"]) == 16
    code, out, _ = call(capsys, "check", files["d4"])
    assert "necessary conditions only" in out


def test_tolerance_env(capsys, files, monkeypatch):
    monkeypatch.setenv(TOL_ENV, "0.02")
    code, out, _ = call(capsys, "check", files["bad"])
    assert code == 0
    monkeypatch.setenv(TOL_ENV, "lots")
    code, _, err = call(capsys, "check", files["bad"])
    assert code == 2 and TOL_ENV in err


def test_decompose_example(capsys, files):
    code, out, _ = call(capsys, "decompose", "--rho", files["examplerho"], "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["omega"] == pytest.approx([0.25, 0.5, 0.25], abs=1e-12)
    assert rep["relative_lengths"] == pytest.approx([1, 1, 1], abs=1e-12)
    assert rep["radii"] == pytest.approx([0.75, 0.5, 0.75], abs=1e-12)
    assert abs(rep["Phi"]) <= 1e-12 and rep["purity"] == pytest.approx(1, abs=1e-12)
    code, out, _ = call(capsys, "decompose", files["example"])
    assert code == 0 and out.startswith("d: 3") and "radii: 0.75" in out


def test_decompose_usage(capsys, files):
    assert call(capsys, "decompose")[0] == 2
    assert call(capsys, "decompose", files["example"], "--rho", files["examplerho"])[0] == 2
    code, _, err = call(capsys, "decompose", "--rho", files["example"])
    assert code == 2 and "rho" in err


def test_decompose_then_reconstruct(capsys, files, tmp_path, example_rho):
    out_path = tmp_path / "dec.json"
    assert call(capsys, "decompose", "--rho", files["examplerho"], "--format", "json", "--out", out_path)[0] == 0
    code, out, _ = call(capsys, "reconstruct", out_path, "--format", "json")
    rho = np.array([[complex(*z) for z in row] for row in json.loads(out)["rho"]])
    assert code == 0 and np.max(np.abs(rho - example_rho)) <= 1e-12
    code, out, _ = call(capsys, "reconstruct", out_path)
    assert code == 0 and len(out.splitlines()) == 3


def test_sample_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert call(capsys, "sample", "--seed", 5, "--count", 20, "--format", "json", "--out", a)[0] == 0
    assert call(capsys, "sample", "--seed", 5, "--count", 20, "--format", "json", "--out", b, "--workers", 2)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert len(doc["states"]) == 20
    code, out, _ = call(capsys, "check", a)
    assert code == 2  # a sample file is not a single state
    assert call(capsys, "sample", "--d", 4, "--count", 3, "--format", "json", "--out", b)[0] == 0
    assert json.loads(b.read_text())["states"][0]["d"] == 4
    assert call(capsys, "sample", "--d", 9)[0] == 2


def test_evolve_example_amplitude(capsys, files, tmp_path):
    out = tmp_path / "t.csv"
    code, _, _ = call(capsys, "evolve", files["example"], "--generator", "A12", "--theta-max", 6.2832,
                      "--steps", 257, "--out", out)
    assert code == 0
    data = read_trajectory_csv(out)
    theta = data["theta"]
    design = np.column_stack([np.ones_like(theta), np.sin(2 * theta), np.cos(2 * theta)])
    for col in ("R13", "R23"):
        (off, s, c), *_ = np.linalg.lstsq(design, data[col], rcond=None)
        assert 2 * math.hypot(s, c) == pytest.approx(math.sqrt(7) / 4, abs=1e-9)
        assert off == pytest.approx(0.625, abs=1e-9)


def test_evolve_formats_and_errors(capsys, files):
    code, out, _ = call(capsys, "evolve", files["example"], "--generator", "C12", "--theta-max", 1, "--steps", 3)
    assert code == 0 and out.splitlines()[0].startswith("theta,omega1")
    code, out, _ = call(capsys, "evolve", files["example"], "--generator", "B13", "--theta-max", 1, "--steps", 3,
                        "--format", "json")
    assert code == 0 and len(json.loads(out)["rows"]) == 3
    assert call(capsys, "evolve", files["example"], "--generator", "O1", "--theta-max", 1, "--steps", 3)[0] == 2
    assert call(capsys, "evolve", files["example"], "--generator", "Q7", "--theta-max", 1, "--steps", 3)[0] == 2
    assert call(capsys, "evolve", files["bad"], "--generator", "A12", "--theta-max", 1, "--steps", 3)[0] == 1


def test_ortho(capsys, files):
    code, out, _ = call(capsys, "ortho", files["ket1"], files["ket2"], "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["orthogonal"] and rep["verdicts"]["pure_pure"]
    assert rep["via_radii"] == pytest.approx(0)
    assert call(capsys, "ortho", files["ket1"], files["ket1"])[0] == 1
    assert call(capsys, "ortho", files["rest"], files["ket1"])[0] == 0
    assert call(capsys, "ortho", files["mixed"], files["rest"])[0] == 2


def test_table(capsys):
    code, out, _ = call(capsys, "table")
    assert code == 0 and "2iC12" in out and len(out.splitlines()) == 11
    code, out, _ = call(capsys, "table", "--format", "json")
    doc = json.loads(out)
    assert doc["rows"][0]["cells"][1] == "2iC12"


def test_usage_errors(capsys, files, tmp_path):
    assert call(capsys, "frobnicate")[0] == 2
    assert call(capsys, "check", files["mixed"], "--bogus")[0] == 2
    assert call(capsys, "check", tmp_path / "missing.json")[0] == 2
    bad = tmp_path / "broken.json"
    bad.write_text('{"coefficients": {"omega": [1, 0, 0], "alpha": [0, 0], "beta": [0, 0, 0]}}')
    code, _, err = call(capsys, "check", bad)
    assert code == 2 and "coefficients.alpha" in err


def test_selftest_quick(capsys):
    code, out, _ = call(capsys, "selftest", "--quick", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] == 11 and doc["failed"] == 0


def test_console_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "qutrit_bloch.cli", "check", str(files["mixed"])],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "verdict: valid" in proc.stdout

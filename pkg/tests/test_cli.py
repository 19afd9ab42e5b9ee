import csv
import json
import subprocess
import sys

import pytest

from dynfractal.cli import CSV_COLUMNS, main


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def quadric_spec(tmp_path):
    return write(tmp_path / "quadric.json", {"kind": "koch", "motif": "quadric", "k": 3})


def test_generate(tmp_path, quadric_spec):
    out = tmp_path / "curve.json"
    assert main(["generate", "--config", quadric_spec, "--out", str(out), "--svg"]) == 0
    curve = json.loads(out.read_text())
    assert len(curve["vertices"]) == 513
    assert out.with_suffix(".svg").read_text().startswith("<svg")


def test_generate_zero_generation(tmp_path):
    out = tmp_path / "c.json"
    assert main(["generate", "--spec", '{"kind": "koch", "k": 0}', "--out", str(out)]) == 0
    assert json.loads(out.read_text())["vertices"] == [[0.0, 0.0], [1.0, 0.0]]


def test_generate_bad_motif(capsys):
    code = main(["generate", "--spec", '{"kind": "koch", "motif": [[0.1, 0], [1, 0]], "k": 1}'])
    assert code == 2
    assert "motif" in capsys.readouterr().err


def test_analyze_direct(tmp_path, quadric_spec):
    out = tmp_path / "run"
    code = main(["analyze", quadric_spec, "--generations", "1:12", "--out", str(out), "--svg"])
    assert code == 0
    rep = json.loads((out / "report.json").read_text())
    for c in "MHV":
        assert rep["covers"][c]["dimension"] == pytest.approx(1.5, abs=0.01)
    assert rep["classification"]["entirely_fractal"] is True
    assert rep["config"]["generations"] == [1, 12]
    assert rep["input"]["kind"] == "koch"
    with open(out / "series.csv") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 13
    assert (out / "series.svg").exists()


def test_analyze_inverse_quadric(tmp_path):
    spec = write(tmp_path / "q.json", {"kind": "koch", "motif": "quadric", "k": 12})
    out = tmp_path / "inv"
    assert main(["analyze", spec, "--problem", "inverse", "--ratio", "1/3", "--samples", "8",
                 "--out", str(out)]) == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["covers"]["M"]["estimate"] == pytest.approx(1.4985, abs=0.02)
    assert rep["covers"]["V"]["estimate"] == pytest.approx(1.4979, abs=0.02)


def test_analyze_white_noise_graph(tmp_path, capsys):
    spec = write(tmp_path / "wn.json", {"kind": "white_noise"})
    assert main(["analyze", spec, "--problem", "inverse", "--model", "graph"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["model"] == "graph"
    assert rep["covers"]["M"]["estimate"] == pytest.approx(1.0, abs=0.05)
    assert rep["covers"]["H"]["estimate"] > 1.8


def test_analyze_rerun_from_emitted_config(tmp_path, quadric_spec):
    first = tmp_path / "a"
    main(["analyze", quadric_spec, "--generations", "2:9", "--out", str(first)])
    cfg = write(tmp_path / "cfg.json", json.loads((first / "report.json").read_text())["config"])
    second = tmp_path / "b"
    main(["analyze", quadric_spec, "--config", cfg, "--out", str(second)])
    assert (first / "report.json").read_text() == (second / "report.json").read_text()
    assert (first / "series.csv").read_text() == (second / "series.csv").read_text()


def test_analyze_curve_file(tmp_path):
    curve = tmp_path / "rw.json"
    assert main(["generate", "--spec", '{"kind": "random_walk", "n_points": 1024}',
                 "--out", str(curve)]) == 0
    assert main(["analyze", str(curve), "--model", "graph", "--levels", "2:10",
                 "--out", str(tmp_path / "r")]) == 0


def test_insufficient_data_exit(tmp_path):
    spec = write(tmp_path / "wn.json", {"kind": "white_noise", "n_points": 256})
    assert main(["analyze", spec, "--levels", "1:2"]) == 3


def test_invalid_config_exit(tmp_path, quadric_spec):
    assert main(["analyze", quadric_spec, "--ratio", "2"]) == 2
    assert main(["analyze", str(tmp_path / "missing.json")]) == 2
    bad = write(tmp_path / "bad.json", {"foo": 1})
    assert main(["analyze", bad]) == 2


def test_verify_builtin(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 8


def test_verify_gate_failure(tmp_path, quadric_spec):
    assert main(["verify", quadric_spec]) == 0
    assert main(["verify", quadric_spec, "--verify-tolerance", "0"]) == 4


def test_reproduce(tmp_path, capsys):
    out = tmp_path / "fig2.json"
    assert main(["reproduce", "fig2", "--out", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert {r["cover"] for r in obj["rows"]} == {"M", "H", "V"}
    assert all(abs(r["delta"]) < 1e-9 for r in obj["rows"])
    assert main(["reproduce", "table9"]) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dynfractal", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "dynfractal" in res.stdout

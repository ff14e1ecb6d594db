import csv
import io
import json
import math

import pytest

from su11ep.cli import main, parse_complex


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_complex():
    assert parse_complex("0.5-1.5i") == 0.5 - 1.5j
    assert parse_complex("-i") == -1j
    assert parse_complex("2") == 2


def test_spectrum_single_level(capsys):
    code, out, _ = run(capsys, ["spectrum", "--g", "0", "--levels", "1", "--truncation", "64"])
    rows = _csv(out)
    assert code == 0
    upper = [r for r in rows if float(r["im_eigenvalue"]) > 0]
    assert len(upper) == 1 and float(upper[0]["im_eigenvalue"]) == pytest.approx(0.5, abs=1e-12)
    assert rows[0]["branch"] == "ImaginaryPair"


def test_spectrum_above_ep(capsys):
    code, out, _ = run(capsys, ["spectrum", "--g", "1.3", "--levels", "1"])
    row = _csv(out)[0]
    assert code == 0 and row["branch"] == "Real" and row["level"] == "0"
    assert float(row["re_eigenvalue"]) == pytest.approx(math.sqrt(0.69) / 2, rel=1e-8)
    assert abs(float(row["im_eigenvalue"])) < 1e-8


def test_spectrum_figure_grid(capsys, tmp_path):
    out = tmp_path / "fig2.csv"
    code, _, _ = run(capsys, ["spectrum", "--g-min", "0", "--g-max", "2", "--g-step", "0.25",
                              "--truncation", "64", "--out", str(out)])
    rows = _csv(out.read_text())
    assert code == 0
    by_g = {}
    for r in rows:
        by_g.setdefault(float(r["g"]), set()).add(r["branch"])
    assert by_g[1.0] == {"DegenerateZero"}
    assert all(v == {"ImaginaryPair"} for g, v in by_g.items() if g < 1)
    assert all(v == {"Real"} for g, v in by_g.items() if g > 1)


def test_spectrum_config_errors(capsys):
    assert run(capsys, ["spectrum"])[0] == 2
    assert run(capsys, ["spectrum", "--g", "0.5", "--g-min", "0"])[0] == 2
    assert run(capsys, ["spectrum", "--g-min", "1", "--g-max", "0", "--g-step", "0.1"])[0] == 2
    assert run(capsys, ["spectrum", "--g", "0.5", "--truncation", "2"])[0] == 2


def test_potential(capsys):
    code, out, _ = run(capsys, ["potential", "--x-min", "-1", "--x-max", "1", "--points", "3"])
    rows = _csv(out)
    assert code == 0 and len(rows) == 15
    v = {(float(r["g"]), float(r["x"])): float(r["v"]) for r in rows}
    assert v[(1.0, 1.0)] == 0 and v[(1.0, -1.0)] == 0
    assert v[(0.3, 1.0)] == v[(0.3, -1.0)] < 0
    assert v[(1.7, 1.0)] == pytest.approx(0.5 * math.sqrt(1.89), rel=1e-15)
    signs = [math.copysign(1, v[(g, 1.0)]) if v[(g, 1.0)] else 0 for g in (0.3, 0.7, 1.0, 1.3, 1.7)]
    assert signs == [-1, -1, 0, 1, 1]


def test_potential_bad_range(capsys):
    assert run(capsys, ["potential", "--x-min", "1", "--x-max", "-1"])[0] == 2


def test_eigenfunction_json(capsys):
    code, out, _ = run(capsys, ["eigenfunction", "--n", "2", "--points", "3"])
    doc = json.loads(out)
    assert code == 0
    assert [c["text"] for c in doc["coefficients"]] == ["4", "0", "2i"]
    assert doc["coefficients"][2]["im"] == "2" and doc["coefficients"][2]["re"] == "0"
    assert len(doc["samples"]) == 3


def test_eigenfunction_bra_and_csv(capsys):
    code, out, _ = run(capsys, ["eigenfunction", "--n", "2", "--branch", "bra", "--points", "2"])
    assert json.loads(out)["polynomial"] == "4x^2 - 2i"
    code, out, _ = run(capsys, ["eigenfunction", "--n", "0", "--format", "csv", "--points", "1",
                                "--x-min", "0", "--x-max", "0"])
    row = _csv(out)[0]
    assert abs(complex(float(row["re_psi"]), float(row["im_psi"]))) == pytest.approx(math.pi ** -0.25)


def test_eigenfunction_bad_n(capsys):
    assert run(capsys, ["eigenfunction", "--n", "-1"])[0] == 2


def test_resonances(capsys):
    code, out, _ = run(capsys, ["resonances", "--levels", "2", "--points", "401", "--x-min", "-10",
                                "--x-max", "10"])
    rows = _csv(out)
    assert code == 0
    assert float(rows[0]["im_target"]) == 0.5
    assert float(rows[0]["deviation"]) < 1e-3


def test_resonances_bad_grid(capsys):
    assert run(capsys, ["resonances", "--points", "10"])[0] == 2
    assert run(capsys, ["resonances", "--theta", "0"])[0] == 2


def test_classical(capsys):
    code, out, _ = run(capsys, ["classical", "--p0", "1", "--every", "1000"])
    rows = _csv(out)
    assert code == 0 and len(rows) == 4
    assert float(rows[-1]["t"]) == pytest.approx(3.0)
    assert float(rows[-1]["re_x"]) == pytest.approx(10.01787, abs=1e-5)


def test_classical_errors(capsys):
    assert run(capsys, ["classical", "--dt", "0"])[0] == 2
    assert run(capsys, ["classical", "--frame", "transformed", "--g", "1.5"])[0] == 2
    assert run(capsys, ["classical", "--dt", "1e300", "--steps", "10", "--p0", "1e300"])[0] == 1


def test_json_format_and_determinism(capsys):
    argv = ["spectrum", "--g", "0.3", "--truncation", "32", "--format", "json"]
    a = run(capsys, argv)[1]
    b = run(capsys, argv)[1]
    assert a == b and json.loads(a)[0]["g"] == "0.29999999999999999"


def test_verify_truncation_gate(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, _, err = run(capsys, ["verify", "--truncation", "8", "--out", str(out)])
    rep = json.loads(out.read_text())
    assert code == 0 and rep["status"] == "pass"
    assert "eigenvalue_law_below_ep" in rep["skipped"]
    assert "skipped" in err


@pytest.mark.slow
def test_verify_eta_perturbation(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, _, _ = run(capsys, ["verify", "--truncation", "8", "--eta-perturbation", "1e-3",
                              "--out", str(out)])
    rep = json.loads(out.read_text())
    assert code == 1 and rep["failed"] == ["classical_gauge_identity"]

from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from lecert.cli import run

from .conftest import CORPUS


def _run(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_nu_brieskorn(capsys):
    code, out, _ = _run(capsys, "nu", CORPUS / "brieskorn_3_4.poly")
    assert code == 0 and out == "6\n"


def test_certify_example_one(capsys, tmp_path):
    out_json = tmp_path / "ex1.json"
    code, out, _ = _run(capsys, "certify", CORPUS / "ex1.poly", "--mode", "strict", "--json", out_json)
    assert code == 0
    assert out.startswith("verdict: EQUISINGULAR")
    d = json.loads(out_json.read_text())
    assert d["verdict"] == "EQUISINGULAR"
    assert d["run_config"]["mode"] == "strict"
    assert d["run_config"]["t_samples"] == ["0", "1", "1/2", "-2"]


def test_certify_inconclusive_exit_code(capsys):
    code, out, _ = _run(capsys, "certify", CORPUS / "nonconstant.poly")
    assert code == 2
    assert "reason: Lê numbers not constant" in out


def test_missing_file(capsys, tmp_path):
    code, out, err = _run(capsys, "certify", tmp_path / "missing.poly")
    assert code == 1 and out == ""
    assert err.startswith("lecert: error: cannot read") and err.count("\n") == 1


def test_parse_error_is_one_line(capsys, tmp_path):
    bad = tmp_path / "bad.poly"
    bad.write_text("z2^2 + $\n")
    code, _, err = _run(capsys, "parse", bad)
    assert code == 1
    assert err.startswith("lecert: error: 1:8") and err.count("\n") == 1


def test_usage_error_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["certify", str(CORPUS / "ex1.poly"), "--mode", "sloppy"])
    assert exc.value.code == 1


def test_json_to_stdout(capsys):
    code, out, _ = _run(capsys, "le", CORPUS / "ex1.poly", "--t", "1/2", "--cross-check", "--json", "-")
    d = json.loads(out)
    assert code == 0
    assert (d["lambda0"], d["lambda1"], d["slice_mu"], d["t"]) == (0, 6, 6, "1/2")
    assert d["run_config"]["extra"]["t"] == "1/2"


def test_global_flags_either_side(capsys):
    before = _run(capsys, "--seed", "3", "--json", "-", "nondegen", CORPUS / "ex2.poly", "--t", "1")
    after = _run(capsys, "nondegen", CORPUS / "ex2.poly", "--t", "1", "--seed", "3", "--json", "-")
    assert before == after
    assert json.loads(before[1])["run_config"]["seed"] == 3


def test_quiet(capsys):
    assert _run(capsys, "--quiet", "nu", CORPUS / "brieskorn_3_4.poly") == (0, "", "")


def test_nondegen_needs_t_for_families(capsys):
    code, _, err = _run(capsys, "nondegen", CORPUS / "ex1.poly")
    assert code == 1 and "--t" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["parse", "ex2.poly"],
        ["newton", "ex1.poly", "--t", "1"],
        ["admissible", "ex2.poly", "--mode", "strict"],
        ["le", "ex3.poly", "--a", "5"],
        ["certify", "ex2.poly"],
        ["probe", "ex1.poly", "--arcs", "4"],
    ],
)
def test_outputs_are_byte_identical(tmp_path, capsys, argv):
    argv = [str(CORPUS / a) if a.endswith(".poly") else a for a in argv]
    target, table = tmp_path / "out.json", tmp_path / "out.csv"
    extra = ["--csv", str(table)] if argv[0] == "probe" else []
    texts = []
    for _ in range(2):
        code, out, _ = _run(capsys, *argv, "--json", target, *extra)
        assert code in (0, 2)
        texts.append((out, target.read_bytes(), table.read_bytes() if extra else b""))
    assert texts[0] == texts[1]
    # atomic writes leave no temp files behind
    assert not [p for p in os.listdir(tmp_path) if p.endswith(".tmp")]


def test_probe_csv_header(tmp_path, capsys):
    target = tmp_path / "bs.csv"
    code, out, _ = _run(capsys, "probe", CORPUS / "briancon_speder.poly", "--probe-mode", "isolated",
                        "--arcs", "5", "--csv", target)
    assert code == 0
    assert target.read_text().splitlines()[0] == "arc_id,k,s,R1,R2,C1,C2"
    assert "R2: pass on" in out


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "lecert", "nu", str(CORPUS / "brieskorn_3_4.poly")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "6\n"

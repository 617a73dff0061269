import csv
import json
from pathlib import Path

import pytest

from gcx import cli

MANIFESTS = Path(__file__).resolve().parent.parent / "manifests"
CASES = [(cmd, suffix, code) for cmd in sorted(cli.COMMANDS)
         for suffix, code in (("ok", 0), ("false", 1), ("bad", 2))]


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out, json.loads(out)


@pytest.mark.parametrize("cmd,suffix,code", CASES)
def test_exit_code_contract(capsys, cmd, suffix, code):
    got, _, report = run_cli(capsys, cmd, "--manifest", str(MANIFESTS / f"{cmd}.{suffix}.gcx"))
    assert got == code
    assert report["schema"] == 1 and report["command"] == cmd
    if code == 0:
        assert report["verdict"] is True
    elif code == 1:
        assert report["verdict"] is False and report["witnesses"]
    else:
        assert report["verdict"] is None and "message" in report["error"]


def test_reports_are_deterministic(capsys):
    path = str(MANIFESTS / "check-spinor.ok.gcx")
    _, a, _ = run_cli(capsys, "check-spinor", "--manifest", path, "--seed", "3")
    _, b, _ = run_cli(capsys, "check-spinor", "--manifest", path, "--seed", "3")
    assert a == b


def test_timing_is_opt_in(capsys):
    path = str(MANIFESTS / "homotopy.ok.gcx")
    _, _, plain = run_cli(capsys, "homotopy", "--manifest", path)
    _, _, timed = run_cli(capsys, "homotopy", "--manifest", path, "--timing")
    assert "timing_seconds" not in plain and "timing_seconds" in timed


def test_missing_manifest(capsys, tmp_path):
    code, _, rep = run_cli(capsys, "type", "--manifest", str(tmp_path / "nope.gcx"))
    assert code == 2 and rep["error"]["kind"] == "ManifestError"


def test_unknown_key_reports_line(capsys, tmp_path):
    p = tmp_path / "m.gcx"
    p.write_text("real: x y\nspinor: 1\nbogus: 3\n")
    code, _, rep = run_cli(capsys, "type", "--manifest", str(p))
    assert code == 2 and rep["error"]["line"] == 3


def test_parse_error_location(capsys):
    code, _, rep = run_cli(capsys, "courant", "--manifest", str(MANIFESTS / "courant.bad.gcx"))
    assert code == 2
    assert rep["error"]["manifest_key"] == "v_vector" and rep["error"]["manifest_line"] == 3


def test_csv_export(capsys, tmp_path):
    out = tmp_path / "dev.csv"
    code, _, _ = run_cli(capsys, "cut-verify", "--manifest", str(MANIFESTS / "cut-verify.ok.gcx"),
                         "--csv", str(out), "--points", "10")
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["sample", "deviation"] and len(rows) == 11


def test_lift_report_content(capsys):
    code, _, rep = run_cli(capsys, "blowup-lift", "--manifest", str(MANIFESTS / "blowup-lift.ok.gcx"))
    assert code == 0
    charts = rep["result"]["atlas"]["charts"]
    assert [c["brackets"] for c in charts] == [{"{z1,v2}": "1"}, {"{v1,z2}": "v1"}]


J_ROWS = ["0, 0, 0, -1", "0, 0, 1, 0", "0, -1, 0, 0", "1, 0, 0, 0"]


def _j_manifest(tmp_path, rows):
    p = tmp_path / "j.gcx"
    p.write_text("real: x y\nspinor: 1 + i*dx*dy\nj_matrix:\n" + "".join(f"  {r}\n" for r in rows)
                 + "point: x = 0, y = 0\n")
    return str(p)


def test_type_with_j_matrix(capsys, tmp_path):
    code, _, rep = run_cli(capsys, "type", "--manifest", _j_manifest(tmp_path, J_ROWS))
    assert code == 0 and rep["result"]["types"][0] == {"point": {"x": "0", "y": "0"}, "type_J": 0, "type_spinor": 0}
    code, _, rep = run_cli(capsys, "type", "--manifest", _j_manifest(tmp_path, J_ROWS[:3] + ["2, 0, 0, 0"]))
    assert code == 1 and rep["error"]["kind"] == "InvalidJ"
    code, _, rep = run_cli(capsys, "type", "--manifest", _j_manifest(tmp_path, J_ROWS[:3]))
    assert code == 2

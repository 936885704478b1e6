import json

import pytest

from mops import io as mio
from mops.cli import EXIT_CONFIG, EXIT_OK, main
from mops.families import family_to_weight_system

from conftest import CHARLIER2

CHARLIER_ARGS = ["--family", "charlier", "--p", "2", "--eta", "1/3,1/5"]
MEIXNER_ARGS = ["--family", "meixner2", "--p", "2", "--eta", "1/4", "--b", "1/3,2/5"]


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_charlier_passes(capsys):
    code, out, _ = run(capsys, ["verify", *CHARLIER_ARGS, "--n", "10", "--tail", "1e-40"])
    assert code == EXIT_OK
    doc = json.loads(out)
    assert mio.validate_report(doc) == []
    assert "fail" not in {s["verdict"] for s in doc["sections"]}


def test_verify_weights_file_with_jet(capsys, tmp_path):
    path = tmp_path / "ws.json"
    path.write_text(family_to_weight_system(CHARLIER2).to_json())
    code, out, _ = run(capsys, ["verify", "--weights", str(path), "--n", "4", "--jet", "1"])
    assert code == EXIT_OK
    sections = {s["section"] for s in json.loads(out)["sections"]}
    assert {"multiple Toda system", "tau derivative routes", "splitting relations"} <= sections


def test_p_zero_is_a_configuration_error(capsys):
    code, _, err = run(capsys, ["verify", "--family", "charlier", "--p", "0", "--eta", "1/3"])
    assert code == EXIT_CONFIG
    assert "p must be ≥ 1" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--p", "2"],
    ["verify", *CHARLIER_ARGS, "--tail", "0.1.2"],
    ["verify", "--family", "charlier", "--p", "2", "--eta", "1/3,1/3"],
    ["verify", "--weights", "/nonexistent.json"],
    ["shift-check", *MEIXNER_ARGS, "--shift", "b:a=9,i=1"],
])
def test_bad_configurations_exit_2(capsys, argv):
    code, out, err = run(capsys, argv)
    assert code == EXIT_CONFIG
    assert out == "" and err.startswith("mops: configuration error")


def test_charlier_table(capsys):
    code, out, _ = run(capsys, ["table", *CHARLIER_ARGS, "--n", "5"])
    assert code == EXIT_OK
    rows = mio.read_csv(out)
    head = rows[0]
    first = dict(zip(head, rows[1]))
    assert first["alpha0_closed"] == "1/3"
    assert first["tau"] == "1"
    assert {"alpha0", "alpha1", "alpha2", "H"} <= set(head)


def test_generalized_charlier_table_residuals(capsys):
    code, out, _ = run(capsys, ["table", "--family", "gen-charlier", "--p", "2", "--eta", "1/4,1/3",
                                "--c", "1/2", "--n", "8", "--format", "json"])
    assert code == EXIT_OK
    assert json.loads(out)["verdicts"] == {"lf_residual": "pass"}


def test_meixner_shift_check(capsys):
    code, out, _ = run(capsys, ["shift-check", *MEIXNER_ARGS, "--n", "6", "--shift", "b:a=1,i=1"])
    assert code == EXIT_OK
    verdicts = {s["identity"].split(":")[0]: s["verdict"] for s in json.loads(out)["sections"]}
    assert verdicts["connRel1"] == "pass"


def test_shift_check_needs_a_shift(capsys):
    code, _, err = run(capsys, ["shift-check", *MEIXNER_ARGS])
    assert code == EXIT_CONFIG
    assert "shift" in err


def test_triple_shift_on_generalized_meixner(capsys):
    code, out, _ = run(capsys, ["shift-check", "--family", "gen-meixner2", "--p", "2", "--eta", "1/4",
                                "--c", "1/2", "--b", "1/3,2/5", "--n", "4",
                                "--shift", "b:a=1,i=1", "--shift", "b:a=2,i=1", "--shift", "c:j=1"])
    assert code == EXIT_OK
    tags = {s["identity"].split(":")[0] for s in json.loads(out)["sections"]}
    assert {"compsr", "compsq", "comprq"} <= tags


def test_reports_are_byte_identical_and_sidecar_holds_timing(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["verify", *CHARLIER_ARGS, "--n", "5", "--out", str(path), "--format", "csv"]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert tuple(mio.read_csv(a.read_text())[0]) == mio.REPORT_FIELDS
    meta = json.loads((tmp_path / "a.csv.meta.json").read_text())
    assert meta["command"] == "verify" and "wall_seconds" in meta

import json
import shutil
import subprocess
import sys

import pytest

from birdeg.cli import main
from birdeg.monomial import IntMatrix, save_matrix, to_projective
from birdeg.projmap import certify_inverse, dumps, map_from_dict, map_to_dict


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), err


@pytest.fixture
def fib_file(tmp_path):
    path = tmp_path / "fib.json"
    save_matrix(IntMatrix([[2, 1], [1, 1]]), path)
    return str(path)


@pytest.fixture
def cremona_file(tmp_path):
    path = tmp_path / "h.json"
    path.write_text(dumps(map_to_dict(to_projective(-IntMatrix.identity(3)))))
    return str(path)


# build ------------------------------------------------------------------------------


def test_build_phi6(capsys, tmp_path):
    out = tmp_path / "phi.json"
    code, text, _ = run(capsys, "build", "phi6", "--out", str(out))
    assert code == 0
    assert "certificate" in text and "pass" in text
    doc = json.loads(out.read_text())
    f, g = map_from_dict(doc["map"]), map_from_dict(doc["inverse"])
    assert certify_inverse(f, g).passed


def test_build_psi_reports_degree_in_interval(capsys):
    code, doc, _ = run_json(capsys, "build", "psi", "--variant", "sug24")
    assert code == 0
    assert 291 <= doc["degree"] <= 669
    assert doc["certificate"]["passed"] is True


@pytest.mark.parametrize("what,extra", [("psi", ["--variant", "toy:42"]), ("phi6", []),
                                        ("h", ["--n0", "3"]), ("psi", ["--variant", "sug24"])])
def test_build_round_trip_is_byte_stable(capsys, tmp_path, what, extra):
    out = tmp_path / "c.json"
    assert run(capsys, "build", what, *extra, "--out", str(out))[0] == 0
    text = out.read_text()
    doc = json.loads(text)
    f, g = map_from_dict(doc["map"]), map_from_dict(doc["inverse"])
    assert dumps(map_to_dict(f)) == dumps(doc["map"])
    assert dumps(map_to_dict(g)) == dumps(doc["inverse"])
    assert certify_inverse(f, g).passed
    # building again writes the same bytes
    out2 = tmp_path / "c2.json"
    assert run(capsys, "build", what, *extra, "--out", str(out2))[0] == 0
    assert out2.read_text() == text


def test_build_tower(capsys):
    code, doc, _ = run_json(capsys, "build", "tower", "--base", "toy:42", "--d", "8")
    assert code == 0 and doc["certificate"]["passed"]
    assert doc["construction"].startswith("tower(")


def test_build_guard_trip_exits_3(capsys):
    code, _, err = run(capsys, "build", "psi6", "--variant", "toy:42", "--max-terms", "10")
    assert code == 3 and "guard" in err


def test_build_usage_errors(capsys):
    assert run(capsys, "build", "tower")[0] == 2
    assert run(capsys, "build", "tower", "--d", "5")[0] == 2
    assert run(capsys, "build", "psi", "--variant", "nonsense")[0] == 2
    assert run(capsys, "build", "nothing")[0] == 2


# degseq -----------------------------------------------------------------------------


def test_degseq_cremona(capsys, cremona_file):
    code, doc, _ = run_json(capsys, "degseq", cremona_file, "--max-n", "4")
    assert code == 0
    assert [e["degree"] for e in doc["sequence"]["entries"]] == [3, 1, 3, 1]


def test_degseq_matrix_file(capsys, fib_file):
    code, text, _ = run(capsys, "degseq", fib_file, "--max-n", "3")
    assert code == 0
    lines = text.splitlines()
    assert lines[0].split() == ["n", "deg", "deg^(1/n)", "upper", "bound"]
    assert [int(l.split()[1]) for l in lines[2:5]] == [3, 8, 21]


def test_degseq_psi_single_row(capsys, tmp_path):
    out = tmp_path / "psi.json"
    assert run(capsys, "build", "psi", "--variant", "sug24", "--out", str(out))[0] == 0
    code, doc, _ = run_json(capsys, "degseq", str(out), "--max-n", "1")
    assert code == 0
    assert len(doc["sequence"]["entries"]) == 1
    assert doc["cited_interval"] == [291, 669] and doc["in_interval"] is True


def test_degseq_guard_trip_keeps_partial_results(capsys, fib_file):
    code, doc, _ = run_json(capsys, "degseq", fib_file, "--max-n", "30", "--max-degree", "100")
    assert code == 0
    assert doc["warning"] and [e["degree"] for e in doc["sequence"]["entries"]] == [3, 8, 21, 55]


def test_degseq_explicit_interval(capsys, fib_file):
    code, doc, _ = run_json(capsys, "degseq", fib_file, "--max-n", "1", "--interval", "1", "2")
    assert code == 0 and doc["in_interval"] is False


def test_degseq_bad_input(capsys, tmp_path):
    assert run(capsys, "degseq", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert run(capsys, "degseq", str(bad))[0] == 2
    assert run(capsys, "degseq", str(bad), "--max-n", "0")[0] == 2


# verify -----------------------------------------------------------------------------


def test_verify_root(capsys):
    code, doc, _ = run_json(capsys, "verify", "--suite", "root")
    assert code == 0 and doc["passed"]
    assert "174.66603" in doc["checks"][0]["detail"]


def test_verify_identities(capsys):
    code, doc, _ = run_json(capsys, "verify", "--suite", "identities", "--trials", "20", "--seed", "3")
    assert code == 0 and len(doc["checks"]) == 3


def test_verify_involutions_and_constructions(capsys):
    assert run(capsys, "verify", "--suite", "involutions")[0] == 0
    code, text, _ = run(capsys, "verify", "--suite", "constructions")
    assert code == 0 and "all checks pass" in text


def test_verify_is_reproducible(capsys):
    a = run(capsys, "verify", "--suite", "identities", "--trials", "5", "--seed", "9")[1]
    b = run(capsys, "verify", "--suite", "identities", "--trials", "5", "--seed", "9")[1]
    assert a == b


def test_verify_failure_exits_1(capsys, monkeypatch):
    from birdeg import cli

    monkeypatch.setitem(cli.SUITES, "root", lambda args: [("forced", False, "")])
    assert run(capsys, "verify", "--suite", "root")[0] == 1


def test_verify_rejects_bad_config(capsys):
    assert run(capsys, "verify", "--tol", "2")[0] == 2
    assert run(capsys, "verify", "--tol", "0")[0] == 2
    assert run(capsys, "verify", "--trials", "0")[0] == 2
    assert run(capsys, "verify", "--suite", "bogus")[0] == 2


# profile ----------------------------------------------------------------------------


def test_profile_six(capsys):
    code, text, _ = run(capsys, "profile", "--d", "6")
    assert code == 0
    labels = [l.split()[1] for l in text.splitlines()[2:9]]
    assert labels == ["1", "λ", "aλ", "λ²", "aλ", "λ", "1"]


def test_profile_ten_plateau(capsys):
    code, doc, _ = run_json(capsys, "profile", "--d", "10")
    assert code == 0
    syms = [e["symbol"] for e in doc["profile"]["entries"]]
    assert syms[3:8] == ["λ²"] * 5
    assert all(doc["checks"].values())


def test_profile_monomial(capsys, tmp_path):
    path = tmp_path / "m.json"
    save_matrix(IntMatrix([[2, 1, 0], [1, 1, 0], [0, 0, 1]]), path)
    code, doc, _ = run_json(capsys, "profile", "--monomial", str(path))
    assert code == 0
    vals = [e["value"] for e in doc["profile"]["entries"]]
    assert vals == pytest.approx([1, 2.618034, 2.618034, 1], rel=1e-6)


def test_profile_usage_errors(capsys):
    assert run(capsys, "profile")[0] == 2
    assert run(capsys, "profile", "--d", "5")[0] == 2


def test_report_output_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "profile", "--d", "7", "--format", "json", "--out", str(out))
    assert code == 0 and json.loads(out.read_text())["command"] == "profile"


def test_console_script():
    exe = shutil.which("birdeg")
    cmd = [exe] if exe else [sys.executable, "-m", "birdeg.cli"]
    res = subprocess.run(cmd + ["verify", "--suite", "root"], capture_output=True, text=True)
    assert res.returncode == 0 and "all checks pass" in res.stdout

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from k3shim.cli import main, parse_job
from k3shim.formats import data_text, validate

DATA = Path(__file__).resolve().parents[1] / "src" / "k3shim" / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_process(*argv, env=None):
    full_env = {**os.environ, **(env or {})}
    return subprocess.run([sys.executable, "-m", "k3shim.cli", *argv], capture_output=True, env=full_env)


# ---------------------------------------------------------------------------
# classify


def test_classify_a18(capsys):
    code, out, _ = run(capsys, "classify", str(DATA / "shioda_hall_a18.json"))
    assert code == 0
    assert "I19" in out and "t=inf" in out
    assert "R = A18 (rank 18)" in out
    assert "Euler numbers sum to 24" in out


def test_classify_d18_json(capsys):
    code, out, _ = run(capsys, "classify", "--json", str(DATA / "shioda_hall_d18.json"))
    doc = json.loads(out)
    assert code == 0 and doc["root_lattice"] == "D18" and doc["euler_total"] == 24
    assert "I14*" in [f["kodaira"] for f in doc["fibers"]]


def test_classify_over_fp(capsys, tmp_path):
    doc = json.loads(data_text("shioda_hall_a18.json"))
    doc.update({"field": "Fp", "p": 7})
    for k, cs in doc["coeffs"].items():
        doc["coeffs"][k] = [str(int(c) % 7) for c in cs]
    f = tmp_path / "a18_mod7.json"
    f.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "classify", str(f))
    assert code == 0 and "Euler numbers sum to 24" in out


def test_classify_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"form": "short",\n  "coeffs": ')
    code, _, err = run(capsys, "classify", str(bad))
    assert code == 2 and "line 2" in err
    bad.write_text('{"form": "short", "coeffs": {"A": [1.5], "B": ["1"]}, "field": "Q"}')
    code, _, err = run(capsys, "classify", str(bad))
    assert code == 2 and "schema" in err
    code, _, _ = run(capsys, "classify", str(tmp_path / "missing.json"))
    assert code == 2


# ---------------------------------------------------------------------------
# verify


def test_verify_n6(capsys):
    code, out, _ = run(capsys, "verify", "n6")
    assert code == 0
    assert "b=81/64 => (27t^2-18t-1)^2 : PASS" in out
    assert ": ERRATUM" in out
    assert ": FAIL" not in out


def test_verify_n206_json(capsys):
    code, out, _ = run(capsys, "verify", "n206", "--json")
    doc = json.loads(out)
    validate(doc, "verify_report")
    assert code == 0 and doc["ok"] and doc["summary"]["FAIL"] == 0
    names = [c["name"] + " : " + c["status"] for c in doc["checks"]]
    assert "disc P10 = -2^138*103^7 : PASS" in names


def test_verify_text_n206(capsys):
    _, out, _ = run(capsys, "verify", "n206")
    assert "disc P10 = -2^138*103^7 : PASS" in out


# ---------------------------------------------------------------------------
# search


def test_search_n14(capsys):
    code, out, _ = run(capsys, "search", "--level", "14", "--disc", "-67")
    doc = json.loads(out)
    validate(doc, "search_result")
    assert code == 0
    assert doc["parameter"] == "-35/44" and doc["involution_image"] == "-35/26" and doc["prime"] == 17
    assert doc["verification"]["ok"]


def test_search_n6_has_no_involution_image(capsys):
    code, out, _ = run(capsys, "search", "--level", "6", "--disc", "-19")
    doc = json.loads(out)
    assert code == 0 and doc["parameter"] == "81/64" and "involution_image" not in doc


def test_search_progress_events(capsys):
    code, _, err = run(capsys, "search", "--level", "6", "--disc", "-19", "--progress")
    events = [json.loads(line) for line in err.splitlines()]
    for e in events:
        validate(e, "search_event")
    assert code == 0 and events[-1]["event"] == "found"


@pytest.mark.parametrize("argv,code", [
    (["search", "--level", "14", "--disc", "-5"], 3),
    (["search", "--level", "7", "--disc", "-67"], 2),
    (["search", "--level", "14", "--disc", "67"], 2),
    (["search", "--level", "14", "--disc", "-67", "--prime", "13"], 2),
    (["search", "--level", "14", "--disc", "-67", "--precision", "0"], 2),
    (["search", "--level", "14"], 2),
    (["frobnicate"], 2),
])
def test_search_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_not_found_reports_json_error(capsys):
    code, out, err = run(capsys, "search", "--level", "14", "--disc", "-5")
    assert code == 3 and out == ""
    assert json.loads(err)["error"] in ("NotFound", "SearchBudgetExceeded")


def test_threads_environment(monkeypatch):
    monkeypatch.setenv("K3SHIM_THREADS", "3")
    assert parse_job(["verify", "n6"]).threads == 3
    assert parse_job(["verify", "n6", "--threads", "2"]).threads == 2
    monkeypatch.setenv("K3SHIM_THREADS", "zero")
    assert main(["verify", "n6"]) == 2


def test_search_output_is_byte_deterministic_across_threads():
    argv = ("search", "--level", "14", "--disc", "-67")
    a = run_process(*argv, env={"K3SHIM_THREADS": "1"})
    b = run_process(*argv, env={"K3SHIM_THREADS": "4"})
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


# ---------------------------------------------------------------------------
# igusa


@pytest.mark.parametrize("b,key,value", [("4", "I4", "144"), ("1", "I10", "4"), ("3", "I2", "96")])
def test_igusa_values(capsys, b, key, value):
    code, out, _ = run(capsys, "igusa", "--level", "6", "--b", b)
    doc = json.loads(out)
    validate(doc, "igusa")
    assert code == 0 and doc["invariants"][key] == value
    assert doc["printed"]["I2_discrepancy"] is True


@pytest.mark.parametrize("argv", [["igusa", "--level", "6", "--b", "0"], ["igusa", "--level", "14", "--b", "2"],
                                  ["igusa", "--level", "6", "--b", "x"]])
def test_igusa_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_igusa_text(capsys):
    code, out, _ = run(capsys, "igusa", "--level", "6", "--b", "1/2", "--format", "text")
    assert code == 0 and "I2 = 36" in out and "(differs)" in out


# ---------------------------------------------------------------------------
# catalog


def test_catalog_verify(capsys):
    code, out, _ = run(capsys, "catalog", "--level", "14", "--verify", "--format", "text")
    assert code == 0
    assert "N=14 D=-67 at -35/44" in out and "verified: |disc NS| = 67" in out


def test_catalog_export_import_round_trip(capsys, tmp_path):
    f = tmp_path / "cat6.json"
    assert run(capsys, "catalog", "--level", "6", "--export", str(f))[0] == 0
    validate(json.loads(f.read_text()), "catalog")
    code, out, _ = run(capsys, "catalog", "--import", str(f))
    doc = json.loads(out)
    assert code == 0 and all(v["ok"] for v in doc["verification"])


def test_corrupt_import_exits_1(capsys, tmp_path):
    doc = json.loads(data_text("catalog_n6.json"))
    rec = next(r for r in doc["records"] if r["D"] == -19)
    rec["parameter"] = "81/65"
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(doc))
    code, _, err = run(capsys, "catalog", "--import", str(f))
    assert code == 1 and "verification failed" in err


def test_schema_invalid_import_exits_1(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"N": 6, "records": [{"N": 6}]}))
    assert run(capsys, "catalog", "--import", str(f))[0] == 1


def test_catalog_unknown_level(capsys):
    assert run(capsys, "catalog", "--level", "7")[0] == 2


def test_console_entry_point():
    r = run_process("--version")
    assert r.returncode == 0 and r.stdout.startswith(b"k3shim")

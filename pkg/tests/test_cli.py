import csv
import json
import os
import subprocess
import sys

import pytest

BASE = ["--gamma", "2", "--u1", "0", "--rho1", "1"]


def run(*args, env=None):
    e = dict(os.environ)
    if env:
        e.update(env)
    return subprocess.run([sys.executable, "-m", "delta_riemann", *args], capture_output=True, text=True, env=e)


def test_classify_region_three():
    r = run("classify", *BASE, "--u2", "0", "--rho2", "4")
    assert r.returncode == 0, r.stderr
    out = json.loads(r.stdout)
    assert out["region"] == "III"
    assert out["existence"]["exists"] is False


def test_solve_symmetric_collision():
    r = run("solve", "--gamma", "2", "--u1", "1", "--rho1", "1", "--u2", "-1", "--rho2", "1")
    assert r.returncode == 0, r.stderr
    out = json.loads(r.stdout)
    pieces = out["plan"]["stages"][0]["pieces"]
    assert [p["type"] for p in pieces].count("DeltaShock") == 1
    assert out["delta"]["case_row"] == "R1"


def test_solve_vacuum_exits_two():
    r = run("solve", *BASE, "--u2", "6", "--rho2", "1")
    assert r.returncode == 2
    out = json.loads(r.stdout)
    assert out["region"] == "V" and out["classical_fallback"] == "R1VacR2"


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"gamma": 2, "u1": 0, "rho1": 1, "u2": 0, "rho2": 4, "pick": 0.25}))
    r = run("solve", "--config", str(cfg), "--rho2", "1.0", "--u2", "-3")
    assert r.returncode == 0, r.stderr
    assert json.loads(r.stdout)["plan"]["kind"] == "delta"


@pytest.mark.parametrize("args,field", [
    (("classify", "--gamma", "0.5", "--u1", "0", "--rho1", "1", "--u2", "0", "--rho2", "4"), "gamma"),
    (("classify", "--gamma", "2", "--u1", "0", "--rho1", "1", "--u2", "0"), "rho2"),
    (("solve", *BASE, "--u2", "0", "--rho2", "abc"), "rho2"),
])
def test_malformed_config_exits_64(args, field):
    r = run(*args)
    assert r.returncode == 64
    assert field in r.stderr


def test_bad_usage_exits_64():
    assert run("frobnicate").returncode == 64
    assert run("sample", *BASE, "--u2", "0", "--rho2", "4").returncode == 64  # --t missing


def test_unknown_config_field(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"gamma": 2, "u1": 0, "rho1": 1, "u2": 0, "rho2": 4, "mass": 1}))
    r = run("classify", "--config", str(cfg))
    assert r.returncode == 64 and "mass" in r.stderr


def test_solve_then_sample_round_trip(tmp_path):
    plan = tmp_path / "plan.json"
    r = run("solve", *BASE, "--u2", "0", "--rho2", "4", "--rho0", "1", "--u0", "0", "--out", str(plan))
    assert r.returncode == 0, r.stderr
    direct = tmp_path / "direct.csv"
    again = tmp_path / "again.csv"
    assert run("sample", *BASE, "--u2", "0", "--rho2", "4", "--rho0", "1", "--u0", "0",
               "--t", "0.1", "--x-lo", "-1", "--x-hi", "1", "--n", "41", "--out", str(direct)).returncode == 0
    assert run("sample", "--plan", str(plan), "--t", "0.1", "--x-lo", "-1", "--x-hi", "1", "--n", "41",
               "--out", str(again)).returncode == 0
    assert direct.read_bytes() == again.read_bytes()
    rows = list(csv.reader(direct.open()))
    assert rows[0] == ["x", "rho", "u"] and len(rows) == 42
    atoms = json.loads((tmp_path / "direct.csv.atoms.json").read_text())
    assert len(atoms["atoms"]) == 1 and set(atoms["atoms"][0]) == {"x", "w", "v"}


def test_sample_forced_modes(tmp_path):
    out = tmp_path / "p.csv"
    r = run("sample", *BASE, "--u2", "0", "--rho2", "4", "--classical", "--t", "1", "--x-lo", "-3", "--x-hi", "3",
            "--n", "7", "--out", str(out))
    assert r.returncode == 0, r.stderr
    assert json.loads((tmp_path / "p.csv.atoms.json").read_text())["atoms"] == []
    r = run("solve", *BASE, "--u2", "0", "--rho2", "4", "--delta")
    assert r.returncode == 2  # a < 0: no single delta


def test_curves_csv(tmp_path):
    out = tmp_path / "curves.csv"
    r = run("curves", *BASE, "--u2", "0", "--rho2", "4", "--curve", "S1", "--curve", "R2", "--n", "5",
            "--rho-lo", "1", "--rho-hi", "4", "--out", str(out))
    assert r.returncode == 0, r.stderr
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["rho", "u", "curve"]
    assert {row[2] for row in rows[1:]} == {"S1", "R2"} and len(rows) == 11
    assert run("curves", *BASE, "--u2", "0", "--rho2", "4", "--curve", "Z9").returncode == 64


def test_verify_summary():
    r = run("verify", "--tests", "3", "--seed", "1", env={"DELTA_RIEMANN_THREADS": "1"})
    assert r.returncode == 0, r.stderr
    out = json.loads(r.stdout)
    assert out["passed"] is True and out["n_checks"] > 0
    r = run("verify", *BASE, "--u2", "0", "--rho2", "4", "--tests", "4")
    assert r.returncode == 0, r.stderr
    names = {c["check"] for c in json.loads(r.stdout)["checks"]}
    assert "weak_residual" in names and any(n.startswith("curve_order") for n in names)


def test_verify_falls_back_to_the_classical_solution():
    r = run("verify", *BASE, "--u2", "6", "--rho2", "1", "--tests", "3")
    assert r.returncode == 0, r.stderr
    assert "classical" in json.loads(r.stdout)["note"]

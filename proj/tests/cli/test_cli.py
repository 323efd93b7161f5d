"""End-to-end tests of the melosc CLI binary (path in $MELOSC_CLI)."""

import csv
import json
import math
import os
import subprocess

import pytest

CLI = os.environ.get("MELOSC_CLI")
SCHEMAS = os.environ.get("MELOSC_SCHEMAS")

pytestmark = pytest.mark.skipif(CLI is None, reason="MELOSC_CLI not set")


def run(*args, check=True):
    proc = subprocess.run(
        [CLI, *args], capture_output=True, text=True, timeout=300
    )
    if check and proc.returncode != 0:
        raise AssertionError(
            f"exit {proc.returncode}\nstdout: {proc.stdout}\nstderr: {proc.stderr}"
        )
    return proc


def load_schema(name):
    with open(os.path.join(SCHEMAS, name)) as fh:
        return json.load(fh)


def validate_schema(payload, schema_name):
    if SCHEMAS is None:
        return
    jsonschema = pytest.importorskip("jsonschema")
    jsonschema.validate(payload, load_schema(schema_name))


def test_classify_text():
    out = run("classify", "--alpha", "1", "--eta", "1").stdout
    assert out.startswith("C1:")
    assert "invisible fold-fold" in out
    assert "saddles" in out
    assert "annulus D=(0, 1)" in out

    out5 = run("classify", "--alpha", "0", "--eta", "0").stdout
    assert out5.startswith("C5:")
    assert "critical points" in out5

    out9 = run("classify", "--alpha", "-1", "--eta", "-1").stdout
    assert out9.startswith("C9:")
    assert "visible fold-fold" in out9
    assert "linear centers" in out9


def test_usage_error_exit_code():
    proc = run("no-such-command", check=False)
    assert proc.returncode == 2
    proc2 = run("classify", "--bogus-flag", "1", check=False)
    assert proc2.returncode == 2


def test_zeros_json(tmp_path):
    proc = run("zeros", "--alpha", "1", "--eta", "1", "--sigma", str(2 * math.pi),
               "--f", "sin(t)")
    payload = json.loads(proc.stdout)
    validate_schema(payload, "zeros.schema.json")
    assert payload["degenerate_flat"] is False
    zeros = payload["zeros"]
    assert len(zeros) == 2
    assert abs(zeros[0]["phi_star"]) <= 1e-10
    assert abs(zeros[1]["phi_star"] - math.pi) <= 1e-10
    assert zeros[0]["dM"] == pytest.approx(2.0, abs=1e-8)
    assert zeros[1]["dM"] == pytest.approx(-2.0, abs=1e-8)


def test_zeros_inadmissible_sigma():
    proc = run("zeros", "--alpha", "1", "--eta", "-1", "--sigma", str(2 * math.pi),
               "--f", "sin(t)", check=False)
    assert proc.returncode == 1
    assert "not admissible" in proc.stderr
    assert "(0, 3.14" in proc.stderr


def test_melnikov_csv_deterministic(tmp_path):
    args = ("melnikov", "--alpha", "1", "--eta", "1", "--sigma", str(2 * math.pi),
            "--f", "sin(t)", "--samples", "32")
    a = run(*args).stdout
    b = run(*args).stdout
    assert a == b
    rows = list(csv.DictReader(a.splitlines()))
    assert len(rows) == 32
    quarter = rows[8]  # phi = sigma/4 = pi/2
    assert float(quarter["M"]) == pytest.approx(2.0, abs=1e-9)


def test_degenerate_flat_even_period():
    proc = run("zeros", "--alpha", "1", "--eta", "1", "--sigma", str(4 * math.pi),
               "--f", "sin(t)")
    payload = json.loads(proc.stdout)
    assert payload["degenerate_flat"] is True
    assert payload["zeros"] == []


def test_portrait_closes_annulus_orbit(tmp_path):
    # unperturbed C1 orbit through y0 = 0.5 closes after one period
    tau0 = math.log((1 + 0.5) / (1 - 0.5))  # half-period for alpha = eta = 1
    prefix = str(tmp_path / "orbit_")
    run("portrait", "--alpha", "1", "--eta", "1", "--sigma", str(2 * math.pi),
        "--f", "0", "--y0", "0.5", "--t1", str(2 * tau0), "--out", prefix)
    with open(prefix + "0.csv") as fh:
        rows = [r for r in csv.DictReader(fh)]
    first, last = rows[0], rows[-1]
    assert float(first["x"]) == pytest.approx(0.0, abs=1e-12)
    assert float(first["y"]) == pytest.approx(0.5, abs=1e-12)
    assert float(last["x"]) == pytest.approx(float(first["x"]), abs=1e-8)
    assert float(last["y"]) == pytest.approx(float(first["y"]), abs=1e-8)
    regions = {r["region"] for r in rows}
    assert regions == {"1", "-1"}


def test_portrait_time_limit_note(tmp_path):
    # C3 trajectories escape; the file ends with the time-limit comment row
    prefix = str(tmp_path / "escape_")
    run("portrait", "--alpha", "-1", "--eta", "1", "--sigma", "6.283185307179586",
        "--f", "0", "--y0", "0.5", "--t1", "200", "--out", prefix)
    with open(prefix + "0.csv") as fh:
        content = fh.read()
    assert content.rstrip().endswith("# time limit exceeded before requested duration")


def test_orbit_json(tmp_path):
    config = tmp_path / "model.json"
    config.write_text(json.dumps({
        "alpha": 1.0, "eta": 1.0, "sigma": 2 * math.pi, "f": "sin(t)", "epsilon": 1e-3,
    }))
    proc = run("orbit", "--config", str(config), "--phi-seed", "0")
    payload = json.loads(proc.stdout)
    validate_schema(payload, "orbit.schema.json")
    assert payload["matches_theoremA"] is True
    assert payload["residual"] <= 1e-10
    assert abs(payload["y0"] - math.tanh(math.pi / 2)) <= 1e-2

    # flags override the config file
    proc0 = run("orbit", "--config", str(config), "--epsilon", "0", "--phi-seed", "1.0")
    payload0 = json.loads(proc0.stdout)
    assert payload0["epsilon"] == 0.0
    assert payload0["y0"] == pytest.approx(math.tanh(math.pi / 2), abs=1e-12)


def test_verify_slope(tmp_path):
    proc = run("verify", "--alpha", "1", "--eta", "1", "--sigma", str(2 * math.pi),
               "--f", "sin(t)", "--epsilon-list", "1e-2", "5e-3", "2.5e-3")
    payload = json.loads(proc.stdout)
    validate_schema(payload, "verify.schema.json")
    assert 0.85 <= payload["slope"] <= 1.15
    assert len(payload["slopes"]) == 8
    assert len(payload["errors"]) == 8


def test_reproduce_p1(tmp_path):
    out_json = tmp_path / "p1.json"
    proc = run("reproduce-p1", "--n", "2", "--alpha", "1", "--eta", "1", "--beta", "1",
               "--epsilon", "1e-3", "--out", str(out_json))
    assert "theorem-A" in proc.stdout
    payload = json.loads(out_json.read_text())
    validate_schema(payload, "reproduce_p1.schema.json")
    rows = payload["rows"]
    assert [r["k"] for r in rows] == [1, 2]
    assert rows[0]["period"] == pytest.approx(2 * math.pi)
    assert rows[1]["period"] == pytest.approx(6 * math.pi)
    assert rows[0]["v_sigma_half"] == pytest.approx(math.tanh(math.pi / 2), abs=1e-12)
    for row in rows:
        assert row["matches"] == "theorem-A"
        assert row["residual"] <= 1e-10
        assert abs(row["y0"] - row["v_sigma_half"]) <= 1e-2

import json

import pytest
from click.testing import CliRunner

from braidlab.cli import main
from braidlab.proc import SWEEP_COLUMNS


@pytest.fixture
def run(tmp_path):
    runner = CliRunner()

    def _run(*args, out_name="out"):
        out = tmp_path / out_name
        result = runner.invoke(main, [*args, "--out", str(out), "--no-header-timestamp"])
        text = out.read_text() if out.exists() else None
        return result, text

    return _run


def test_verify(run, verify_cfg_path):
    result, text = run("verify", "--config", verify_cfg_path)
    assert result.exit_code == 0, result.output
    doc = json.loads(text)
    assert doc["passed"] is True
    assert doc["system"] == "four_qubit"
    assert {c["suite"] for c in doc["checks"]} == {"algebra", "effective", "gauge_fields", "initialization"}


def test_verify_csv(run, verify_cfg_path):
    result, text = run("verify", "--config", verify_cfg_path, "--suite", "algebra", "--format", "csv")
    assert result.exit_code == 0, result.output
    assert text.splitlines()[0] == "suite,name,passed,residual,tolerance,detail"


def test_forced_w3_fails(run):
    cfg = "{system: {kind: ten_qubit}, verify: {angle_samples: 1}}"
    result, text = run("verify", "--config", cfg, "--suite", "algebra", "--force-conserved", "W3")
    assert result.exit_code == 1
    doc = json.loads(text)
    assert doc["passed"] is False


@pytest.mark.parametrize(
    "args",
    [
        ["verify", "--config", "a: ["],
        ["verify", "--config", "{foo: 1}"],
        ["verify", "--suite", "nope"],
        ["verify", "--force-conserved", "W9", "--suite", "algebra"],
        ["braid", "--gate", "CNOT"],
        ["braid", "--format", "csv"],
        ["sweep", "--delta-tilde", "10:2:1"],
        ["export", "--circuit-format", "svg"],
        ["export", "--gate", "S", "--format", "csv"],
        ["export", "--format", "json"],
    ],
)
def test_config_errors(run, args):
    result, _ = run(*args)
    assert result.exit_code == 2, result.output


def test_sweep_is_deterministic(run, sweep_cfg_path):
    args = ("sweep", "--config", sweep_cfg_path, "--threads", "1")
    r1, first = run(*args, out_name="a.csv")
    r2, second = run(*args, out_name="b.csv")
    assert r1.exit_code == 0 and r2.exit_code == 0
    assert first == second
    lines = first.splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert len(lines) == 1 + 5
    assert lines[1].startswith("S,5,3,9,")


def test_sweep_with_timings(run, sweep_cfg_path):
    result, text = run("sweep", "--config", sweep_cfg_path, "--threads", "1", "--with-timings", "--delta-tilde", "6.3")
    assert result.exit_code == 0, result.output
    assert text.splitlines()[0].endswith(",wall_time")


def test_export(run):
    result, text = run("export", "--gate", "S")
    assert result.exit_code == 0, result.output
    lines = text.splitlines()
    assert lines[:2] == ["# braidlab-native 1", "qubits 4"]
    assert len(lines) == 2 + 15

    result, text = run("export", "--gate", "Rxx", "--circuit-format", "qasm")
    assert result.exit_code == 0, result.output
    assert "qreg q[10];" in text


def test_braid(run):
    result, text = run("braid", "--gate", "S", "--labels", "+")
    assert result.exit_code == 0, result.output
    doc = json.loads(text)
    assert doc["gate"] == "S"
    assert doc["n_total"] == 9
    assert doc["gate_count"] == 15
    assert doc["input"] == ["+"]
    assert len(doc["output_density"]["real"]) == 2
    assert 0 <= doc["process_fidelity"] <= 1


def test_braid_custom_loop(run):
    cfg = "{braid: {arm: left, target_phi: 0.5, delta_tilde: 0.5, n_equator: 2}}"
    result, text = run("braid", "--config", cfg)
    assert result.exit_code == 0, result.output
    doc = json.loads(text)
    assert doc["gate"] == "Rz(0.5)"
    assert doc["plan"]["steps"][1] == 2


def test_effective(run):
    result, text = run("effective", "--format", "csv")
    assert result.exit_code == 0, result.output
    lines = text.splitlines()
    assert lines[0] == "arm,dim,residual"
    assert lines[1].startswith("left,4,")


def test_holonomy(run):
    result, text = run("holonomy", "--target", "1.5707963267948966", "--target", "-0.5", "--steps", "100")
    assert result.exit_code == 0, result.output
    doc = json.loads(text)
    assert [r["target_phi"] for r in doc["rows"]] == [1.57079632679, -0.5]
    assert doc["loops"][0]["rotation"] == "Rz"


def test_tomography(run):
    result, text = run("tomography", "--gate", "I", "--format", "csv")
    assert result.exit_code == 0, result.output
    header, row = text.splitlines()
    assert header.split(",")[:2] == ["gate", "delta_tilde"]
    assert row.startswith("I,")
    assert ",1," in row

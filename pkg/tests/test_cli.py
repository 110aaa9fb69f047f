import csv
import json

import pytest

from quadham.cli import main


def run(args):
    return main(args)


def test_verify_writes_report_and_exits_zero(tmp_path, capsys):
    out = tmp_path / "rep.json"
    code = run(["verify", "harmonic", "--samples", "30", "--deterministic", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["system"] == "harmonic"
    assert doc["summary"]["failed"] == 0
    ids = [c["id"] for c in doc["claims"]]
    assert ids == sorted(ids)
    assert all("anchor" in c for c in doc["claims"])
    assert "generated_at" not in doc
    text = capsys.readouterr().out
    assert "[pass]" in text


def test_verify_nondeterministic_has_timestamp(tmp_path):
    out = tmp_path / "rep.json"
    assert run(["verify", "harmonic", "--samples", "20", "--out", str(out)]) == 0
    assert "generated_at" in json.loads(out.read_text())


def test_verify_unknown_system_usage_error(capsys):
    assert run(["verify", "whatever"]) == 2
    assert "unknown system" in capsys.readouterr().err


def test_verify_constraint_violation_exit_three(capsys):
    assert run(["verify", "lu_original", "--params", "gamma=1", "--samples", "10"]) == 3
    assert "constraint violated" in capsys.readouterr().err


def test_verify_bad_params_usage(capsys):
    assert run(["verify", "harmonic", "--params", "oops"]) == 2


def test_deterministic_reports_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["verify", "harmonic", "--samples", "25", "--deterministic", "--seed", "7", "--out", str(a)])
    run(["verify", "harmonic", "--samples", "25", "--deterministic", "--seed", "7", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_integrate_csv_and_plot(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    fig = tmp_path / "traj.png"
    code = run([
        "integrate", "harmonic", "--t1", "2", "--method", "rk4", "--dt", "0.01",
        "--samples", "20", "--out", str(out), "--plot", str(fig),
    ])
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "x", "y", "H"]
    assert len(rows) > 10
    assert fig.exists() and fig.stat().st_size > 0
    assert "drift H" in capsys.readouterr().out


def test_integrate_zero_span_single_row(tmp_path):
    out = tmp_path / "one.csv"
    assert run(["integrate", "harmonic", "--t1", "0", "--out", str(out)]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 2  # header plus the initial state


def test_integrate_bad_x0_arity(tmp_path, capsys):
    out = tmp_path / "x.csv"
    code = run(["integrate", "shivamoggi", "--x0", "1,2,3", "--t1", "1", "--out", str(out)])
    assert code == 2
    assert "needs 4 values" in capsys.readouterr().err


def test_lyapunov_default_T_noted(tmp_path, capsys, monkeypatch):
    out = tmp_path / "l.json"
    # tiny dt*T so the default-T path stays fast is not possible: pass T explicitly
    code = run(["lyapunov", "harmonic", "--T", "5", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["T"] == 5 and doc["T_defaulted"] is False
    assert len(doc["exponents"]) == 2


def test_env_seed_picked_up(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv("QUADHAM_SEED", "11")
    out = tmp_path / "l.json"
    assert run(["lyapunov", "harmonic", "--T", "2", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["seed"] == 11


def test_report_merges_and_flags_version_conflict(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["verify", "harmonic", "--samples", "20", "--deterministic", "--out", str(a)])
    run(["verify", "lorenz_rho0", "--samples", "20", "--deterministic", "--out", str(b)])
    merged_path = tmp_path / "m.json"
    assert run(["report", str(a), str(b), "--out", str(merged_path)]) == 0
    merged = json.loads(merged_path.read_text())
    assert merged["summary"]["total"] > 0
    assert "warning" not in merged
    # now corrupt one version and merge again
    doc = json.loads(b.read_text())
    doc["environment"]["version"] = "9.9.9"
    b.write_text(json.dumps(doc))
    assert run(["report", str(a), str(b), "--out", str(merged_path)]) == 0
    assert "mixed versions" in json.loads(merged_path.read_text())["warning"]


def test_report_no_inputs_usage_error(capsys):
    assert run(["report"]) == 2


def test_report_unreadable_input(tmp_path):
    bad = tmp_path / "nope.json"
    assert run(["report", str(bad)]) == 2


def test_usage_error_from_argparse():
    assert run(["frobnicate"]) == 2

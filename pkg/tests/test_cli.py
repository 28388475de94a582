"""Command line contract: formats, seeds, exit codes, figure datasets."""

import json
import shutil
import subprocess

import pytest

from qhide import cli
from qhide.cli import DEFAULT_SEED, main
from qhide.pauli import BellLabel
from qhide.tauopt import SolverNonConvergence


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


@pytest.mark.parametrize(
    "argv",
    [
        ("states", "--n", "2", "--bit", "1"),
        ("attack", "--n", "1", "--trials", "500"),
        ("attack", "--family", "tau", "--trials", "500"),
        ("bound", "single", "--n", "3"),
        ("bound", "lp", "--n", "2"),
        ("bound", "werner", "--n", "2", "--grid", "5"),
        ("bound", "multi", "--k", "2", "--n", "10"),
        ("bound", "contours", "--k-max", "3", "--n-max", "8"),
        ("bound", "theorem1", "--n", "1", "--x", "0.5"),
        ("bound", "info", "--delta", "0.25", "--prior", "0.3"),
        ("bound", "tau", "--n", "1"),
        ("bound", "emin", "--n", "4"),
        ("clifford", "--n", "2"),
        ("prepare", "--n", "1", "--bit", "0", "--steps", "50"),
        ("prepare", "--n", "2", "--bit", "1", "--samples", "4"),
        ("commit", "--n", "2", "--r", "3", "--sessions", "200"),
    ],
)
def test_subcommands_emit_valid_json(capsys, argv):
    payload = run_json(capsys, *argv)
    assert isinstance(payload, dict)


def test_installed_entry_point_runs():
    exe = shutil.which("qhide")
    assert exe, "console script not on PATH"
    proc = subprocess.run(
        [exe, "bound", "single", "--n", "2"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n"] == 2


def test_attack_output_is_byte_identical_for_fixed_seed(capsys):
    argv = ("attack", "--n", "1", "--trials", "2000", "--seed", "7")
    _, first, _ = run_cli(capsys, *argv)
    _, second, _ = run_cli(capsys, *argv)
    assert first == second
    payload = json.loads(first)
    assert set(payload) >= {"p00", "p11", "se00", "se11", "trials", "exact_p00", "exact_p11"}
    assert payload["trials"] == 2000


def test_attack_without_trials_reports_exact_values_only(capsys):
    payload = run_json(capsys, "attack", "--n", "2", "--trials", "0")
    assert payload["trials"] == 0
    assert payload["se00"] == 0.0 and payload["se11"] == 0.0
    assert payload["p00"] == pytest.approx(3 / 5, abs=1e-15)
    assert payload["p11"] == pytest.approx(2 / 3, abs=1e-15)


def test_seed_resolution_order(capsys, monkeypatch):
    argv = ("commit", "--n", "2", "--r", "3", "--sessions", "300")
    monkeypatch.delenv("QHIDE_SEED", raising=False)
    default = run_json(capsys, *argv)
    assert default["seed"] == DEFAULT_SEED
    monkeypatch.setenv("QHIDE_SEED", "123")
    via_env = run_json(capsys, *argv)
    assert via_env["seed"] == 123
    via_flag = run_json(capsys, *argv, "--seed", "123")
    assert via_flag == via_env
    overridden = run_json(capsys, *argv, "--seed", "9")
    assert overridden["seed"] == 9


def test_bad_seed_env_is_a_validation_error(capsys, monkeypatch):
    monkeypatch.setenv("QHIDE_SEED", "not-a-number")
    code, _, err = run_cli(capsys, "attack", "--n", "1", "--trials", "10")
    assert code == 2
    assert "QHIDE_SEED" in err


def test_clifford_group_counts(capsys):
    payload = run_json(capsys, "clifford", "--n", "1")
    assert payload["elements"] == 24
    assert payload["order_with_phases"] == 192
    assert payload["policy_steps"] > 0


def test_prepare_emits_circuit_or_labels(capsys):
    circuit = run_json(capsys, "prepare", "--n", "1", "--bit", "0", "--steps", "40")
    assert circuit["bit"] == 0
    assert circuit["steps"] == 40
    assert all(set(g) == {"gate", "qubits"} for g in circuit["circuit"])

    sampled = run_json(capsys, "prepare", "--n", "2", "--bit", "1", "--samples", "6")
    assert len(sampled["labels"]) == 6
    for text in sampled["labels"]:
        assert BellLabel.from_text(text).parity() == 1


def test_commit_payload_keys(capsys):
    payload = run_json(
        capsys, "commit", "--n", "2", "--r", "3", "--cheat", "parity", "--sessions", "500"
    )
    assert set(payload) >= {"pass_rate", "decode_accuracy", "flip_success_rate", "sessions"}
    assert payload["cheat"] == "parity"
    assert payload["sessions"] == 500


def test_record_csv_format(capsys):
    code, out, _ = run_cli(capsys, "bound", "single", "--n", "2", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "key,value"
    assert "tight,2/5" in lines
    assert any(line.startswith("tight_value,") for line in lines)


def test_table_output_to_file(tmp_path, capsys):
    out = tmp_path / "region.csv"
    code, stdout, _ = run_cli(
        capsys,
        "bound", "tau", "--n", "1", "--region", "--grid", "5",
        "--format", "csv", "--out", str(out),
    )
    assert code == 0 and stdout == ""
    lines = out.read_text().splitlines()
    assert "token=talppt" in lines[0]
    header_at = next(i for i, ln in enumerate(lines) if not ln.startswith("#"))
    assert lines[header_at] == "n,p00,p11_max"
    assert len(lines) > header_at + 3


def test_states_can_save_the_operator(tmp_path, capsys):
    path = tmp_path / "state.json"
    payload = run_json(
        capsys, "states", "--n", "1", "--bit", "0", "--state-out", str(path)
    )
    assert payload["state_path"] == str(path)
    rec = json.loads(path.read_text())
    assert rec["dim"] == 4


def test_figures_writes_all_datasets(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "figures", "--out", str(tmp_path), "--grid", "9")
    assert code == 0
    names = ["fig2.csv", "boundcurve.csv", "mbound.csv", "talppt.csv", "tal2bdd.csv"]
    assert out.count("wrote ") == len(names)
    for name in names:
        text = (tmp_path / name).read_text()
        assert text.startswith("# ")
        assert f"token={name[:-4]}" in text
        body = [ln for ln in text.splitlines() if not ln.startswith("#")]
        assert "," in body[0]  # header row
        assert len(body) >= 2
    assert "token=tallocc-outer" in (tmp_path / "talppt.csv").read_text()


def test_validation_failures_exit_2(capsys):
    code, _, err = run_cli(capsys, "states", "--n", "0")
    assert code == 2 and err
    code, _, err = run_cli(capsys, "commit", "--n", "28", "--r", "8", "--sessions", "10")
    assert code == 2 and "31" in err


def test_solver_failure_exits_3(capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise SolverNonConvergence("forced for the test")

    monkeypatch.setattr(cli, "maximize_tau_bias", boom)
    code, _, err = run_cli(capsys, "bound", "tau", "--n", "1")
    assert code == 3
    assert "converge" in err

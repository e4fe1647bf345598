import json
import subprocess
import sys

import numpy as np
import pytest

from scqsim import cli


def run_cli(args):
    return cli.main([str(a) for a in args])


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------

def test_parse_key_value_with_sections():
    cfg = cli.parse_config(
        """
        # comment
        kind = rabi
        points = 11
        flag = true
        [fit]
        weights = 1, 2, 3
        """
    )
    assert cfg["kind"] == "rabi"
    assert cfg["points"] == 11
    assert cfg["flag"] is True
    assert cfg["fit"]["weights"] == [1, 2, 3]


def test_parse_json_config():
    cfg = cli.parse_config('{"e_j_ghz": 20.0, "e_c_ghz": 0.4}')
    assert cfg["e_j_ghz"] == 20.0


def test_parse_bad_line_rejected():
    with pytest.raises(cli.ConfigError, match="key = value"):
        cli.parse_config("what is this line")


def test_validate_keys_rejects_unknown():
    with pytest.raises(cli.ConfigError, match="unknown config key.*e_jj"):
        cli.validate_keys({"e_jj": 1.0}, {"e_j_ghz": ...})


def test_validate_keys_missing_required():
    with pytest.raises(cli.ConfigError, match="missing required"):
        cli.validate_keys({}, {"e_j_ghz": ...})


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def test_spectrum_subcommand(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("circuit = island\ne_j_ghz = 20.0\ne_c_ghz = 0.4\n")
    out = tmp_path / "out"
    assert run_cli(["spectrum", "--config", cfg, "--out", out]) == 0
    report = read_json(out / "spectrum.json")
    assert abs(report["omega_q_ghz"] - 7.6) / 7.6 < 0.02
    lines = (out / "levels.csv").read_text().splitlines()
    assert lines[0] == "level,energy_ghz"
    assert float(lines[1].split(",")[1]) == 0.0
    manifest = read_json(out / "manifest.json")
    assert manifest["subcommand"] == "spectrum"
    assert set(manifest["versions"]) == {"python", "numpy", "scipy", "scqsim"}


def test_spectrum_unknown_key_exit_2(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("e_j_ghz = 20.0\ne_c_ghz = 0.4\ntypo_key = 1\n")
    assert run_cli(["spectrum", "--config", cfg, "--out", tmp_path / "o"]) == 2
    assert "typo_key" in capsys.readouterr().err


def test_qec_flags_without_config(tmp_path):
    out = tmp_path / "qec"
    code = run_cli(["qec", "--d", 3, "--p", 0.0, "--shots", 100, "--out", out])
    assert code == 0
    report = read_json(out / "qec.json")
    assert report["logical_error_rate"] == 0.0
    assert report["shots"] == 100


def test_couple_subcommand(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text(
        "omega_q_ghz = 5.0\nomega_r_ghz = 6.0\ng_ghz = 0.1\nkappa_ghz = 0.02\n")
    out = tmp_path / "o"
    assert run_cli(["couple", "--config", cfg, "--out", out]) == 0
    rep = read_json(out / "couple.json")
    assert rep["chi_ghz"] == pytest.approx(0.01)
    assert rep["vacuum_rabi_splitting_ghz"] == pytest.approx(0.2, rel=1e-6)
    assert rep["kappa_is_snr_optimal"] is True


def test_evolve_subcommand(tmp_path):
    cfg = tmp_path / "e.cfg"
    cfg.write_text("t1_ns = 100.0\nt2_ns = 150.0\nt_end_ns = 50.0\nsamples = 11\n")
    out = tmp_path / "o"
    assert run_cli(["evolve", "--config", cfg, "--out", out]) == 0
    lines = (out / "evolve.csv").read_text().splitlines()
    assert lines[0] == "t_ns,p1,purity"
    assert len(lines) == 12


def test_gate_subcommand(tmp_path):
    cfg = tmp_path / "g.cfg"
    tau = (np.pi / 2) / (2 * np.pi * 0.01)
    cfg.write_text(f"kind = iswap\nj_ghz = 0.01\ntau_ns = {tau}\n")
    out = tmp_path / "o"
    assert run_cli(["gate", "--config", cfg, "--out", out]) == 0
    rep = read_json(out / "gate.json")
    assert rep["infidelity"] < 1e-9


def test_echo_subcommand(tmp_path):
    out = tmp_path / "o"
    assert run_cli(["echo", "--out", out]) == 0
    rep = read_json(out / "echo.json")
    assert rep["identity_residual"] < 1e-10
    assert rep["pi_pulses"] == 2


def test_experiment_subcommand(tmp_path):
    cfg = tmp_path / "x.cfg"
    cfg.write_text(
        "kind = t1\nt1_ns = 500\nt2_ns = 800\ntau_max_ns = 2500\npoints = 41\n")
    out = tmp_path / "o"
    assert run_cli(["experiment", "--config", cfg, "--out", out]) == 0
    fit = read_json(out / "t1_fit.json")
    assert abs(fit["params"]["t1"] - 500.0) / 500.0 < 0.01


def test_grape_subcommand(tmp_path):
    cfg = tmp_path / "g.cfg"
    cfg.write_text("n_slices = 4\ndt_ns = 1.6\nrestarts = 4\n"
                   "target_infidelity = 1e-5\n")
    out = tmp_path / "o"
    assert run_cli(["grape", "--config", cfg, "--out", out]) == 0
    rep = read_json(out / "grape.json")
    assert rep["converged"] is True
    assert rep["fidelity"] >= 0.9999
    header = (out / "pulse.csv").read_text().splitlines()[0]
    assert header == "t_ns,omega_x_GHz,omega_y_GHz"


def test_rb_subcommand(tmp_path):
    cfg = tmp_path / "rb.cfg"
    cfg.write_text(
        "lengths = 1, 2, 4, 8, 16, 32, 64, 128, 256\n"
        "sequences_per_length = 45\nshots = 250\ndepolarizing = 0.01\n")
    out = tmp_path / "o"
    assert run_cli(["rb", "--config", cfg, "--out", out, "--seed", "3"]) == 0
    rep = read_json(out / "rb.json")
    assert abs(rep["r"] - 0.01) / 0.01 < 0.05
    assert {"A", "p", "B", "r", "CI"} <= set(rep)


def test_numeric_failure_exit_3(tmp_path, capsys):
    cfg = tmp_path / "e.cfg"
    # driven qubit with a gigantic decay rate against a coarse step:
    # the integrator has to give up rather than emit garbage
    cfg.write_text("t1_ns = 0.001\ndrive_ghz = 0.5\nt_end_ns = 10.0\n"
                   "dt_ns = 1.0\nsamples = 3\n")
    assert run_cli(["evolve", "--config", cfg, "--out", tmp_path / "o"]) == 3
    assert "numeric failure" in capsys.readouterr().err


def test_missing_config_file_exit_2(tmp_path, capsys):
    assert run_cli(["spectrum", "--config", tmp_path / "nope.cfg",
                    "--out", tmp_path]) == 2


def test_deterministic_outputs(tmp_path):
    cfg = tmp_path / "rb.cfg"
    cfg.write_text("lengths = 1, 4, 16\nsequences_per_length = 8\nshots = 100\n"
                   "depolarizing = 0.02\n")
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert run_cli(["rb", "--config", cfg, "--out", out, "--seed", "7"]) == 0
        outs.append(out)
    assert (outs[0] / "rb.csv").read_bytes() == (outs[1] / "rb.csv").read_bytes()
    assert (outs[0] / "rb.json").read_bytes() == (outs[1] / "rb.json").read_bytes()
    m0 = read_json(outs[0] / "manifest.json")
    m1 = read_json(outs[1] / "manifest.json")
    m0.pop("timestamp")
    m1.pop("timestamp")
    assert m0 == m1


def test_twelve_significant_digits(tmp_path):
    out = tmp_path / "o"
    cfg = tmp_path / "s.cfg"
    cfg.write_text("e_j_ghz = 20.0\ne_c_ghz = 0.4\nnlevels = 3\n")
    assert run_cli(["spectrum", "--config", cfg, "--out", out]) == 0
    val = (out / "levels.csv").read_text().splitlines()[2].split(",")[1]
    assert len(val.replace(".", "").replace("-", "").lstrip("0")) >= 11


def test_module_entry_point(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("e_j_ghz = 20.0\ne_c_ghz = 0.4\n")
    proc = subprocess.run(
        [sys.executable, "-m", "scqsim", "spectrum", "--config", str(cfg),
         "--out", str(tmp_path / "o")],
        capture_output=True,
    )
    assert proc.returncode == 0

"""Batch front door: config-driven runs of every subsystem.

Usage::

    scqsim <subcommand> --config run.cfg --out results/ --seed 7

Subcommands: spectrum, couple, evolve, gate, grape, echo, qec, experiment,
rb.  Configs are key = value text with optional [section] headers, or JSON
(detected automatically).  Unknown keys are hard errors: a misspelled key
never silently falls back to a default.

Units contract (one table, everywhere): frequencies and rates in configs
are GHz (ordinary frequency, not angular), times in ns, angles in radians.
Keys carrying a unit end in a suffix (``_ghz``, ``_ns``, ``_rad``) unless
the unit is dimensionless or fixed by convention (``seed``, counts).

Outputs: CSV (comma separator, ``.`` decimal, mandatory header) and JSON
files with numerics printed to 12 significant digits, plus a
``manifest.json`` with the config hash, seed, and versions.  Identical
config + seed reproduces byte-identical outputs except for the manifest
timestamp.

Exit codes: 0 success, 2 configuration error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import sys
from pathlib import Path

import numpy as np
import scipy

from . import __version__, circuits, control, coupling, experiments, gates
from . import dynamics as dyn
from . import surface_code as sc
from .qcore import to_angular


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------

def _coerce(text: str):
    t = text.strip()
    low = t.lower()
    if low in ("true", "false"):
        return low == "true"
    if "," in t:
        return [_coerce(x) for x in t.split(",") if x.strip()]
    try:
        return int(t)
    except ValueError:
        pass
    try:
        return float(t)
    except ValueError:
        pass
    return t


def parse_config(text: str) -> dict:
    """JSON when it parses as JSON; otherwise [section]/key = value lines."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON config: {exc}") from exc
    out: dict = {}
    section = out
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            section = out.setdefault(name, {})
            continue
        if "=" not in line:
            raise ConfigError(f"line {ln}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        section[key.strip()] = _coerce(val)
    return out


def _flatten(cfg: dict, prefix: str = "") -> dict:
    flat = {}
    for k, v in cfg.items():
        name = f"{prefix}{k}"
        if isinstance(v, dict):
            flat.update(_flatten(v, f"{name}."))
        else:
            flat[name] = v
    return flat


def validate_keys(cfg: dict, allowed: dict) -> dict:
    """Check every key against the schema; fill defaults; reject strangers."""
    flat = _flatten(cfg)
    unknown = [k for k in flat if k not in allowed]
    if unknown:
        raise ConfigError(
            "unknown config key(s): " + ", ".join(sorted(unknown))
            + "; allowed: " + ", ".join(sorted(allowed))
        )
    merged = {k: v for k, v in allowed.items() if v is not ...}
    merged.update(flat)
    missing = [k for k, v in allowed.items() if v is ... and k not in flat]
    if missing:
        raise ConfigError("missing required key(s): " + ", ".join(sorted(missing)))
    return merged


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def fmt(x) -> str:
    return f"{x:.12g}"


def write_csv(path: Path, header: list, rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) if isinstance(v, float) else str(v)
                              for v in row) + "\n")


def _round_floats(obj):
    if isinstance(obj, float):
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return float(fmt(float(obj)))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _round_floats(obj.tolist())
    return obj


def write_json(path: Path, obj: dict) -> None:
    with open(path, "w") as fh:
        json.dump(_round_floats(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_manifest(out: Path, subcommand: str, config_bytes: bytes, seed: int):
    manifest = {
        "subcommand": subcommand,
        "inputs_sha256": hashlib.sha256(config_bytes).hexdigest(),
        "seed": seed,
        "versions": {
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "scqsim": __version__,
        },
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    write_json(out / "manifest.json", manifest)


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------

def run_spectrum(cfg: dict, out: Path, seed: int) -> None:
    allowed = {
        "circuit": "island", "e_j_ghz": ..., "e_c_ghz": ..., "e_l_ghz": 0.0,
        "n_ext": 0.0, "phi_ext_rad": 0.0, "nlevels": 5,
        "ncut": circuits.DEFAULT_NCUT, "npoints": circuits.DEFAULT_NPOINTS,
        "extent_rad": circuits.DEFAULT_EXTENT,
    }
    c = validate_keys(cfg, allowed)
    params = circuits.CircuitParams(
        c["e_j_ghz"], c["e_c_ghz"],
        0.0 if c["circuit"] == "island" else c["e_l_ghz"],
        c["n_ext"], c["phi_ext_rad"],
    )
    res = circuits.circuit_spectrum(params, int(c["nlevels"]), int(c["ncut"]),
                                    c["extent_rad"], int(c["npoints"]))
    write_csv(out / "levels.csv", ["level", "energy_ghz"],
              [(i, float(e)) for i, e in enumerate(res.levels)])
    write_json(out / "spectrum.json", {
        "omega_q_ghz": res.omega_q,
        "anharmonicity_ghz": res.anharmonicity,
        "e_j_over_e_c": params.e_j / params.e_c,
    })


def run_couple(cfg: dict, out: Path, seed: int) -> None:
    allowed = {"omega_q_ghz": ..., "omega_r_ghz": ..., "g_ghz": ...,
               "kappa_ghz": 0.0, "gamma_ghz": 0.0, "n_max": 10}
    c = validate_keys(cfg, allowed)
    p = coupling.JCParams(c["omega_q_ghz"], c["omega_r_ghz"], c["g_ghz"],
                          c["kappa_ghz"], c["gamma_ghz"], int(c["n_max"]))
    report = {}
    resonant = coupling.JCParams(c["omega_q_ghz"], c["omega_q_ghz"], c["g_ghz"],
                                 c["kappa_ghz"], c["gamma_ghz"], int(c["n_max"]))
    report["vacuum_rabi_splitting_ghz"] = coupling.vacuum_rabi_splitting(resonant)
    if p.is_dispersive:
        disp = coupling.dispersive_shift(p)
        report.update({
            "chi_ghz": disp.chi,
            "n_crit": disp.n_crit,
            "snr_optimal_kappa_ghz": disp.snr_optimal_kappa,
            "kappa_is_snr_optimal": disp.kappa_is_snr_optimal,
        })
    write_json(out / "couple.json", report)


def run_evolve(cfg: dict, out: Path, seed: int) -> None:
    allowed = {"t1_ns": float("inf"), "t2_ns": float("inf"),
               "drive_ghz": 0.0, "detuning_ghz": 0.0,
               "t_end_ns": ..., "dt_ns": 0.01, "samples": 201}
    c = validate_keys(cfg, allowed)
    collapse = []
    if np.isfinite(c["t1_ns"]):
        collapse.append(dyn.qubit_decay(1.0 / c["t1_ns"]))
    if np.isfinite(c["t2_ns"]):
        gphi = 1.0 / c["t2_ns"] - 0.5 / max(c["t1_ns"], 1e-12)
        if gphi > 0:
            collapse.append(dyn.qubit_dephasing(gphi))
    h = (
        to_angular(c["detuning_ghz"]) * np.diag([0.0, 1.0]).astype(complex)
        + 0.5 * to_angular(c["drive_ghz"]) * np.array([[0, 1], [1, 0]], complex)
    )
    times = np.linspace(0.0, c["t_end_ns"], int(c["samples"]))
    res = dyn.lindblad_evolve(h, np.diag([1.0, 0.0]).astype(complex), collapse,
                              times=times, dt=c["dt_ns"],
                              e_ops={"p1": np.diag([0.0, 1.0]).astype(complex)})
    rows = [
        (float(t), float(p1), float(state.purity()))
        for t, p1, state in zip(res.times, res.expectations["p1"], res.states)
    ]
    write_csv(out / "evolve.csv", ["t_ns", "p1", "purity"], rows)


def run_gate(cfg: dict, out: Path, seed: int) -> None:
    allowed = {"kind": ..., "j_ghz": 0.0, "tau_ns": 0.0, "epsilon_ghz": 0.0,
               "omega_q1_ghz": 5.0, "omega_q2_ghz": 5.5, "alpha_1_ghz": -0.3}
    c = validate_keys(cfg, allowed)
    kind = c["kind"]
    j_ang = to_angular(c["j_ghz"])
    if kind == "iswap":
        u = gates.iswap(j_ang, c["tau_ns"])
        target = gates.ISWAP_GATE
    elif kind == "bswap":
        u = gates.bswap(j_ang, c["tau_ns"])
        target = gates.BSWAP_GATE
    elif kind == "cz":
        u6 = gates.cz_coherent_exchange(j_ang, c["tau_ns"])
        u = gates.Operator(u6.entries[:4, :4])
        from .qcore import CZ_GATE
        target = CZ_GATE
    elif kind == "cr":
        q = coupling.TwoQubitParams(c["omega_q1_ghz"], c["omega_q2_ghz"],
                                    c["j_ghz"], alpha_1=c["alpha_1_ghz"])
        rep = gates.cr_gate(gates.CRParams(q, c["epsilon_ghz"]), c["tau_ns"])
        u, target = rep.propagator, rep.target
    else:
        raise ConfigError(f"unknown gate kind {kind!r}")
    infid = gates.gate_infidelity(u, target)
    write_json(out / "gate.json", {
        "kind": kind,
        "infidelity": infid,
        "propagator_re": np.real(u.entries),
        "propagator_im": np.imag(u.entries),
    })


def run_grape(cfg: dict, out: Path, seed: int) -> None:
    allowed = {"alpha_ghz": -0.2, "lambda": float(np.sqrt(2)), "n_slices": 4,
               "dt_ns": 0.0, "restarts": 8, "target_infidelity": 1e-4,
               "bound_ghz": 0.0, "max_iter": 3000}
    c = validate_keys(cfg, allowed)
    alpha = to_angular(c["alpha_ghz"])
    bounds = None
    if c["bound_ghz"]:
        b = abs(to_angular(c["bound_ghz"]))
        bounds = (-b, b)
    prob = control.transmon_pi_problem(
        alpha, c["lambda"], int(c["n_slices"]),
        dt=c["dt_ns"] or None, bounds=bounds,
        target_infidelity=c["target_infidelity"], max_iter=int(c["max_iter"]),
    )
    u0 = np.zeros((2, prob.n_slices))
    base = control.pi_pulse("gaussian", prob.total_time, nsamples=prob.n_slices + 1)
    u0[0] = base.omega_x[:-1]
    res = control.grape_multistart(prob, restarts=int(c["restarts"]), seed=seed,
                                   u0=u0)
    pulse = control.grape_pulse(prob, res)
    control.pulse_to_csv(pulse, out / "pulse.csv")
    write_json(out / "grape.json", {
        "infidelity": res.infidelity,
        "fidelity": res.fidelity,
        "converged": bool(res.converged),
        "iterations": int(len(res.trace)),
        "total_time_ns": prob.total_time,
    })


def run_echo(cfg: dict, out: Path, seed: int) -> None:
    allowed = {"kind": "hahn", "tau_ns": 10.0, "n": 1,
               "j_z_ghz": 0.05, "omega_max_ghz": 2.0, "npoints": 801}
    c = validate_keys(cfg, allowed)
    seq = control.refocus_sequence(c["kind"], c["tau_ns"], n=int(c["n"]))
    grid = np.linspace(0.0, to_angular(c["omega_max_ghz"]), int(c["npoints"]))
    f = control.filter_function(seq, grid)
    write_csv(out / "filter.csv", ["omega_rad_per_ns", "filter"],
              [(float(w), float(v)) for w, v in zip(grid, f)])
    h_qe = control.qubit_env_coupling(to_angular(c["j_z_ghz"]), "z",
                                      np.array([[1, 0], [0, -1]], complex))
    u = control.sequence_propagator(seq, h_qe)
    from .qcore import global_phase_distance
    residual = global_phase_distance(u.entries, np.eye(4))
    write_json(out / "echo.json", {
        "kind": c["kind"],
        "identity_residual": float(residual),
        "pi_pulses": len(seq.pi_pulse_times()),
    })


def run_qec(cfg: dict, out: Path, seed: int) -> None:
    allowed = {"d": 3, "p": 0.001, "cycles": 1, "shots": 10000}
    c = validate_keys(cfg, allowed)
    res = sc.logical_error_rate(int(c["d"]), float(c["p"]), int(c["cycles"]),
                                int(c["shots"]), seed)
    write_json(out / "qec.json", {
        "d": res.d, "p": res.p, "cycles": res.cycles, "shots": res.shots,
        "failures": res.failures, "logical_error_rate": res.rate,
        "ci95_low": res.ci_low, "ci95_high": res.ci_high, "seed": res.seed,
    })


def run_experiment(cfg: dict, out: Path, seed: int) -> None:
    allowed = {"kind": ..., "t1_ns": 10000.0, "t2_ns": 15000.0,
               "rabi_ghz": 0.01, "detuning_ghz": 0.001,
               "tau_max_ns": 1000.0, "points": 101, "shots": 0,
               "eps01": 0.0, "eps10": 0.0}
    c = validate_keys(cfg, allowed)
    taus = np.linspace(0.0, c["tau_max_ns"], int(c["points"]))
    readout = experiments.ReadoutModel(c["eps01"], c["eps10"],
                                       int(c["shots"]) or None)
    kind = c["kind"]
    if kind == "rabi":
        data = experiments.run_rabi(to_angular(c["rabi_ghz"]), taus,
                                    c["t1_ns"], c["t2_ns"], readout, seed)
        fit = experiments.fit_rabi(data.x, data.signal)
    elif kind == "t1":
        data = experiments.run_t1(taus, c["t1_ns"], c["t2_ns"], readout, seed)
        fit = experiments.fit_t1(data.x, data.signal)
    elif kind == "ramsey":
        data = experiments.run_ramsey(taus, c["t1_ns"], c["t2_ns"],
                                      c["detuning_ghz"], readout, seed)
        fit = experiments.fit_ramsey(data.x, data.signal)
    else:
        raise ConfigError(f"unknown experiment kind {kind!r}")
    write_csv(out / f"{kind}.csv", ["tau_ns", "signal", "sem"],
              [(float(t), float(s), float(e))
               for t, s, e in zip(data.x, data.signal, data.sem)])
    write_json(out / f"{kind}_fit.json", {
        "params": fit.params, "sigmas": fit.sigmas,
        "residual_norm": fit.residual_norm, "converged": fit.converged,
    })


def run_rb(cfg: dict, out: Path, seed: int) -> None:
    allowed = {"lengths": [1, 2, 4, 8, 16, 32, 64, 128, 256],
               "sequences_per_length": 40, "shots": 400,
               "depolarizing": 0.01, "interleaved": -1,
               "eps01": 0.0, "eps10": 0.0, "prep_error": 0.0}
    c = validate_keys(cfg, allowed)
    lengths = c["lengths"]
    if isinstance(lengths, (int, float)):
        lengths = [int(lengths)]
    cfg_rb = experiments.RBConfig(
        lengths=tuple(int(m) for m in lengths),
        sequences_per_length=int(c["sequences_per_length"]),
        shots=int(c["shots"]),
        error={"depolarizing": float(c["depolarizing"])},
        interleaved=int(c["interleaved"]) if int(c["interleaved"]) >= 0 else None,
        eps01=c["eps01"], eps10=c["eps10"], prep_error=c["prep_error"],
        seed=seed,
    )
    if cfg_rb.interleaved is None:
        res = experiments.rb_standard(cfg_rb)
        summary = {
            "A": res.a, "p": res.p, "B": res.b, "r": res.r,
            "CI": [res.r - 1.96 * res.r_sigma, res.r + 1.96 * res.r_sigma],
        }
        write_csv(out / "rb.csv", ["m", "survival", "sem"],
                  [(int(m), float(s), float(e))
                   for m, s, e in zip(res.lengths, res.survival, res.sem)])
    else:
        res = experiments.rb_interleaved(cfg_rb)
        summary = {
            "A": res.standard.a, "p": res.standard.p, "B": res.standard.b,
            "r": res.standard.r,
            "CI": [res.standard.r - 1.96 * res.standard.r_sigma,
                   res.standard.r + 1.96 * res.standard.r_sigma],
            "p_C": res.p_c, "r_C": res.r_c,
            "r_C_CI": [res.r_c - 1.96 * res.r_c_sigma,
                       res.r_c + 1.96 * res.r_c_sigma],
            "bounds": list(res.bounds),
        }
        write_csv(out / "rb.csv", ["m", "survival", "sem"],
                  [(int(m), float(s), float(e))
                   for m, s, e in zip(res.interleaved.lengths,
                                      res.interleaved.survival,
                                      res.interleaved.sem)])
    write_json(out / "rb.json", summary)


_SUBCOMMANDS = {
    "spectrum": run_spectrum,
    "couple": run_couple,
    "evolve": run_evolve,
    "gate": run_gate,
    "grape": run_grape,
    "echo": run_echo,
    "qec": run_qec,
    "experiment": run_experiment,
    "rb": run_rb,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scqsim",
        description="Superconducting-qubit simulation toolkit (batch runner)",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in _SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, default=None,
                       help="key=value or JSON config file")
        p.add_argument("--out", type=Path, default=Path("."),
                       help="output directory (must be writable)")
        p.add_argument("--seed", type=int, default=0,
                       help="64-bit RNG seed")
        p.add_argument("--threads", type=int, default=1,
                       help="thread cap for numeric kernels (best effort)")
        if name == "qec":
            p.add_argument("--d", type=int, default=None)
            p.add_argument("--p", type=float, default=None)
            p.add_argument("--cycles", type=int, default=None)
            p.add_argument("--shots", type=int, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            config_bytes = args.config.read_bytes()
            cfg = parse_config(config_bytes.decode())
        else:
            config_bytes = b""
            cfg = {}
        for flag in ("d", "p", "cycles", "shots"):
            if getattr(args, flag, None) is not None:
                cfg[flag] = getattr(args, flag)
        if not 0 <= args.seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")
        out = args.out
        out.mkdir(parents=True, exist_ok=True)
        if args.threads and args.threads > 1:
            try:
                from threadpoolctl import threadpool_limits
                threadpool_limits(limits=args.threads)
            except ImportError:
                pass
    except (ConfigError, OSError, UnicodeDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        _SUBCOMMANDS[args.subcommand](cfg, out, args.seed)
        write_manifest(out, args.subcommand, config_bytes, args.seed)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())

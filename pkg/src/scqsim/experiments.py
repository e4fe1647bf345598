"""Virtual characterization experiments and randomized benchmarking.

Experiments run on the Lindblad engine (rotating-frame models) and return
plain data series; the fitters are deterministic damped least squares
(Levenberg-Marquardt) seeded from spectral estimates, so identical data
always reproduce bit-identical fits.

Benchmarking is single-qubit only: the estimator formulas are
dimension-generic, but the 11,520-element two-qubit Clifford group is out
of scope here.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .coupling import DispersiveLimitError, JCParams
from .dynamics import lindblad_evolve, qubit_decay, qubit_dephasing
from .qcore import Operator, to_angular

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
N_Q = np.diag([0.0, 1.0]).astype(complex)


class FitQualityError(RuntimeError):
    """The decay fit landed outside its physical range."""


@dataclass(frozen=True)
class FitResult:
    params: dict
    sigmas: dict
    residual_norm: float
    converged: bool

    def __post_init__(self):
        if self.converged and not np.isfinite(self.residual_norm):
            raise ValueError("converged fit must report a finite residual norm")
        if any(s < 0 for s in self.sigmas.values()):
            raise ValueError("uncertainties must be >= 0")


@dataclass(frozen=True)
class ReadoutModel:
    """Projective readout with optional misassignment.

    eps01 = P(report 1 | qubit in 0), eps10 = P(report 0 | qubit in 1).
    ``shots`` = None returns noiseless expectation values; an integer
    samples binomially with the supplied rng.
    """

    eps01: float = 0.0
    eps10: float = 0.0
    shots: int | None = None

    def observed_p1(self, p1: float) -> float:
        return (1 - self.eps10) * p1 + self.eps01 * (1 - p1)

    def sample(self, p1: float, rng) -> tuple[float, float]:
        """Returns (mean, sem) of the observed excited-state fraction."""
        q = float(np.clip(self.observed_p1(p1), 0.0, 1.0))
        if self.shots is None:
            return q, 0.0
        k = rng.binomial(self.shots, q)
        mean = k / self.shots
        sem = np.sqrt(max(mean * (1 - mean), 1e-12) / self.shots)
        return mean, sem


@dataclass(frozen=True)
class ExperimentData:
    x: np.ndarray
    signal: np.ndarray
    sem: np.ndarray
    label: str = ""


def _collapse_ops(t1: float, t2: float):
    if t2 > 2 * t1 + 1e-12:
        raise ValueError("T2 cannot exceed 2 T1")
    ops = []
    if np.isfinite(t1):
        ops.append(qubit_decay(1.0 / t1))
    gamma_phi = (1.0 / t2 - 0.5 / t1) if np.isfinite(t2) else 0.0
    if gamma_phi > 0:
        ops.append(qubit_dephasing(gamma_phi))
    return ops


# ---------------------------------------------------------------------------
# Spectroscopy
# ---------------------------------------------------------------------------

def resonator_response(p: JCParams, qubit_state: str, omega: np.ndarray) -> np.ndarray:
    """Complex transmission of the dispersively shifted readout resonator.

    Lorentzian line S(w) = (kappa/2) / (kappa/2 + i (w - w0)) with
    w0 = omega_r + chi for the qubit in |g> and omega_r - chi in |e>
    (chi = g^2 / Delta_qr), so the two peaks are split by exactly 2 chi.
    The phase runs from +pi/2 through 0 to -pi/2 across the line.
    """
    if qubit_state not in ("g", "e"):
        raise ValueError("qubit_state must be 'g' or 'e'")
    if p.g > 0 and not p.is_dispersive:
        raise DispersiveLimitError("resonator_response requires the dispersive limit")
    if p.kappa <= 0:
        raise ValueError("resonator linewidth kappa must be > 0")
    chi = p.g**2 / p.detuning if p.g > 0 else 0.0
    w0 = p.omega_r + chi if qubit_state == "g" else p.omega_r - chi
    omega = np.asarray(omega, dtype=float)
    return (p.kappa / 2) / (p.kappa / 2 + 1j * (omega - w0))


def two_tone_scan(
    omega_q: float,
    t1: float,
    t2: float,
    drive_rate: float,
    omega_d: np.ndarray,
    chi: float = 0.0,
    settle: float = 8.0,
    dt: float | None = None,
) -> np.ndarray:
    """Steady-state excited population versus drive frequency (GHz grid).

    Runs the rotating-frame Lindblad model per drive point until ~settle
    transverse lifetimes have passed.  ``drive_rate`` is the Rabi rate in
    rad/ns; linearity requires the saturation parameter
    s = drive_rate^2 T1 T2 << 1 (warned above 0.5).  When the qubit is
    measured through its resonator the line sits at the Lamb-shifted
    frequency omega_q - chi; passing ``chi`` applies that convention.
    """
    s = drive_rate**2 * t1 * t2
    if s > 0.5:
        warnings.warn(
            f"saturation parameter {s:.2f} leaves the linear-response regime",
            stacklevel=2,
        )
    peak = omega_q - chi
    collapse = _collapse_ops(t1, t2)
    t_end = settle * t2
    if dt is None:
        dt = min(t2 / 200.0, 0.5)
    out = np.empty(len(omega_d))
    rho0 = np.diag([1.0, 0.0]).astype(complex)
    for i, wd in enumerate(np.asarray(omega_d, dtype=float)):
        delta = to_angular(peak - wd)
        h = delta * N_Q + 0.5 * drive_rate * SIGMA_X
        res = lindblad_evolve(h, rho0, collapse, times=np.array([0.0, t_end]),
                              dt=dt, e_ops={"p1": N_Q})
        out[i] = res.expectations["p1"][-1]
    return out


# ---------------------------------------------------------------------------
# Time-domain experiments
# ---------------------------------------------------------------------------

def run_rabi(rabi_rate: float, taus: np.ndarray, t1: float = np.inf,
             t2: float = np.inf, readout: ReadoutModel = ReadoutModel(),
             seed: int = 0, dt: float | None = None) -> ExperimentData:
    """Drive-length sweep: excited population after driving for each tau.

    ``rabi_rate`` is angular (rad/ns).  The drive is resonant and static,
    so one evolution sampled at every tau reproduces the pulsed experiment
    exactly.
    """
    taus = np.asarray(taus, dtype=float)
    if dt is None:
        dt = min(0.05 / max(rabi_rate / (2 * np.pi), 1e-6), 1.0)
    h = 0.5 * rabi_rate * SIGMA_X
    res = lindblad_evolve(h, np.diag([1.0, 0.0]).astype(complex),
                          _collapse_ops(t1, t2), times=taus, dt=dt,
                          e_ops={"p1": N_Q})
    rng = np.random.default_rng(seed)
    pairs = [readout.sample(p, rng) for p in res.expectations["p1"]]
    return ExperimentData(taus, np.array([m for m, _ in pairs]),
                          np.array([s for _, s in pairs]), "rabi")


def run_t1(taus: np.ndarray, t1: float, t2: float | None = None,
           readout: ReadoutModel = ReadoutModel(), seed: int = 0,
           pi_pulse_error: float = 0.0, dt: float | None = None) -> ExperimentData:
    """Inversion-recovery: pi pulse, wait tau, read the excited population.

    ``pi_pulse_error`` rotates by pi(1 - error) to model the miscalibration
    left over from the preceding Rabi calibration.
    """
    taus = np.asarray(taus, dtype=float)
    if t2 is None:
        t2 = 2 * t1
    theta = np.pi * (1.0 - pi_pulse_error)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    u = np.array([[c, -1j * s], [-1j * s, c]])
    rho0 = u @ np.diag([1.0, 0.0]).astype(complex) @ u.conj().T
    if dt is None:
        dt = t1 / 200.0
    res = lindblad_evolve(np.zeros((2, 2), dtype=complex), rho0,
                          _collapse_ops(t1, t2), times=taus, dt=dt,
                          e_ops={"p1": N_Q})
    rng = np.random.default_rng(seed)
    pairs = [readout.sample(p, rng) for p in res.expectations["p1"]]
    return ExperimentData(taus, np.array([m for m, _ in pairs]),
                          np.array([s for _, s in pairs]), "t1")


def run_ramsey(taus: np.ndarray, t1: float, t2: float, detuning: float,
               readout: ReadoutModel = ReadoutModel(), seed: int = 0,
               dt: float | None = None) -> ExperimentData:
    """Ramsey fringes: pi/2, free evolution at ``detuning`` (GHz), -pi/2.

    The free evolution is simulated once; the closing pi/2 rotation is
    applied to a copy of the state at every sampled tau.
    """
    taus = np.asarray(taus, dtype=float)
    c = 1 / np.sqrt(2)
    u_half = np.array([[c, -1j * c], [-1j * c, c]])        # R_x(pi/2)
    u_back = u_half.conj().T                               # R_x(-pi/2)
    rho0 = u_half @ np.diag([1.0, 0.0]).astype(complex) @ u_half.conj().T
    h = to_angular(detuning) * N_Q
    if dt is None:
        dt = min(t2 / 200.0, 0.05 / max(abs(detuning), 1e-6))
    res = lindblad_evolve(h, rho0, _collapse_ops(t1, t2), times=taus, dt=dt)
    rng = np.random.default_rng(seed)
    means, sems = [], []
    for state in res.states:
        rho = u_back @ state.entries @ u_back.conj().T
        m, s = readout.sample(float(rho[1, 1].real), rng)
        means.append(m)
        sems.append(s)
    return ExperimentData(taus, np.array(means), np.array(sems), "ramsey")


def projective_readout(rho: np.ndarray, rng,
                       model: ReadoutModel = ReadoutModel()) -> tuple[int, np.ndarray]:
    """Sample a projective qubit measurement and collapse the state.

    The collapse is ideal (QND): repeating the measurement reproduces the
    outcome.  Misassignment affects only the *reported* bit.
    """
    p1 = float(np.real(rho[1, 1]))
    actual = 1 if rng.random() < p1 else 0
    post = np.zeros_like(rho)
    post[actual, actual] = 1.0
    reported = actual
    if actual == 0 and rng.random() < model.eps01:
        reported = 1
    elif actual == 1 and rng.random() < model.eps10:
        reported = 0
    return reported, post


# ---------------------------------------------------------------------------
# Curve fitting
# ---------------------------------------------------------------------------

def _lm_fit(model, jac, x, y, p0, names) -> FitResult:
    try:
        sol = least_squares(
            lambda p: model(p, x) - y, p0, jac=lambda p: jac(p, x), method="lm",
            max_nfev=20000,
        )
    except Exception:
        return FitResult({n: np.nan for n in names}, {n: np.inf for n in names},
                         np.inf, False)
    res = sol.fun
    m, n = len(x), len(p0)
    dof = max(m - n, 1)
    s2 = float(res @ res) / dof
    jtj = sol.jac.T @ sol.jac
    cov = np.linalg.pinv(jtj) * s2
    sig = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    params = dict(zip(names, (float(v) for v in sol.x)))
    sigmas = dict(zip(names, (float(v) for v in sig)))
    return FitResult(params, sigmas, float(np.linalg.norm(res)), bool(sol.success))


def _fft_frequency(x: np.ndarray, y: np.ndarray) -> float:
    """Dominant angular frequency of a uniformly sampled series (DC excluded)."""
    n = len(x)
    dt = x[1] - x[0]
    spec = np.abs(np.fft.rfft(y - np.mean(y)))
    freqs = np.fft.rfftfreq(n, dt)
    if len(spec) <= 1:
        return 0.0
    k = 1 + int(np.argmax(spec[1:]))
    return 2 * np.pi * freqs[k]


def fit_rabi(x: np.ndarray, y: np.ndarray) -> FitResult:
    """A0 + A1 cos(Omega t + A2) exp(-t / T_R); Omega seeded from the FFT.

    Pure-decay data (no resolvable oscillation) fall back to the decay-only
    branch with Omega = 0 so the phase degeneracy cannot blow up the
    uncertainties.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 8:
        raise ValueError("need at least 8 points")
    omega0 = _fft_frequency(x, y)
    span = x[-1] - x[0]
    if omega0 * span < np.pi:        # less than half an oscillation: degenerate
        dec = fit_t1(x, y)
        params = {"a0": dec.params["a0"], "a1": dec.params["a1"], "a2": 0.0,
                  "omega": 0.0, "t_r": dec.params["t1"]}
        sigmas = {"a0": dec.sigmas["a0"], "a1": dec.sigmas["a1"], "a2": 0.0,
                  "omega": 0.0, "t_r": dec.sigmas["t1"]}
        return FitResult(params, sigmas, dec.residual_norm, dec.converged)

    def model(p, t):
        a0, a1, a2, w, tr = p
        return a0 + a1 * np.cos(w * t + a2) * np.exp(-t / tr)

    def jac(p, t):
        a0, a1, a2, w, tr = p
        e = np.exp(-t / tr)
        c = np.cos(w * t + a2)
        s = np.sin(w * t + a2)
        return np.stack([
            np.ones_like(t),
            c * e,
            -a1 * s * e,
            -a1 * t * s * e,
            a1 * c * e * t / tr**2,
        ], axis=1)

    p0 = [float(np.mean(y)), float((np.max(y) - np.min(y)) / 2), np.pi,
          omega0, span]
    names = ["a0", "a1", "a2", "omega", "t_r"]
    return _lm_fit(model, jac, x, y, p0, names)


def fit_t1(x: np.ndarray, y: np.ndarray) -> FitResult:
    """A0 + A1 exp(-t / T1), seeded from the log-linear slope."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 8:
        raise ValueError("need at least 8 points")
    a0 = float(y[-1])
    a1 = float(y[0] - a0)
    resid = np.abs(y - a0)
    good = resid > max(1e-12, 0.05 * np.max(resid))
    if np.count_nonzero(good) >= 2:
        slope = np.polyfit(x[good], np.log(resid[good]), 1)[0]
        t10 = -1.0 / slope if slope < 0 else (x[-1] - x[0])
    else:
        t10 = x[-1] - x[0]
    t10 = float(np.clip(t10, (x[1] - x[0]) / 10, 1e6 * (x[-1] - x[0] + 1)))

    def model(p, t):
        return p[0] + p[1] * np.exp(-t / p[2])

    def jac(p, t):
        e = np.exp(-t / p[2])
        return np.stack([np.ones_like(t), e, p[1] * e * t / p[2] ** 2], axis=1)

    return _lm_fit(model, jac, x, y, [a0, a1, t10], ["a0", "a1", "t1"])


def fit_ramsey(x: np.ndarray, y: np.ndarray) -> FitResult:
    """A0 + A1 cos(omega_qd t + A2) exp(-t / T2): the Rabi form, renamed."""
    res = fit_rabi(x, y)
    params = {"a0": res.params["a0"], "a1": res.params["a1"],
              "a2": res.params["a2"], "omega_qd": res.params["omega"],
              "t2": res.params["t_r"]}
    sigmas = {"a0": res.sigmas["a0"], "a1": res.sigmas["a1"],
              "a2": res.sigmas["a2"], "omega_qd": res.sigmas["omega"],
              "t2": res.sigmas["t_r"]}
    return FitResult(params, sigmas, res.residual_norm, res.converged)


def fit_ramsey_gaussian(x: np.ndarray, y: np.ndarray, t1: float) -> FitResult:
    """A0 + A1 exp(-t^2 / T_G^2) exp(-t / 2 T1) with T1 fixed, not fitted.

    The Gaussian envelope models dephasing dominated by low-frequency
    noise; T1 must come from an independent measurement.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 8:
        raise ValueError("need at least 8 points")
    if not np.isfinite(t1) or t1 <= 0:
        raise ValueError("a measured, finite T1 is required")
    a0 = float(y[-1])
    a1 = float(y[0] - a0)
    # crude width seed: where the excess over a0 falls to 1/e of its start
    excess = np.abs(y - a0)
    thresh = excess[0] / np.e
    below = np.nonzero(excess < thresh)[0]
    tg0 = float(x[below[0]]) if len(below) else float(x[-1] / 2)
    tg0 = max(tg0, (x[1] - x[0]))

    def model(p, t):
        return p[0] + p[1] * np.exp(-(t / p[2]) ** 2) * np.exp(-t / (2 * t1))

    def jac(p, t):
        g = np.exp(-(t / p[2]) ** 2) * np.exp(-t / (2 * t1))
        return np.stack([
            np.ones_like(t),
            g,
            p[1] * g * 2 * t**2 / p[2] ** 3,
        ], axis=1)

    return _lm_fit(model, jac, x, y, [a0, a1, tg0], ["a0", "a1", "t_g"])


# ---------------------------------------------------------------------------
# Single-qubit Clifford group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Clifford1Q:
    """One Clifford element with its canonical {H, S} word.

    The word reads in circuit order: "HS" applies H first, then S, i.e.
    matrix = S @ H.
    """

    op: Operator
    word: str


_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)


def _phase_key(m: np.ndarray) -> tuple:
    # normalize the global phase on the first clearly nonzero entry
    # (Clifford entries have magnitude 0, 1/sqrt2, or 1, so a 0.3 threshold
    # is immune to the float noise that breaks argmax ties)
    flat = m.reshape(-1)
    idx = int(np.argmax(np.abs(flat) > 0.3))
    nrm = flat[idx]
    canon = m * (abs(nrm) / nrm)
    return tuple(np.round(canon.reshape(-1), 8).tolist())


def clifford_1q() -> list[Clifford1Q]:
    """All 24 single-qubit Cliffords generated by H and S.

    Breadth-first over words, deduplicated up to global phase, so every
    element carries its shortest generator word (ties: lexicographic).
    """
    found = {}
    frontier = [("", np.eye(2, dtype=complex))]
    found[_phase_key(np.eye(2, dtype=complex))] = ("", np.eye(2, dtype=complex))
    while frontier and len(found) < 24:
        nxt = []
        for word, m in sorted(frontier, key=lambda t: t[0]):
            for gname, g in (("H", _H), ("S", _S)):
                w2 = word + gname
                m2 = g @ m
                key = _phase_key(m2)
                if key not in found:
                    found[key] = (w2, m2)
                    nxt.append((w2, m2))
        frontier = nxt
    elems = sorted(found.values(), key=lambda t: (len(t[0]), t[0]))
    assert len(elems) == 24
    return [Clifford1Q(Operator(m, unitary=True), w) for w, m in elems]


# ---------------------------------------------------------------------------
# Randomized benchmarking
# ---------------------------------------------------------------------------

_PAULI_LETTERS = {"X": np.array([[0, 1], [1, 0]], dtype=complex),
                  "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
                  "Z": np.array([[1, 0], [0, -1]], dtype=complex)}


def _conjugation_image(u: np.ndarray, letter: str) -> tuple[str, int]:
    m = u @ _PAULI_LETTERS[letter] @ u.conj().T
    for name, p in _PAULI_LETTERS.items():
        ov = np.trace(p @ m) / 2
        if abs(abs(ov) - 1) < 1e-9:
            return name, int(np.sign(ov.real))
    raise ValueError("not a Clifford operation")


@dataclass(frozen=True)
class _Tableau1Q:
    """Images of X and Z under conjugation: a single-qubit Clifford tableau."""

    x_img: tuple
    z_img: tuple

    def compose(self, after: "_Tableau1Q") -> "_Tableau1Q":
        """Tableau of (after o self)."""

        def push(img):
            letter, sign = img
            if letter == "X":
                l2, s2 = after.x_img
            elif letter == "Z":
                l2, s2 = after.z_img
            else:                      # Y = i X Z
                lx, sx = after.x_img
                lz, sz = after.z_img
                from .surface_code import _PAULI_MUL
                l2, k = _PAULI_MUL[(lx, lz)]
                # i * X Z = Y; carry through: i^(1+k) should be +-1 * letter
                phase = (1 + k) % 4
                s2 = sx * sz * (1 if phase == 0 else -1)
                if phase % 2:
                    raise AssertionError("non-Hermitian image")
            return l2, sign * s2

        return _Tableau1Q(push(self.x_img), push(self.z_img))

    def inverse_of(self, elements: list["_Tableau1Q"]) -> int:
        ident = _Tableau1Q(("X", 1), ("Z", 1))
        for i, t in enumerate(elements):
            if self.compose(t) == ident:
                return i
        raise ValueError("no inverse found (group table incomplete)")


def _ptm(u: np.ndarray) -> np.ndarray:
    """Pauli transfer matrix of a unitary on (I, X, Y, Z)/sqrt-free basis."""
    paulis = [np.eye(2, dtype=complex)] + [
        _PAULI_LETTERS[l] for l in ("X", "Y", "Z")
    ]
    r = np.empty((4, 4))
    for i, pi in enumerate(paulis):
        for j, pj in enumerate(paulis):
            r[i, j] = 0.5 * np.real(np.trace(pi @ u @ pj @ u.conj().T))
    return r


def depolarizing_ptm(rate: float) -> np.ndarray:
    """PTM of the depolarizing channel with average infidelity ``rate``.

    rho -> (1 - lam) rho + lam I/2 with lam = 2 * rate (for d = 2), so the
    RB decay parameter of this channel is p = 1 - lam.
    """
    lam = 2.0 * rate
    if not 0 <= lam <= 4 / 3:
        raise ValueError("depolarizing rate out of range")
    return np.diag([1.0, 1 - lam, 1 - lam, 1 - lam])


def t1t2_ptm(t1: float, t2: float, gate_time: float) -> np.ndarray:
    """Affine PTM of amplitude damping toward |0> plus dephasing."""
    if t2 > 2 * t1 + 1e-12:
        raise ValueError("T2 cannot exceed 2 T1")
    ez = np.exp(-gate_time / t1) if np.isfinite(t1) else 1.0
    et = np.exp(-gate_time / t2) if np.isfinite(t2) else 1.0
    m = np.diag([1.0, et, et, ez])
    m[3, 0] = 1.0 - ez           # relax toward z = +1 (ground = |0>)
    return m


@dataclass(frozen=True)
class RBConfig:
    """Randomized-benchmarking run description.

    ``error`` is either {'depolarizing': rate} or
    {'t1': ns, 't2': ns, 'gate_time': ns}; it is applied after every
    random Clifford including the closing inversion.  ``interleaved``
    names the gate of interest by its index in :func:`clifford_1q`;
    ``interleaved_error`` (same form as ``error``; default none) models
    that gate's own noise.
    """

    lengths: tuple
    sequences_per_length: int = 30
    shots: int = 200
    error: dict = field(default_factory=dict)
    interleaved: int | None = None
    interleaved_error: dict | None = None
    eps01: float = 0.0
    eps10: float = 0.0
    prep_error: float = 0.0
    seed: int = 0

    def __post_init__(self):
        ls = tuple(int(m) for m in self.lengths)
        if len(set(ls)) != len(ls) or any(m < 1 for m in ls):
            raise ValueError("lengths must be distinct integers >= 1")
        object.__setattr__(self, "lengths", ls)


def _error_ptm(spec: dict) -> np.ndarray:
    if not spec:
        return np.eye(4)
    if "depolarizing" in spec:
        return depolarizing_ptm(spec["depolarizing"])
    return t1t2_ptm(spec["t1"], spec["t2"], spec["gate_time"])


@dataclass(frozen=True)
class RBResult:
    lengths: np.ndarray
    survival: np.ndarray
    sem: np.ndarray
    a: float
    p: float
    b: float
    r: float
    r_sigma: float
    fit: FitResult


def _rb_survival(cfg: RBConfig, interleave: bool) -> tuple[np.ndarray, np.ndarray]:
    cliff = clifford_1q()
    ptms = [_ptm(np.asarray(c.op.entries)) for c in cliff]
    tabs = [
        _Tableau1Q(_conjugation_image(np.asarray(c.op.entries), "X"),
                   _conjugation_image(np.asarray(c.op.entries), "Z"))
        for c in cliff
    ]
    e_ptm = _error_ptm(cfg.error)
    i_ptm = ptms[cfg.interleaved] if interleave else None
    i_tab = tabs[cfg.interleaved] if interleave else None
    ie_ptm = _error_ptm(cfg.interleaved_error or {}) if interleave else None

    # prep: |0> with optional classical preparation error
    v0 = np.array([1.0, 0.0, 0.0, 1.0 - 2.0 * cfg.prep_error])
    seqs = np.random.SeedSequence(entropy=cfg.seed)
    children = seqs.spawn(len(cfg.lengths))
    means = np.empty(len(cfg.lengths))
    sems = np.empty(len(cfg.lengths))
    for li, m in enumerate(cfg.lengths):
        rng = np.random.default_rng(children[li])
        vals = np.empty(cfg.sequences_per_length)
        for s in range(cfg.sequences_per_length):
            picks = rng.integers(0, 24, size=m)
            v = v0.copy()
            acc = _Tableau1Q(("X", 1), ("Z", 1))
            for g in picks:
                v = e_ptm @ (ptms[g] @ v)
                acc = acc.compose(tabs[g])
                if interleave:
                    v = ie_ptm @ (i_ptm @ v)
                    acc = acc.compose(i_tab)
            inv = acc.inverse_of(tabs)
            v = e_ptm @ (ptms[inv] @ v)
            p1 = 0.5 * (1.0 - v[3])
            q = (1 - cfg.eps10) * (1 - p1) + cfg.eps01 * p1   # observed P(0)
            q = float(np.clip(q, 0.0, 1.0))
            if cfg.shots:
                vals[s] = rng.binomial(cfg.shots, q) / cfg.shots
            else:
                vals[s] = q
        means[li] = vals.mean()
        sems[li] = vals.std(ddof=1) / np.sqrt(len(vals)) if len(vals) > 1 else 0.0
    return means, sems


def fit_rb_decay(lengths, survival, sem=None) -> FitResult:
    """Weighted fit of A p^m + B (inverse-variance weights from shot noise)."""
    m = np.asarray(lengths, dtype=float)
    y = np.asarray(survival, dtype=float)
    if sem is None or np.all(np.asarray(sem) <= 0):
        w = np.ones_like(y)
    else:
        s = np.asarray(sem, dtype=float)
        floor = max(np.min(s[s > 0], initial=1e-3), 1e-4)
        w = 1.0 / np.clip(s, floor, None)
    b0 = float(np.clip(y[-1], 0.0, 1.0)) if y[-1] < 0.9 else 0.5
    a0 = float(np.clip(y[0] - b0, 1e-3, 1.0))
    decayed = np.clip((y - b0) / a0, 1e-6, None)
    slope = np.polyfit(m, np.log(decayed), 1)[0]
    p0 = float(np.clip(np.exp(slope), 1e-4, 0.99999))

    def model(p, t):
        return p[0] * p[1] ** t + p[2]

    def jac(p, t):
        pt = p[1] ** t
        return np.stack([pt, p[0] * t * p[1] ** (t - 1), np.ones_like(t)], axis=1)

    def wmodel(p, t):
        return model(p, t) * w

    def wjac(p, t):
        return jac(p, t) * w[:, None]

    return _lm_fit(wmodel, wjac, m, y * w, [a0, p0, b0], ["a", "p", "b"])


def rb_standard(cfg: RBConfig) -> RBResult:
    """Standard Clifford-group RB: random sequences closed by the exact
    inverse (tableau inversion), survival fit A p^m + B, and the average
    infidelity r = (d - 1)(1 - p)/d with d = 2.
    """
    means, sems = _rb_survival(cfg, interleave=False)
    fit = fit_rb_decay(cfg.lengths, means, sems)
    p = fit.params["p"]
    if not 0.0 < p <= 1.0 + 1e-6:
        raise FitQualityError(f"decay parameter p = {p!r} outside (0, 1]")
    p = min(p, 1.0)                      # flat zero-noise decay fits p = 1 + fuzz
    r = 0.5 * (1.0 - p)
    return RBResult(np.asarray(cfg.lengths, float), means, sems,
                    fit.params["a"], p, fit.params["b"], r,
                    0.5 * fit.sigmas["p"], fit)


@dataclass(frozen=True)
class InterleavedRBResult:
    standard: RBResult
    interleaved: RBResult
    p_c: float
    r_c: float
    r_c_sigma: float
    bounds: tuple


def rb_interleaved(cfg: RBConfig) -> InterleavedRBResult:
    """Interleaved RB of the gate named by ``cfg.interleaved``.

    r_C = (d - 1)(1 - p_C / p) / d, with the systematic bounds from the
    stochastic-vs-coherent caveat: coherent interference between the
    interleaved gate's error and the random gates' error can shift p_C, so
    the estimate is only guaranteed within ``bounds``.
    """
    if cfg.interleaved is None:
        raise ValueError("cfg.interleaved must name a Clifford index")
    std = rb_standard(cfg)
    means, sems = _rb_survival(cfg, interleave=True)
    fit = fit_rb_decay(cfg.lengths, means, sems)
    p_c = fit.params["p"]
    if not 0.0 < p_c <= 1.0 + 1e-6:
        raise FitQualityError(f"interleaved decay p_C = {p_c!r} outside (0, 1]")
    p_c = min(p_c, 1.0)
    p = std.p
    d = 2.0
    r_c = (d - 1) * (1.0 - p_c / p) / d
    # error propagation through the ratio
    var = (fit.sigmas["p"] / p) ** 2 + (p_c * std.fit.sigmas["p"] / p**2) ** 2
    r_c_sigma = 0.5 * float(np.sqrt(var))
    e1 = (d - 1) * (abs(p - p_c / p) + (1 - p)) / d
    e2 = (
        2 * (d**2 - 1) * (1 - p) / (p * d**2)
        + 4 * np.sqrt(1 - p) * np.sqrt(d**2 - 1) / p
    )
    eps = min(e1, e2)
    inter = RBResult(np.asarray(cfg.lengths, float), means, sems,
                     fit.params["a"], p_c, fit.params["b"], r_c,
                     r_c_sigma, fit)
    return InterleavedRBResult(std, inter, p_c, r_c, r_c_sigma,
                               (r_c - eps, r_c + eps))

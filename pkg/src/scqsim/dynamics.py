"""Open- and closed-system time evolution.

Generators here are in angular units (rad/ns); times in ns.  Integration is
fixed-step RK4 throughout: deterministic and bit-stable, which the
regression and acceptance suites rely on.  Adaptive stepping is deliberately
absent.

Collapse operators carry their rate inside the operator (units 1/sqrt(ns)).
The qubit constructors follow the standard open-system model

    L1 = sqrt(Gamma_par) * (|0><1|)      energy decay |1> -> |0>
    L2 = sqrt(Gamma_phi / 2) * sigma_z   pure dephasing

and the resonator constructor keeps the printed sqrt(kappa/2pi) a form:
with kappa in rad/ns the photon number then decays at kappa/2pi per ns,
i.e. at the *ordinary* frequency matching that angular kappa.  Use
``kappa_for_photon_rate`` to go from a target 1/ns decay rate to the kappa
argument and avoid double-counting the 2pi.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .qcore import DensityMatrix, Operator, StateVector, annihilation, expm_hermitian

TRACE_HARD_LIMIT = 1e-4
TRACE_SOFT_LIMIT = 1e-6


class IntegrationError(RuntimeError):
    """Trace drift exceeded the hard limit; retry with a smaller dt."""


@dataclass(frozen=True)
class TimeDependentH:
    """H(t) = H0 + sum_k u_k(t) H_k with real envelope functions u_k.

    ``static`` and every drive operator are in rad/ns and share one dimension.
    """

    static: np.ndarray
    drives: Sequence[tuple[np.ndarray, Callable[[float], float]]] = ()

    def __post_init__(self):
        h0 = _as_array(self.static)
        object.__setattr__(self, "static", h0)
        drives = tuple((_as_array(op), fn) for op, fn in self.drives)
        for op, _ in drives:
            if op.shape != h0.shape:
                raise ValueError("all drive operators must share the static dim")
        object.__setattr__(self, "drives", drives)

    @property
    def dim(self) -> int:
        return self.static.shape[0]

    def at(self, t: float) -> np.ndarray:
        h = self.static.copy()
        for op, fn in self.drives:
            h += float(fn(t)) * op
        return h


def _as_array(x) -> np.ndarray:
    if isinstance(x, Operator):
        return np.asarray(x.entries, dtype=complex)
    return np.asarray(x, dtype=complex)


def _as_hamiltonian(h) -> TimeDependentH:
    if isinstance(h, TimeDependentH):
        return h
    return TimeDependentH(_as_array(h))


@dataclass(frozen=True)
class EvolveResult:
    times: np.ndarray
    states: list
    expectations: dict = field(default_factory=dict)

    def final(self):
        return self.states[-1]


# ---------------------------------------------------------------------------
# Collapse-operator constructors
# ---------------------------------------------------------------------------

def qubit_decay(gamma_par: float) -> Operator:
    """sqrt(Gamma_par) |0><1|: thermalization of a two-level system."""
    if gamma_par < 0:
        raise ValueError("Gamma_par must be >= 0")
    m = np.zeros((2, 2), dtype=complex)
    m[0, 1] = np.sqrt(gamma_par)
    return Operator(m)


def qubit_dephasing(gamma_phi: float) -> Operator:
    """sqrt(Gamma_phi / 2) sigma_z: pure dephasing of a two-level system."""
    if gamma_phi < 0:
        raise ValueError("Gamma_phi must be >= 0")
    return Operator(np.sqrt(gamma_phi / 2) * np.diag([1.0, -1.0]).astype(complex))


def resonator_decay(kappa: float, n_levels: int) -> Operator:
    """sqrt(kappa / 2pi) a, kept verbatim in the printed form.

    kappa is angular (rad/ns); the resulting photon-number decay rate is
    kappa/2pi in 1/ns.  See the module docstring for the bookkeeping.
    """
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    return Operator(np.sqrt(kappa / (2 * np.pi)) * annihilation(n_levels).entries)


def kappa_for_photon_rate(rate_per_ns: float) -> float:
    """kappa argument of :func:`resonator_decay` giving d<n>/dt = -rate <n>."""
    return 2 * np.pi * rate_per_ns


# ---------------------------------------------------------------------------
# Lindblad evolution
# ---------------------------------------------------------------------------

def _lindblad_rhs_factory(h: TimeDependentH, collapse):
    ls = [_as_array(c) for c in collapse]
    ldags = [l.conj().T for l in ls]
    l2 = [ld @ l for l, ld in zip(ls, ldags)]

    if h.drives:
        def rhs(t, rho):
            hm = h.at(t)
            out = -1j * (hm @ rho - rho @ hm)
            for l, ld, ll in zip(ls, ldags, l2):
                out += l @ rho @ ld - 0.5 * (ll @ rho + rho @ ll)
            return out
    else:
        h0 = h.static

        def rhs(t, rho):
            out = -1j * (h0 @ rho - rho @ h0)
            for l, ld, ll in zip(ls, ldags, l2):
                out += l @ rho @ ld - 0.5 * (ll @ rho + rho @ ll)
            return out

    return rhs


def _coerce_rho(state) -> np.ndarray:
    if isinstance(state, DensityMatrix):
        return np.array(state.entries, dtype=complex)
    if isinstance(state, StateVector):
        v = state.amplitudes
        return np.outer(v, v.conj())
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        return np.outer(arr, arr.conj())
    return arr.copy()


def lindblad_evolve(
    h,
    rho0,
    collapse: Sequence = (),
    times: np.ndarray | None = None,
    dt: float = 1e-2,
    t_span: float | None = None,
    e_ops: dict | None = None,
) -> EvolveResult:
    """Fixed-step RK4 integration of the Lindblad master equation.

    d rho/dt = -i [H, rho] + sum_k (L_k rho L_k^dag - {L_k^dag L_k, rho}/2)

    ``times`` are the requested sample points (the grid is the union of RK4
    steps of size <= dt hitting each sample exactly).  Trace drift beyond
    1e-4 raises :class:`IntegrationError`, and so does positivity loss
    beyond -1e-6 (RK4 keeps the trace of this generator exactly, so an
    unstable step announces itself through the spectrum).  Drift inside
    those limits is repaired: renormalization above 1e-6 trace error,
    eigenvalue clipping of sub-threshold negative dust.
    """
    h = _as_hamiltonian(h)
    if times is None:
        if t_span is None:
            raise ValueError("provide either times or t_span")
        times = np.linspace(0.0, t_span, max(int(np.ceil(t_span / dt)) + 1, 2))
    times = np.asarray(times, dtype=float)
    rho = _coerce_rho(rho0)
    rhs = _lindblad_rhs_factory(h, collapse)
    e_ops = e_ops or {}
    e_arr = {k: _as_array(v) for k, v in e_ops.items()}

    states = [DensityMatrix(_repair(rho))]
    expect = {k: [float(np.trace(rho @ a).real)] for k, a in e_arr.items()}
    for i in range(len(times) - 1):
        t0, t1 = times[i], times[i + 1]
        span = t1 - t0
        nsub = max(int(np.ceil(span / dt - 1e-12)), 1)
        sub = span / nsub
        t = t0
        for _ in range(nsub):
            k1 = rhs(t, rho)
            k2 = rhs(t + sub / 2, rho + sub / 2 * k1)
            k3 = rhs(t + sub / 2, rho + sub / 2 * k2)
            k4 = rhs(t + sub, rho + sub * k3)
            rho = rho + sub / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t += sub
        drift = abs(np.trace(rho).real - 1.0)
        if not np.isfinite(drift) or drift > TRACE_HARD_LIMIT:
            raise IntegrationError(
                f"trace drift {drift:.2e} at t = {t1:.4g} ns; reduce dt below "
                f"{dt / 4:.3g}"
            )
        if drift > TRACE_SOFT_LIMIT:
            rho = rho / np.trace(rho).real
        rho = _repair(rho, t1)
        states.append(DensityMatrix(rho))
        for k, a in e_arr.items():
            expect[k].append(float(np.trace(rho @ a).real))
    return EvolveResult(times, states, {k: np.asarray(v) for k, v in expect.items()})


POSITIVITY_HARD_LIMIT = 1e-6


def _repair(rho: np.ndarray, t: float = 0.0) -> np.ndarray:
    """Symmetrize round-off; clip eigenvalue dust; reject real blow-ups."""
    rho = 0.5 * (rho + rho.conj().T)
    evals, vecs = np.linalg.eigh(rho)
    if not np.all(np.isfinite(evals)) or evals.min() < -POSITIVITY_HARD_LIMIT:
        raise IntegrationError(
            f"positivity lost (min eigenvalue {evals.min():.2e}) at "
            f"t = {t:.4g} ns; reduce dt"
        )
    if evals.min() < 0.0:
        clipped = np.clip(evals, 0.0, None)
        rho = (vecs * clipped) @ vecs.conj().T
        rho = rho / np.trace(rho).real
    return rho


# ---------------------------------------------------------------------------
# Unitary evolution
# ---------------------------------------------------------------------------

def step_propagators(h: TimeDependentH, times: np.ndarray, dt: float):
    """Midpoint-sampled piecewise-constant propagators over each [t_i, t_i+1]."""
    for i in range(len(times) - 1):
        t0, t1 = times[i], times[i + 1]
        span = t1 - t0
        nsub = max(int(np.ceil(span / dt - 1e-12)), 1)
        sub = span / nsub
        u = np.eye(h.dim, dtype=complex)
        for j in range(nsub):
            tm = t0 + (j + 0.5) * sub
            u = expm_hermitian(h.at(tm), scale=-1j * sub) @ u
        yield u


def unitary_evolve(
    h,
    state0,
    times: np.ndarray | None = None,
    dt: float = 1e-2,
    t_span: float | None = None,
    e_ops: dict | None = None,
) -> EvolveResult:
    """Closed-system evolution by a product of midpoint-sampled propagators.

    Accepts a StateVector (propagated as a ket) or a DensityMatrix
    (conjugated, rho -> U rho U^dag).  Exact for a static H regardless of dt.
    """
    h = _as_hamiltonian(h)
    if times is None:
        if t_span is None:
            raise ValueError("provide either times or t_span")
        times = np.linspace(0.0, t_span, max(int(np.ceil(t_span / dt)) + 1, 2))
    times = np.asarray(times, dtype=float)
    e_ops = e_ops or {}
    e_arr = {k: _as_array(v) for k, v in e_ops.items()}

    is_ket = isinstance(state0, StateVector) or (
        not isinstance(state0, DensityMatrix) and np.asarray(state0).ndim == 1
    )
    if is_ket:
        psi = np.array(
            state0.amplitudes if isinstance(state0, StateVector) else state0,
            dtype=complex,
        )
        states = [StateVector(psi.copy(), _skip_norm_check=True)]
        expect = {k: [float(np.vdot(psi, a @ psi).real)] for k, a in e_arr.items()}
        for u in step_propagators(h, times, dt):
            psi = u @ psi
            states.append(StateVector(psi.copy(), _skip_norm_check=True))
            for k, a in e_arr.items():
                expect[k].append(float(np.vdot(psi, a @ psi).real))
    else:
        rho = _coerce_rho(state0)
        states = [DensityMatrix(_repair(rho))]
        expect = {k: [float(np.trace(rho @ a).real)] for k, a in e_arr.items()}
        for u in step_propagators(h, times, dt):
            rho = u @ rho @ u.conj().T
            states.append(DensityMatrix(_repair(rho)))
            for k, a in e_arr.items():
                expect[k].append(float(np.trace(rho @ a).real))
    return EvolveResult(times, states, {k: np.asarray(v) for k, v in expect.items()})


def total_propagator(h, t_span: float, dt: float = 1e-2) -> Operator:
    """Time-ordered product of midpoint-sampled step propagators over [0, T]."""
    h = _as_hamiltonian(h)
    n = max(int(np.ceil(t_span / dt)), 1)
    times = np.linspace(0.0, t_span, n + 1)
    u = np.eye(h.dim, dtype=complex)
    for step in step_propagators(h, times, dt):
        u = step @ u
    return Operator(u)


# ---------------------------------------------------------------------------
# Rotating frame
# ---------------------------------------------------------------------------

def rotating_frame(h, h0, t: float) -> np.ndarray:
    """Frame-transformed generator e^{i H0 t} (H - H0) e^{-i H0 t} at time t."""
    hm = _as_array(h.at(t) if isinstance(h, TimeDependentH) else h)
    h0m = _as_array(h0)
    u = expm_hermitian(h0m, scale=1j * t)
    return u @ (hm - h0m) @ u.conj().T


def rwa_filter(h, h0, cutoff: float) -> np.ndarray:
    """Drop matrix elements of (H - H0) oscillating faster than ``cutoff``.

    In the eigenbasis of H0 the element (i, j) of the rotating-frame
    generator oscillates at |E_i - E_j| (rad/ns); elements above the cutoff
    are zeroed and the result is rotated back to the original basis.
    """
    hm = _as_array(h)
    h0m = _as_array(h0)
    evals, vecs = np.linalg.eigh(h0m)
    delta = hm - h0m
    tilde = vecs.conj().T @ delta @ vecs
    freq = np.abs(evals[:, None] - evals[None, :])
    tilde[freq > cutoff] = 0.0
    return h0m + vecs @ tilde @ vecs.conj().T

"""Simulation and control toolkit for gate-based superconducting quantum computing.

Subpackages
-----------
qcore
    Operators, states, Bloch vectors, tensor products, propagators.
circuits
    Superconducting-circuit Hamiltonians, spectra, and noise rates.
coupling
    Jaynes-Cummings physics, dispersive readout quantities, qubit-qubit
    coupling, and the classical two-oscillator analogy.
dynamics
    Closed- and open-system time evolution (von Neumann / Lindblad).
gates
    Analytic single- and two-qubit gate constructions with fidelity tools.
control
    Pulse shaping, DRAG, GRAPE optimization, refocusing sequences.
surface_code
    Surface-code lattice, stabilizer simulation, decoding, Monte Carlo.
experiments
    Virtual characterization experiments and randomized benchmarking.
cli
    Batch front door (``python -m scqsim`` or the ``scqsim`` script).
"""

from . import (
    circuits,
    control,
    coupling,
    dynamics,
    experiments,
    gates,
    qcore,
    surface_code,
)

__version__ = "0.1.0"

__all__ = [
    "qcore",
    "circuits",
    "coupling",
    "dynamics",
    "gates",
    "control",
    "surface_code",
    "experiments",
    "__version__",
]

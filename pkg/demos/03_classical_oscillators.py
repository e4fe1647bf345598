"""Two coupled classical oscillators: the cheat sheet for quantum coupling.

Three behaviors of a pair of spring-block oscillators joined by a coupling
spring map one-to-one onto qubit operations:

  (a) static coupling on resonance  -> energy exchange at 2*delta_f
      (vacuum Rabi oscillation / iSWAP-style exchange);
  (b) coupling modulated at f1 + f2 -> exponential growth of both
      amplitudes (parametric amplification / bSWAP);
  (c) drive on oscillator 1 at f2   -> linear growth of oscillator 2
      (resonant driving; a qubit saturates into Rabi oscillation instead).
"""

import numpy as np

from scqsim.coupling import (
    ClassicalOscParams,
    classical_oscillators,
    normal_mode_frequencies,
)


def main():
    print("(a) static coupling, resonant pair")
    p = ClassicalOscParams.resonant_pair()
    f_lo, f_hi = normal_mode_frequencies(p)
    traj = classical_oscillators(p, t_span=120.0)
    freqs, x1_mag, _ = traj.fourier()
    sel = (freqs > 0.5) & (freqs < 1.6)
    print(f"    normal modes {f_lo:.4f} / {f_hi:.4f} -> splitting "
          f"2 delta_f = {f_hi - f_lo:.4f}")
    top = freqs[sel][np.argsort(x1_mag[sel])[-4:]]
    print(f"    strongest FFT components near f1: {np.sort(top)}")
    env = traj.envelope(1)
    k_min = np.argmin(env[: len(env) // 2])
    print(f"    first energy-exchange null of x1 at t = "
          f"{traj.times[k_min]:.1f} (period 1/(2 delta_f) = "
          f"{1 / (f_hi - f_lo):.1f})")

    print("(b) parametric pump at f1 + f2")
    base = ClassicalOscParams()
    pb = ClassicalOscParams(kappa_m=0.75, f_m=base.f1 + base.f2)
    tb = classical_oscillators(pb, t_span=60.0)
    mask = tb.times > 10
    y = np.log(tb.envelope(2)[mask])
    slope = np.polyfit(tb.times[mask], y, 1)[0]
    print(f"    gain rate = {slope:.4f} per unit time; amplitude grew "
          f"{tb.envelope(2)[-1] / max(tb.envelope(1)[0], 1):,.0f}x")

    print("(c) resonant drive on oscillator 1 at f2")
    pc = ClassicalOscParams(a_d=30.0, f_d=base.f2, x0=(0, 0, 0, 0))
    tc = classical_oscillators(pc, t_span=40.0)
    slope = np.polyfit(tc.times, tc.envelope(2), 1)[0]
    print(f"    |x2| grows linearly at {slope:.4f} per unit time "
          f"while |x1| stays below {np.max(np.abs(tc.x1)):.2f}")


if __name__ == "__main__":
    main()

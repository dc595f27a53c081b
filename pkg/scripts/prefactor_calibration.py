"""Compare the printed z-torque prefactor with the Maxwell-stress flux.

Prints, for a set of random dipoles, the analytic torque, the stress-tensor
torque at three sphere radii, and their ratio.

    python scripts/prefactor_calibration.py [n_dipoles]
"""

import math
import sys

import numpy as np

from casimir_spin.dipole_radiation import ComplexDipoleAmplitude, radiated_torque_z, stress_tensor_torque_oracle


def main(n=8, seed=0):
    rng = np.random.default_rng(seed)
    print(f"{'k':>8} {'analytic':>14} {'oracle kr=5':>14} {'oracle kr=500':>14} {'ratio/pi':>12}")
    for _ in range(n):
        P = rng.normal(size=3) + 1j * rng.normal(size=3)
        p = ComplexDipoleAmplitude(P, rng.uniform(0.2, 3.0))
        a = radiated_torque_z(p).gamma_z
        near = stress_tensor_torque_oracle(p, 5.0 / p.k).gamma_z
        far = stress_tensor_torque_oracle(p, 500.0 / p.k).gamma_z
        print(f"{p.k:8.4f} {a:14.6e} {near:14.6e} {far:14.6e} {a / far / math.pi:12.9f}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 8)

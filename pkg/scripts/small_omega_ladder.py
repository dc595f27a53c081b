"""Deviation of the linearised mode torque from the exact one vs Omega/omega."""

import math

import numpy as np

from casimir_spin.rotating_scatter import (IncidentMode, SpinState, closed_form_torque,
                                           ez_slope_coefficients, small_omega_torque)

mode = IncidentMode(1.0, 1.0, 1.0)
theta = math.pi / 4
ratios = np.logspace(-4, -1, 7)
devs = []
for r in ratios:
    spin = SpinState(r, theta)
    exact = closed_form_torque(1.0, spin, mode)
    lin = small_omega_torque(1.0, spin, mode).gamma_z
    devs.append(abs(exact - lin) / abs(exact))
    print(f"Omega/omega = {r:8.1e}   exact = {exact: .10e}   rel. deviation = {devs[-1]:.3e}")
print(f"log-log slope: {np.polyfit(np.log(ratios), np.log(devs), 1)[0]:.4f}")
for k, v in ez_slope_coefficients().items():
    print(f"E_z coefficient ({k}): {v:.9f}")

"""Casimir torque and its dimensionless ratio across tilt angles and aspect ratios."""

import math

import numpy as np

from casimir_spin.polarizability import Ellipsoid
from casimir_spin.rotating_scatter import SpinState
from casimir_spin.vacuum_spectrum import casimir_torque

print(f"{'c/a':>6} {'theta':>7} {'alpha':>10} {'Gamma_C':>14} {'ratio':>10}")
for aspect in (0.5, 1.5, 2.0, 4.0):
    body = Ellipsoid(1.0, 1.0, aspect, 1.0, 5.0)
    for theta in np.linspace(0.0, math.pi / 2, 4):
        res = casimir_torque(body, SpinState(1e-3, theta), n_samples=0)
        ratio = "-" if res.dimensionless_ratio is None else f"{res.dimensionless_ratio:.4g}"
        print(f"{aspect:6.2f} {theta:7.4f} {res.alpha:10.5f} {res.gamma_c:14.6e} {ratio:>10}")

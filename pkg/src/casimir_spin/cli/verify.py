"""Oracle checks run by ``casimir-spin verify``.

Each check returns a dict with at least ``passed`` and the residual that
decided it. ``fault`` deliberately corrupts one analytic route so the
harness itself can be tested.
"""

from __future__ import annotations

import math

import numpy as np

from .. import dipole_radiation as dr
from ..oracles import dft_amplitudes
from ..polarizability import (Ellipsoid, depolarization_factors, polarizability_tensor,
                              spheroid_depolarization)
from ..rotating_scatter import (IncidentMode, SpinState, closed_form_torque, component_sum_torque,
                                decompose_rotating_polarization, ez_slope_coefficients,
                                mode_torque, small_omega_torque)
from ..vacuum_spectrum import VacuumIntegrationConfig, casimir_torque, with_cutoff

EXPECTED_EQ5_RATIO = dr.EQ5_PREFACTOR / dr.STRESS_PREFACTOR  # 16 pi


def check_sum_rule(rng, n=200, tol=1e-10):
    worst = 0.0
    for _ in range(n):
        a, b, c = np.exp(rng.uniform(math.log(0.1), math.log(10.0), 3))
        m = depolarization_factors(Ellipsoid(a, b, c), tol)
        worst = max(worst, abs(m.sum_residual))
    return {"passed": worst <= 1e-9, "max_residual": worst, "draws": n}


def check_sphere_limit():
    m = depolarization_factors(Ellipsoid(1.7, 1.7, 1.7, 1.0, 3.0))
    t = polarizability_tensor(Ellipsoid(1.7, 1.7, 1.7, 1.0, 3.0), m)
    dev = max(abs(x - 1.0 / 3.0) for x in m.as_tuple())
    alpha_rel = abs(t.alpha) / abs(t.beta)
    return {"passed": dev <= 1e-10 and alpha_rel <= 1e-12,
            "max_m_deviation": dev, "alpha_over_beta": alpha_rel}


def check_spheroid_closed_form(rng, n=50):
    worst = 0.0
    for _ in range(n):
        ecc = rng.uniform(0.05, 0.999)
        ratio = math.sqrt(1.0 - ecc**2)
        if rng.random() < 0.5:
            a, c = ratio, 1.0
        else:
            a, c = 1.0, ratio
        m = depolarization_factors(Ellipsoid(a, a, c))
        exact = spheroid_depolarization(a, c)
        worst = max(worst, abs(m.m_Z / exact - 1.0), abs(m.m_X / ((1.0 - exact) / 2.0) - 1.0))
    return {"passed": worst <= 1e-8, "max_rel_error": worst, "draws": n}


def check_stress_oracle(rng, n=20, fault="none"):
    prefactor = dr.EQ5_PREFACTOR * (2.0 if fault == "prefactor" else 1.0)
    ratios = []
    sign_ok = True
    for _ in range(n):
        P = rng.normal(size=3) + 1j * rng.normal(size=3)
        p = dr.ComplexDipoleAmplitude(P, rng.uniform(0.5, 2.0))
        analytic = dr.radiated_torque_z(p, prefactor=prefactor).gamma_z
        oracle = dr.stress_tensor_torque_oracle(p, 50.0 / p.k).gamma_z
        sign_ok &= math.copysign(1.0, analytic) == math.copysign(1.0, oracle)
        ratios.append(analytic / oracle)
    ratios = np.array(ratios)
    spread = float(np.max(np.abs(ratios / ratios.mean() - 1.0)))
    mismatch = abs(ratios.mean() / EXPECTED_EQ5_RATIO - 1.0)

    circ = dr.ComplexDipoleAmplitude([1.0, -1.0j, 0.0], 1.0)
    by_r = [dr.stress_tensor_torque_oracle(circ, kr).gamma_z for kr in (5.0, 50.0, 500.0)]
    r_spread = max(abs(g / by_r[0] - 1.0) for g in by_r)
    return {
        "passed": bool(sign_ok) and bool( spread <= 1e-6 and mismatch <= 1e-6 and r_spread <= 1e-6),
        "ratio": float(ratios.mean()),
        "expected_ratio": EXPECTED_EQ5_RATIO,
        "ratio_spread": spread,
        "ratio_mismatch": mismatch,
        "r_independence": r_spread,
        "signs_agree": bool(sign_ok),
    }


def _rational_spin(rng, omega, theta):
    q = int(rng.integers(3, 40))
    p = int(rng.integers(1, max(2, int(0.45 * q))))
    return SpinState(omega * p / q, theta)


def check_dft_decomposition(rng, n=20):
    worst = 0.0
    for _ in range(n):
        omega = rng.uniform(0.5, 2.0)
        spin = _rational_spin(rng, omega, rng.uniform(0.0, math.pi))
        mode = IncidentMode(omega, *rng.normal(size=2))
        alpha = rng.uniform(0.1, 2.0)
        dec = decompose_rotating_polarization(alpha, spin, mode)
        ref = dft_amplitudes(alpha, spin, mode)
        for shift, comp in dec:
            worst = max(worst, float(np.max(np.abs(comp.P_hat - ref[shift]))))
    return {"passed": worst <= 1e-10, "max_abs_error": worst, "draws": n}


def check_component_sum(rng, n=200):
    worst = 0.0
    for _ in range(n):
        spin = SpinState(rng.uniform(1e-3, 0.45), rng.uniform(0.0, math.pi))
        mode = IncidentMode(1.0, *rng.normal(size=2))
        worst = max(worst, mode_torque(rng.uniform(0.1, 2.0), spin, mode, rtol=math.inf).residual)
    zero = [
        closed_form_torque(1.0, SpinState(0.0, 1.0), IncidentMode(1.0, 1.0, 1.0)),
        closed_form_torque(1.0, SpinState(0.1, 0.0), IncidentMode(1.0, 1.0, 1.0)),
        closed_form_torque(1.0, SpinState(0.1, math.pi / 2), IncidentMode(1.0, 0.0, 1.0)),
    ]
    exact_zero = all(z == 0.0 for z in zero)
    return {"passed": worst <= 1e-10 and exact_zero, "max_rel_residual": worst,
            "null_cases_exactly_zero": exact_zero, "draws": n}


def small_omega_slope(theta=math.pi / 4, mode=None):
    mode = mode or IncidentMode(1.0, 1.0, 1.0)
    ratios = np.logspace(-4, -1, 7)
    devs = []
    for r in ratios:
        spin = SpinState(r * mode.omega, theta)
        exact = closed_form_torque(1.0, spin, mode)
        lin = small_omega_torque(1.0, spin, mode).gamma_z
        devs.append(abs(exact - lin) / abs(exact))
    return float(np.polyfit(np.log(ratios), np.log(devs), 1)[0])


def check_small_omega():
    slope = small_omega_slope()
    coeffs = ez_slope_coefficients()
    resolved = abs(coeffs["component_sum"] - coeffs["expected_linearized"]) <= 1e-6
    return {
        "passed": abs(slope - 2.0) <= 0.05 and resolved,
        "loglog_slope": slope,
        "ez_coefficient_finite_difference": coeffs["component_sum"],
        "ez_coefficient_closed_form": coeffs["closed_form"],
        "ez_coefficient_printed_closed_form": coeffs["printed_closed_form"],
        "ez_coefficient_linearized": coeffs["expected_linearized"],
    }


def check_resistivity(rng, n=200, fault="none"):
    flip = -1.0 if fault == "sign" else 1.0
    bad = 0
    for _ in range(n):
        omega = rng.uniform(0.5, 2.0)
        Omega = rng.uniform(-0.49, 0.49) * omega
        if Omega == 0.0:
            continue
        spin = SpinState(Omega, rng.uniform(0.05, math.pi - 0.05))
        mode = IncidentMode(omega, *rng.normal(size=2))
        g = flip * mode_torque(1.0, spin, mode).gamma_z
        if g != 0.0 and math.copysign(1.0, g) == math.copysign(1.0, Omega):
            bad += 1
    return {"passed": bad == 0, "violations": bad, "draws": n}


def check_vacuum_scalings():
    e = Ellipsoid(1.0, 1.0, 2.0, 1.0, 5.0)
    spin = SpinState(1e-3, math.pi / 3)
    base_cfg = VacuumIntegrationConfig()
    g = casimir_torque(e, spin, base_cfg, n_samples=0)
    omega_ratio = casimir_torque(e, SpinState(2e-3, spin.theta), base_cfg, n_samples=0).gamma_c / g.gamma_c
    wc = g.cutoff_omega
    cut_ratio = (casimir_torque(e, spin, with_cutoff(base_cfg, 2 * wc), n_samples=0).gamma_c
                 / casimir_torque(e, spin, with_cutoff(base_cfg, wc), n_samples=0).gamma_c)
    vols = [casimir_torque(e, spin, VacuumIntegrationConfig(volume=v), n_samples=0).gamma_c
            for v in (1.0, 1e3, 1e6)]
    vol_dev = max(abs(v / vols[0] - 1.0) for v in vols)
    passed = (abs(omega_ratio - 2.0) <= 1e-12 and abs(cut_ratio - 64.0) <= 1e-9
              and vol_dev <= 1e-12 and g.gamma_c * spin.Omega < 0
              and 1e-2 <= g.dimensionless_ratio <= 1e2)
    return {"passed": passed, "omega_doubling_ratio": omega_ratio, "cutoff_doubling_ratio": cut_ratio,
            "volume_deviation": vol_dev, "gamma_c": g.gamma_c,
            "dimensionless_ratio": g.dimensionless_ratio}


def run_checks(seed=12345, fault="none"):
    rng = np.random.default_rng(seed)
    return {
        "sum_rule": check_sum_rule(rng),
        "sphere_limit": check_sphere_limit(),
        "spheroid_closed_form": check_spheroid_closed_form(rng),
        "stress_oracle": check_stress_oracle(rng, fault=fault),
        "dft_decomposition": check_dft_decomposition(rng),
        "closed_form_vs_component_sum": check_component_sum(rng),
        "small_omega": check_small_omega(),
        "resistivity": check_resistivity(rng, fault=fault),
        "vacuum_scalings": check_vacuum_scalings(),
    }

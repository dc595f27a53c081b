"""Polarization of a spinning anisotropic dipole and the torque it feels.

The body's symmetry axis precesses as

    N(t) = (sin(theta) cos(Omega t), sin(theta) sin(Omega t), cos(theta))

and an in-phase incident field ``E cos(w t)`` induces
``P(t) = alpha N(t) (N(t).E) cos(w t)`` (the isotropic ``beta E`` part is
dropped unless requested, it carries no torque). Writing
``N = n0 + n_+ exp(i Omega t) + n_- exp(-i Omega t)`` gives the five
frequency components at ``w + s Omega``, ``s = -2..2`` in closed form.

Torque convention
-----------------
Every torque here is ``kappa * k^3 * i (P_x P_y^* - P_y P_x^*)`` summed over
components, with ``kappa = TORQUE_PREFACTOR = 4/3``: the normalisation in
which the closed-form spinning-dipole torque has coefficient ``1/6`` on its
``E_x^2`` term and the small-Omega slope has coefficients ``(2, 4)``. The
Maxwell-stress value of ``kappa`` is ``1/3``; see
:data:`casimir_spin.dipole_radiation.STRESS_PREFACTOR`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dipole_radiation import ANALYTIC, ComplexDipoleAmplitude, TorqueResult, radiated_torque_z
from .errors import ConsistencyError, PhysicsDomainError

TORQUE_PREFACTOR = 4.0 / 3.0
CONSISTENCY_RTOL = 1e-10
SHIFTS = (-2, -1, 0, 1, 2)


@dataclass(frozen=True)
class SpinState:
    """Rotation at ``Omega`` about z, symmetry axis tilted by ``theta``.

    ``Omega`` may be negative (clockwise spin).
    """

    Omega: float
    theta: float

    def __post_init__(self):
        if not math.isfinite(self.Omega):
            raise PhysicsDomainError("Omega must be finite")
        if not (0.0 <= self.theta <= math.pi):
            raise PhysicsDomainError(f"theta must lie in [0, pi], got {self.theta!r}")

    def axis(self, t):
        """``N(t)``; ``t`` may be an array, output has a trailing axis of 3."""
        t = np.asarray(t, dtype=float)
        s, c = tilt_trig(self.theta)
        return np.stack(
            [s * np.cos(self.Omega * t), s * np.sin(self.Omega * t), np.full_like(t, c)],
            axis=-1,
        )


@dataclass(frozen=True)
class IncidentMode:
    """Incident field ``(E_x, E_y, E_z) cos(omega t)``."""

    omega: float
    E_x: float
    E_z: float
    E_y: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega >= 0):
            raise PhysicsDomainError(f"omega must be finite and >= 0, got {self.omega!r}")

    @property
    def vector(self):
        return np.array([self.E_x, self.E_y, self.E_z], dtype=float)

    def at_time(self, t):
        t = np.asarray(t, dtype=float)
        return np.cos(self.omega * t)[..., None] * self.vector


@dataclass(frozen=True)
class SpectralDecomposition:
    """Components of ``P(t)`` at ``omega + shift * Omega``.

    Components whose shifted frequency is negative are stored folded: at
    ``|omega + shift * Omega|`` with the conjugate amplitude.
    """

    shifts: tuple
    components: tuple

    def __iter__(self):
        return iter(zip(self.shifts, self.components))

    def component(self, shift):
        return self.components[self.shifts.index(shift)]

    def reconstruct(self, t):
        """``P(t)`` summed over all components."""
        return sum(comp.at_time(t) for comp in self.components)


def tilt_trig(theta):
    """``(sin, cos)`` of the tilt with the round-off at 0, pi/2, pi snapped to 0."""
    s, c = math.sin(theta), math.cos(theta)
    if abs(s) < 1e-15:
        s = 0.0
    if abs(c) < 1e-15:
        c = 0.0
    return s, c


def _axis_harmonics(theta):
    s, c = tilt_trig(theta)
    n_plus = 0.5 * s * np.array([1.0, -1.0j, 0.0])
    return {0: np.array([0.0, 0.0, c], dtype=complex), 1: n_plus, -1: np.conj(n_plus)}


def decompose_rotating_polarization(
    alpha: float,
    spin: SpinState,
    mode: IncidentMode,
    beta: float = 0.0,
    c: float = 1.0,
) -> SpectralDecomposition:
    """Exact complex amplitudes of ``alpha N(t)(N(t).E) cos(w t) [+ beta E cos(w t)]``."""
    harm = _axis_harmonics(spin.theta)
    e = mode.vector
    coeff = {s: np.zeros(3, dtype=complex) for s in SHIFTS}
    for i, ni in harm.items():
        for j, nj in harm.items():
            coeff[i + j] += ni * (nj @ e)
    comps = []
    for s in SHIFTS:
        amp = alpha * coeff[s]
        if s == 0:
            amp = amp + beta * e
        freq = mode.omega + s * spin.Omega
        if freq < 0:
            freq, amp = -freq, np.conj(amp)
        comps.append(ComplexDipoleAmplitude(amp, freq, c=c))
    return SpectralDecomposition(shifts=SHIFTS, components=tuple(comps))


def _cube_difference(w, x):
    # (w - x)^3 - (w + x)^3 without cancellation
    return -2.0 * x * (3.0 * w * w + x * x)


def closed_form_torque(alpha, spin, mode, c=1.0, prefactor=TORQUE_PREFACTOR):
    """Closed-form z-torque of the spinning dipole for one incident mode.

    With the default prefactor this is

        alpha^2 (E_x^2 + E_y^2)/(6 c^3) sin^4(theta) [(w - 2 Omega)^3 - (w + 2 Omega)^3]
      + alpha^2 (4 E_z^2)/(6 c^3) sin^2(theta) cos^2(theta) [(w - Omega)^3 - (w + Omega)^3].
    """
    s, co = tilt_trig(spin.theta)
    s2, c2 = s * s, co * co
    w, om = mode.omega, spin.Omega
    transverse = mode.E_x**2 + mode.E_y**2
    t1 = transverse * s2 * s2 / 8.0 * _cube_difference(w, 2.0 * om)
    t2 = mode.E_z**2 * s2 * c2 / 2.0 * _cube_difference(w, om)
    return prefactor * alpha**2 * (t1 + t2) / c**3


def printed_closed_form_torque(alpha, spin, mode, c=1.0):
    """The closed form with ``2 E_z^2 / (6 c^3)`` on the second term.

    Kept for reporting only: its E_z term is half the component-sum value
    in the normalisation fixed by the first term.
    """
    s, co = tilt_trig(spin.theta)
    s2, c2 = s * s, co * co
    w, om = mode.omega, spin.Omega
    return alpha**2 / c**3 * (
        mode.E_x**2 / 6.0 * s2 * s2 * _cube_difference(w, 2.0 * om)
        + 2.0 * mode.E_z**2 / 6.0 * s2 * c2 * _cube_difference(w, om)
    )


def component_sum_torque(alpha, spin, mode, c=1.0, prefactor=TORQUE_PREFACTOR):
    """Sum of radiated torques of the five frequency components."""
    dec = decompose_rotating_polarization(alpha, spin, mode, c=c)
    parts = []
    for shift, comp in dec:
        g = radiated_torque_z(comp, prefactor=prefactor).gamma_z
        parts.append((mode.omega + shift * spin.Omega, g))
    return math.fsum(g for _, g in parts), parts


def _torque_scale(alpha, spin, mode, c, prefactor):
    w = abs(mode.omega) + 2.0 * abs(spin.Omega)
    return abs(prefactor) * alpha**2 * float(mode.vector @ mode.vector) * w**3 / c**3


def mode_torque(alpha, spin, mode, c=1.0, prefactor=TORQUE_PREFACTOR, rtol=CONSISTENCY_RTOL):
    """Torque for one incident mode, closed form cross-checked by component sum.

    Returns the closed-form value; ``components`` carries the per-frequency
    breakdown of the component sum and ``residual`` the relative difference
    between the two routes.

    Raises
    ------
    ConsistencyError
        If the two routes differ by more than ``rtol``.
    """
    exact = closed_form_torque(alpha, spin, mode, c=c, prefactor=prefactor)
    summed, parts = component_sum_torque(alpha, spin, mode, c=c, prefactor=prefactor)
    scale = max(abs(exact), abs(summed))
    if scale == 0.0:
        residual = 0.0
    else:
        # near-cancelling draws are judged against the unsigned scale
        scale = max(scale, 1e-6 * _torque_scale(alpha, spin, mode, c, prefactor))
        residual = abs(exact - summed) / scale
    if residual > rtol:
        raise ConsistencyError(
            f"closed form {exact!r} vs component sum {summed!r} (rel. residual {residual:.3e})",
            residual=residual,
        )
    return TorqueResult(gamma_z=exact, components=parts, method=ANALYTIC, residual=residual)


def small_omega_torque(alpha, spin, mode, c=1.0, prefactor=TORQUE_PREFACTOR):
    """Linear-in-Omega torque, ``-w^2 Omega alpha^2/c^3 [2 E_x^2 sin^4 + 4 E_z^2 sin^2 cos^2]``.

    This is the exact Omega-derivative of :func:`closed_form_torque` at
    ``Omega = 0`` times ``Omega``; the default prefactor gives the
    coefficients shown.
    """
    s, co = tilt_trig(spin.theta)
    s2, c2 = s * s, co * co
    transverse = mode.E_x**2 + mode.E_y**2
    bracket = 1.5 * transverse * s2 * s2 + 3.0 * mode.E_z**2 * s2 * c2
    g = -prefactor * mode.omega**2 * spin.Omega * alpha**2 * bracket / c**3
    return TorqueResult(gamma_z=g, components=[(mode.omega, g)], method=ANALYTIC)


def torque_slope_fd(torque_fn, alpha, theta, mode, c=1.0, rel_step=1e-6):
    """Central finite-difference ``dGamma/dOmega`` at ``Omega = 0``."""
    h = rel_step * mode.omega
    up = torque_fn(alpha, SpinState(h, theta), mode, c)
    down = torque_fn(alpha, SpinState(-h, theta), mode, c)
    return (up - down) / (2.0 * h)


def ez_slope_coefficients(omega=1.0, theta=math.pi / 4, c=1.0):
    """E_z-term small-Omega coefficients from three routes.

    Returns a dict with the coefficient ``C`` in
    ``dGamma/dOmega = -C w^2 alpha^2 E_z^2 sin^2 cos^2 / c^3`` obtained by
    finite differences of the component sum, of the corrected closed form,
    and of the printed closed form. ``expected_linearized`` is the value
    used by :func:`small_omega_torque`.
    """
    mode = IncidentMode(omega, 0.0, 1.0)
    norm = -(omega**2) * math.sin(theta) ** 2 * math.cos(theta) ** 2 / c**3

    def csum(a, s, m, cc):
        return component_sum_torque(a, s, m, c=cc)[0]

    def closed(a, s, m, cc):
        return closed_form_torque(a, s, m, c=cc)

    def printed(a, s, m, cc):
        return printed_closed_form_torque(a, s, m, c=cc)

    return {
        "component_sum": torque_slope_fd(csum, 1.0, theta, mode, c) / norm,
        "closed_form": torque_slope_fd(closed, 1.0, theta, mode, c) / norm,
        "printed_closed_form": torque_slope_fd(printed, 1.0, theta, mode, c) / norm,
        "expected_linearized": small_omega_torque(1.0, SpinState(1.0, theta), mode, c).gamma_z / norm,
    }

"""Zero-point spectrum sum of the small-Omega per-mode torque.

Each vacuum mode of frequency ``w`` contributes ``hbar w / (2V)`` to
``|E|^2``, shared isotropically between the three Cartesian components,
and there are ``8 pi V w^2 / c^3`` modes per unit frequency. The
integrand is therefore proportional to ``w^5`` and the integral is cut
off at ``w_c``, by default ``c / max(a, b, c)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial.laguerre import laggauss
from numpy.polynomial.legendre import leggauss

from .errors import ConfigError, PhysicsDomainError, ShapeError
from .polarizability import Ellipsoid, polarizability_tensor
from .rotating_scatter import TORQUE_PREFACTOR, IncidentMode, SpinState, small_omega_torque

SHARP = "sharp"
EXPONENTIAL = "exponential"
FIXED = "fixed"
SIZE_DERIVED = "size-derived"

# the exponential spectrum is sampled out to this many cutoffs
_EXP_SAMPLE_SPAN = 50.0


@dataclass(frozen=True)
class VacuumIntegrationConfig:
    """How the spectral integral is cut off and normalised.

    ``polarization_share`` is the fraction of ``<|E|^2>`` assigned to each
    Cartesian component of every mode; ``prefactor`` is the torque
    normalisation handed to the per-mode torque.
    """

    cutoff_omega: float | None = None
    cutoff_rule: str = SIZE_DERIVED
    cutoff_shape: str = SHARP
    hbar: float = 1.0
    c: float = 1.0
    quadrature_points: int = 64
    volume: float = 1.0
    polarization_share: float = 1.0 / 3.0
    prefactor: float = TORQUE_PREFACTOR

    def __post_init__(self):
        if self.cutoff_rule not in (FIXED, SIZE_DERIVED):
            raise ConfigError(f"unknown cutoff_rule {self.cutoff_rule!r}")
        if self.cutoff_shape not in (SHARP, EXPONENTIAL):
            raise ConfigError(f"unknown cutoff_shape {self.cutoff_shape!r}")
        if self.cutoff_rule == FIXED:
            if self.cutoff_omega is None or not (self.cutoff_omega > 0 and math.isfinite(self.cutoff_omega)):
                raise ConfigError(f"fixed cutoff needs cutoff_omega > 0, got {self.cutoff_omega!r}")
        if self.quadrature_points < 64:
            raise ConfigError("quadrature_points must be >= 64")
        if not (self.volume > 0 and self.hbar > 0 and self.c > 0):
            raise ConfigError("volume, hbar and c must be positive")

    def resolve_cutoff(self, e: Ellipsoid) -> float:
        if self.cutoff_rule == SIZE_DERIVED:
            return self.c / max(e.axes)
        return float(self.cutoff_omega)


@dataclass
class CasimirTorqueResult:
    gamma_c: float
    cutoff_omega: float
    alpha: float
    integrand_samples: list = field(default_factory=list)
    dimensionless_ratio: float | None = None


def mode_density(omega, volume, c=1.0):
    """Number of field modes per unit angular frequency, ``8 pi V w^2 / c^3``."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0) or volume <= 0:
        raise PhysicsDomainError("mode_density needs omega >= 0 and volume > 0")
    out = 8.0 * math.pi * volume * omega**2 / c**3
    return float(out) if out.ndim == 0 else out


def per_mode_field_square(omega, volume, hbar=1.0):
    """Zero-point contribution of one mode to ``|E|^2``, ``hbar w / (2V)``."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0) or volume <= 0:
        raise PhysicsDomainError("per_mode_field_square needs omega >= 0 and volume > 0")
    out = hbar * omega / (2.0 * volume)
    return float(out) if out.ndim == 0 else out


def ellipsoid_alpha(e: Ellipsoid) -> float:
    t = polarizability_tensor(e)
    if t.alpha is None:
        raise ShapeError("vacuum torque needs an axisymmetric ellipsoid (a == b)")
    return t.alpha


def _unit_slope(alpha, spin, cfg):
    # per-mode torque at w = 1 for unit total <|E|^2>
    amp = math.sqrt(cfg.polarization_share)
    mode = IncidentMode(1.0, amp, amp, E_y=amp)
    return small_omega_torque(alpha, spin, mode, c=cfg.c, prefactor=cfg.prefactor).gamma_z


def _integrand(omega, alpha, spin, cfg):
    """dGamma/dw without the cutoff window."""
    slope = _unit_slope(alpha, spin, cfg)
    omega = np.asarray(omega, dtype=float)
    return (mode_density(omega, cfg.volume, cfg.c)
            * per_mode_field_square(omega, cfg.volume, cfg.hbar)
            * omega**2 * slope)


def casimir_torque(e: Ellipsoid, spin: SpinState, cfg: VacuumIntegrationConfig | None = None,
                   n_samples: int = 65) -> CasimirTorqueResult:
    """Casimir friction torque on ``e`` spinning as ``spin``.

    The integrand is a polynomial in ``w`` (times ``exp(-w/w_c)`` for the
    smooth cutoff), so fixed-order Gauss-Legendre (Gauss-Laguerre) is
    exact.
    """
    cfg = cfg or VacuumIntegrationConfig()
    wc = cfg.resolve_cutoff(e)
    if not wc > 0:
        raise ConfigError(f"cutoff must be positive, got {wc!r}")
    alpha = ellipsoid_alpha(e)
    n = cfg.quadrature_points
    if cfg.cutoff_shape == SHARP:
        x, w = leggauss(n)
        nodes = 0.5 * wc * (x + 1.0)
        weights = 0.5 * wc * w
    else:
        x, w = laggauss(n)
        nodes = wc * x
        weights = wc * w
    gamma = math.fsum(weights * _integrand(nodes, alpha, spin, cfg))
    ref = cfg.hbar * abs(spin.Omega) * (alpha / e.volume_factor) ** 2
    ratio = abs(gamma) / ref if ref > 0 else None
    samples = torque_spectrum(e, spin, cfg, n_samples) if n_samples else []
    return CasimirTorqueResult(gamma_c=gamma, cutoff_omega=wc, alpha=alpha,
                               integrand_samples=samples, dimensionless_ratio=ratio)


def torque_spectrum(e: Ellipsoid, spin: SpinState, cfg: VacuumIntegrationConfig | None = None,
                    n_samples: int = 65):
    """``(w, dGamma/dw)`` on a uniform grid.

    The grid spans ``[0, w_c]`` for the sharp cutoff and
    ``[0, 50 w_c]`` for the exponential one.
    """
    if n_samples < 2:
        raise PhysicsDomainError("n_samples must be >= 2")
    cfg = cfg or VacuumIntegrationConfig()
    wc = cfg.resolve_cutoff(e)
    alpha = ellipsoid_alpha(e)
    if cfg.cutoff_shape == SHARP:
        grid = np.linspace(0.0, wc, n_samples)
        vals = _integrand(grid, alpha, spin, cfg)
    else:
        grid = np.linspace(0.0, _EXP_SAMPLE_SPAN * wc, n_samples)
        vals = _integrand(grid, alpha, spin, cfg) * np.exp(-grid / wc)
    return list(zip(grid.tolist(), vals.tolist()))


def with_cutoff(cfg: VacuumIntegrationConfig, cutoff_omega: float) -> VacuumIntegrationConfig:
    return replace(cfg, cutoff_omega=cutoff_omega, cutoff_rule=FIXED)

"""Depolarization factors and static polarizability of a dielectric ellipsoid.

The depolarization factor along semi-axis ``a`` is

    m_X = (abc / 2) * Integral_0^inf dz / ((z + a^2) R(z)),
    R(z) = sqrt((z + a^2)(z + b^2)(z + c^2)).

With ``z = L^2 (1 - u^2) / u^2`` (``L`` the largest semi-axis) and
``l_i = a_i / L`` this becomes the integral over ``u`` in ``[0, 1]`` of

    l_a l_b l_c u^2 / (d_a(u) sqrt(d_a d_b d_c)),   d_i = 1 - (1 - l_i^2) u^2,

whose integrand is analytic on the closed interval. The factors are
therefore scale invariant by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PhysicsDomainError, QuadratureError, ResonanceError, ShapeError
from .quadrature import gauss_kronrod

DEPOL_TOL = 1e-10
SYMMETRY_TOL = 1e-9
DEGENERATE_AXES = 1e-12

_AXES = ("X", "Y", "Z")


@dataclass(frozen=True)
class Ellipsoid:
    """Dielectric ellipsoid ``X^2/a^2 + Y^2/b^2 + Z^2/c^2 <= 1``.

    ``eps_ambient`` is the permittivity of the surrounding medium and
    ``eps_body`` that of the dielectric. Both are real.
    """

    a: float
    b: float
    c: float
    eps_ambient: float = 1.0
    eps_body: float = 2.0

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise PhysicsDomainError(f"semi-axis {name} must be positive and finite, got {v!r}")
        if not (math.isfinite(self.eps_ambient) and self.eps_ambient > 0):
            raise PhysicsDomainError(f"eps_ambient must be > 0, got {self.eps_ambient!r}")
        if not math.isfinite(self.eps_body):
            raise PhysicsDomainError(f"eps_body must be finite, got {self.eps_body!r}")

    @property
    def axes(self):
        return (self.a, self.b, self.c)

    @property
    def volume_factor(self):
        """The product ``abc``."""
        return self.a * self.b * self.c


@dataclass(frozen=True)
class DepolarizationFactors:
    m_X: float
    m_Y: float
    m_Z: float
    error: float = 0.0

    def as_tuple(self):
        return (self.m_X, self.m_Y, self.m_Z)

    @property
    def sum_residual(self):
        return self.m_X + self.m_Y + self.m_Z - 1.0


@dataclass(frozen=True)
class PolarizabilityTensor:
    """Principal polarizabilities (volume units) in the body frame.

    ``alpha`` and ``beta`` are only populated for an axisymmetric tensor
    (``A_XX == A_YY``), otherwise they are ``None``.
    """

    A_XX: float
    A_YY: float
    A_ZZ: float
    alpha: float | None = None
    beta: float | None = None

    @property
    def principal(self):
        return np.array([self.A_XX, self.A_YY, self.A_ZZ])

    def as_matrix(self, rotation=None):
        """Cartesian tensor ``R diag(A) R^T``; ``rotation`` maps body to lab frame."""
        d = np.diag(self.principal)
        if rotation is None:
            return d
        r = np.asarray(rotation, dtype=float)
        return r @ d @ r.T

    def is_axisymmetric(self, tol=SYMMETRY_TOL):
        scale = max(abs(self.A_XX), abs(self.A_YY), abs(self.A_ZZ))
        if scale == 0.0:
            return True
        return abs(self.A_XX - self.A_YY) <= tol * scale


def _integrand_factory(lam, axis):
    one_minus = 1.0 - lam**2
    prod = lam[0] * lam[1] * lam[2]

    def integrand(u):
        u2 = u * u
        d = 1.0 - one_minus[:, None] * u2[None, :]
        return prod * u2 / (d[axis] * np.sqrt(d[0] * d[1] * d[2]))

    return integrand


def depolarization_factors(e: Ellipsoid, tol: float = DEPOL_TOL) -> DepolarizationFactors:
    """Depolarization factors of ``e`` by adaptive Gauss-Kronrod quadrature.

    Raises
    ------
    QuadratureError
        If an axis integral does not converge or the sum rule fails by
        more than ``10 * tol``.
    """
    if not (0.0 < tol <= 1e-3):
        raise PhysicsDomainError(f"tol must lie in (0, 1e-3], got {tol!r}")
    axes = np.array(e.axes, dtype=float)
    lam = axes / axes.max()
    values = []
    err = 0.0
    for axis in range(3):
        res = gauss_kronrod(_integrand_factory(lam, axis), 0.0, 1.0, rtol=tol)
        values.append(res.value)
        err = max(err, res.error / abs(res.value))
    out = DepolarizationFactors(*values, error=err)
    if abs(out.sum_residual) > 10 * tol:
        raise QuadratureError(
            f"sum rule violated: m_X + m_Y + m_Z - 1 = {out.sum_residual:.3e}",
            estimate=out.as_tuple(),
            error=out.sum_residual,
        )
    return out


def spheroid_depolarization(a: float, c: float) -> float:
    """Closed-form depolarization factor along the symmetry axis of a spheroid.

    ``a`` is the equatorial and ``c`` the polar semi-axis. The transverse
    factors are ``(1 - m) / 2``.
    """
    if a <= 0 or c <= 0:
        raise PhysicsDomainError("spheroid semi-axes must be positive")
    if a == c:
        return 1.0 / 3.0
    if c > a:
        # prolate
        e2 = 1.0 - (a / c) ** 2
        e = math.sqrt(e2)
        if e < 0.05:
            # atanh(e) - e = e^3/3 + e^5/5 + ...
            s = sum(e2**k / (2 * k + 3) for k in range(12))
            return (1.0 - e2) * s
        return (1.0 - e2) / e**3 * (math.atanh(e) - e)
    # oblate: m = (1 + g^2)/g^3 (g - arctan g), g^2 = a^2/c^2 - 1
    g2 = (a / c) ** 2 - 1.0
    g = math.sqrt(g2)
    if g < 0.05:
        # g - arctan(g) = g^3/3 - g^5/5 + ...
        s = sum((-g2) ** k / (2 * k + 3) for k in range(12))
        return (1.0 + g2) * s
    return (1.0 + g2) / g**3 * (g - math.atan(g))


def polarizability_tensor(e: Ellipsoid, m: DepolarizationFactors | None = None) -> PolarizabilityTensor:
    """Principal polarizabilities ``A = abc / (3 [eps/(eps1 - eps) + m])``.

    Evaluated as ``abc (eps1 - eps) / (3 [eps + m (eps1 - eps)])`` so that
    ``eps1 == eps`` gives an exact zero instead of a division by zero.
    """
    if m is None:
        m = depolarization_factors(e)
    contrast = e.eps_body - e.eps_ambient
    values = []
    for axis, mi in zip(_AXES, m.as_tuple()):
        denom = e.eps_ambient + mi * contrast
        if contrast != 0.0 and abs(denom) <= 1e-14 * max(e.eps_ambient, abs(contrast)):
            raise ResonanceError(
                f"polarizability denominator vanishes along {axis} "
                f"(eps={e.eps_ambient}, eps1={e.eps_body}, m={mi})",
                axis=axis,
            )
        values.append(e.volume_factor * contrast / (3.0 * denom))
    if abs(e.a - e.b) < DEGENERATE_AXES * e.a:
        values[1] = values[0]
    t = PolarizabilityTensor(*values)
    if t.is_axisymmetric():
        alpha, beta = alpha_beta_split(t)
        t = PolarizabilityTensor(*values, alpha=alpha, beta=beta)
    return t


def alpha_beta_split(t: PolarizabilityTensor, axis=None, tol: float = SYMMETRY_TOL):
    """Split an axisymmetric tensor into ``alpha N N^T + beta I``.

    ``axis`` is the lab-frame unit vector ``N`` along the body's symmetry
    axis. It does not change the split; it is checked for unit length so
    that the reconstruction ``P = alpha N (N.E) + beta E`` is meaningful.
    """
    if axis is not None:
        n = np.asarray(axis, dtype=float)
        if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-12:
            raise PhysicsDomainError("symmetry axis must be a unit 3-vector")
    if not t.is_axisymmetric(tol):
        raise ShapeError(
            f"tensor is not axisymmetric about Z: A_XX={t.A_XX!r}, A_YY={t.A_YY!r}"
        )
    alpha = t.A_ZZ - 0.5 * (t.A_XX + t.A_YY)
    beta = t.A_XX
    return alpha, beta


def apply_split(alpha, beta, axis, field_vec):
    """``alpha N (N.E) + beta E``."""
    n = np.asarray(axis, dtype=float)
    e = np.asarray(field_vec)
    return alpha * n * (n @ e) + beta * e

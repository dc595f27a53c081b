"""Independent numerical checks that do not share code with the analytic routes."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import PhysicsDomainError
from .rotating_scatter import SHIFTS, IncidentMode, SpinState


def sampled_polarization(alpha, spin: SpinState, mode: IncidentMode, t, beta=0.0):
    """Time-domain ``alpha N(t)(N(t).E(t)) + beta E(t)``."""
    n = spin.axis(t)
    e = mode.at_time(t)
    ne = np.einsum("...i,...i->...", n, e)
    return alpha * n * ne[..., None] + beta * e


def dft_amplitudes(alpha, spin: SpinState, mode: IncidentMode, beta=0.0, max_denominator=1000):
    """Complex amplitudes at ``w + s Omega`` from an FFT over one common period.

    ``Omega / w`` must be a rational ``p/q`` with ``q <= max_denominator``.
    Returns ``{shift: amplitude}``; negative frequencies are folded the
    same way as the analytic decomposition.
    """
    if mode.omega <= 0:
        raise PhysicsDomainError("DFT oracle needs omega > 0")
    ratio = Fraction(spin.Omega / mode.omega).limit_denominator(max_denominator)
    if abs(float(ratio) * mode.omega - spin.Omega) > 1e-14 * mode.omega:
        raise PhysicsDomainError("Omega/omega is not a small-denominator rational")
    p, q = ratio.numerator, ratio.denominator
    base = mode.omega / q
    harmonics = {s: q + s * p for s in SHIFTS}
    top = max(abs(j) for j in harmonics.values())
    n_samples = 1 << max(5, int(math.ceil(math.log2(4 * top + 2))))
    t = 2.0 * math.pi / base * np.arange(n_samples) / n_samples
    spectrum = np.fft.fft(sampled_polarization(alpha, spin, mode, t, beta), axis=0) / n_samples
    out = {}
    for s, j in harmonics.items():
        if list(abs(v) for v in harmonics.values()).count(abs(j)) > 1:
            raise PhysicsDomainError(f"components coincide at harmonic {abs(j)}")
        if j == 0:
            out[s] = spectrum[0].real.astype(complex)
        else:
            # for j < 0 the bin at |j| already holds the folded (conjugated) amplitude
            out[s] = 2.0 * spectrum[abs(j)]
    return out

"""Diffraction at exact resonance.

The general result is a Bessel convolution of the s-vector,
``W_n = |sum_m i^m s_m J_{n-m}(u_r)|^2`` with ``u_r = 2 U t``.  For the
Gaussian packet the sum splits into two copies of the adiabatic lattice sum,
evaluated at ``+u_r`` and ``-u_r`` with width ``M1 = 4M`` and phase ``beta``;
the two copies drift apart and give a symmetric two-fringe pattern.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .adiabatic import bessel_support
from .errors import InvalidArgumentError
from .gaussian_dynamics import i_exact_lattice
from .pattern import DiffractionPattern, renormalized
from .specfun import bessel_j_array
from .wavepacket import GaussianSpec, WavePacket

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ResonantParams:
    u_r: float
    beta: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.u_r) and self.u_r >= 0):
            raise InvalidArgumentError("u_r must be a finite non-negative number")


def resonant_u(rabi_peak: float, duration: float) -> float:
    return 2.0 * rabi_peak * duration


def resonant_beta(spec: GaussianSpec) -> float:
    """Phase ramp of ``i^m s_m``, reduced to ``[0, 2 pi)``."""
    beta = 0.25 * (2.0 * spec.alpha + 2.0 * math.pi + math.pi * spec.detuning_sign)
    return beta % TWO_PI


def resonant_diffract(s: WavePacket, u_r: float) -> DiffractionPattern:
    """Exact-resonance pattern of an arbitrary s-vector."""
    if not (math.isfinite(u_r) and u_r >= 0):
        raise InvalidArgumentError("u_r must be a finite non-negative number")
    m = s.orders
    coeffs = np.array([1, 1j, -1, -1j])[np.mod(m, 4)] * s.amplitudes
    b = bessel_support(u_r)
    jv = bessel_j_array(b, u_r).values
    amps = np.convolve(coeffs, jv)
    probs = np.abs(amps) ** 2
    dropped = max(0.0, 1.0 - float(np.sum(probs)))
    return DiffractionPattern(s.n_min - b, probs, dropped, {"u_r": u_r})


def _fringe_sums(spec: GaussianSpec, u_r: float) -> tuple[int, np.ndarray, np.ndarray]:
    m1 = 4.0 * spec.M
    beta = resonant_beta(spec)
    lo_p, ip = i_exact_lattice(u_r, m1, beta)
    lo_m, im = i_exact_lattice(-u_r, m1, beta)
    lo = min(lo_p, lo_m)
    size = max(lo_p + ip.size, lo_m + im.size) - lo
    plus = np.zeros(size, dtype=complex)
    minus = np.zeros(size, dtype=complex)
    plus[lo_p - lo : lo_p - lo + ip.size] = ip
    minus[lo_m - lo : lo_m - lo + im.size] = im
    return lo, plus, minus


def gaussian_resonant_closed_form(spec: GaussianSpec, u_r: float) -> DiffractionPattern:
    """Two-fringe form ``|I_n(u_r) + (-1)^n I_n(-u_r)|^2``, normalised to unit mass."""
    lo, plus, minus = _fringe_sums(spec, u_r)
    sign = np.where(np.arange(lo, lo + plus.size) % 2 == 0, 1.0, -1.0)
    probs = np.abs(plus + sign * minus) ** 2
    return renormalized(lo, probs, {"u_r": u_r, "beta": resonant_beta(spec), "M1": 4.0 * spec.M})


def gaussian_resonant_separated(spec: GaussianSpec, u_r: float) -> DiffractionPattern:
    """Non-overlapping-fringe limit ``|I_n(u_r)|^2 + |I_n(-u_r)|^2``, normalised."""
    lo, plus, minus = _fringe_sums(spec, u_r)
    probs = np.abs(plus) ** 2 + np.abs(minus) ** 2
    return renormalized(lo, probs, {"u_r": u_r, "beta": resonant_beta(spec), "M1": 4.0 * spec.M})


def fringe_balance(pattern: DiffractionPattern) -> float:
    """Forward minus backward deflected probability."""
    return pattern.forward_fraction() - pattern.backward_fraction()


def fringe_peaks(pattern: DiffractionPattern) -> tuple[int, int]:
    """Most probable negative and positive orders."""
    n, w = pattern.orders, pattern.probabilities
    neg = n < 0
    pos = n > 0
    return int(n[neg][np.argmax(w[neg])]), int(n[pos][np.argmax(w[pos])])

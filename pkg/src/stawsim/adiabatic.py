"""Far-detuned (adiabatic) standing-wave diffraction.

After adiabatic elimination of the excited state the ground amplitude picks
up the phase ``(2 U0^2 tau / Delta) cos(2kz)``.  Expanding that phase in
Bessel functions gives the diffraction amplitudes on the even lattice; all
envelope detail collapses into the pulse area ``tau = int f(t)^2 dt``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidArgumentError, RegimeError
from .pattern import DiffractionPattern
from .specfun import bessel_j, bessel_j_array
from .wavepacket import WavePacket

ENVELOPES = ("rectangular", "sin2")
VALIDITY_MARGIN = 0.1


@dataclass(frozen=True)
class PulseParams:
    """Physical drive: peak Rabi frequency and detuning [rad/s], envelope, duration [s].

    ``recoil_frequency`` (hbar k^2 / 2m, rad/s) is only needed by the
    Raman-Nath validity check.
    """

    rabi_peak: float
    detuning: float
    duration: float
    envelope: str = "rectangular"
    recoil_frequency: float | None = None

    def __post_init__(self) -> None:
        if self.envelope not in ENVELOPES:
            raise InvalidArgumentError(f"envelope must be one of {ENVELOPES}, got {self.envelope!r}")
        for name in ("rabi_peak", "detuning", "duration"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidArgumentError(f"{name} must be finite")
        if self.recoil_frequency is not None and not self.recoil_frequency > 0:
            raise InvalidArgumentError("recoil_frequency must be positive")

    def envelope_value(self, t: float) -> float:
        if self.envelope == "rectangular":
            return 1.0 if 0.0 <= t <= self.duration else 0.0
        if not 0.0 <= t <= self.duration:
            return 0.0
        return math.sin(math.pi * t / self.duration) ** 2

    @property
    def adiabaticity(self) -> float:
        """``|Delta| t``; adiabatic formulas need this to be large."""
        return abs(self.detuning) * self.duration


@dataclass(frozen=True)
class AdiabaticParams:
    u: float
    detuning_sign: int = 1

    def __post_init__(self) -> None:
        if not (math.isfinite(self.u) and self.u >= 0):
            raise InvalidArgumentError(f"u must be a finite non-negative number, got {self.u}")
        if self.detuning_sign not in (-1, 1):
            raise InvalidArgumentError("detuning_sign must be +1 or -1")


@dataclass(frozen=True)
class ValidityReport:
    u: float
    n_max: int
    lhs: float
    rhs: float
    ratio: float
    valid: bool

    def as_dict(self) -> dict:
        return asdict(self)


def pulse_area(params: PulseParams) -> float:
    """Integral of the squared envelope over the pulse."""
    if params.duration < 0:
        raise InvalidArgumentError("pulse duration must be non-negative")
    if params.envelope == "rectangular":
        return params.duration
    # int_0^T sin^4(pi t / T) dt = 3T/8
    return 0.375 * params.duration


def interaction_parameter(params: PulseParams) -> AdiabaticParams:
    if params.detuning == 0:
        raise RegimeError("zero detuning: use the resonant module instead of the adiabatic one")
    u = 2.0 * params.rabi_peak**2 * pulse_area(params) / abs(params.detuning)
    return AdiabaticParams(u, 1 if params.detuning > 0 else -1)


def bessel_support(u: float) -> int:
    """Order beyond which ``J_nu(u)`` carries no relevant mass."""
    return int(math.ceil(abs(u) + 12.0 * (abs(u) + 1.0) ** (1.0 / 3.0)))


def _quarter_powers(q: complex, m: np.ndarray) -> np.ndarray:
    # q is a fourth root of unity
    table = np.array([1.0, q, q * q, q * q * q], dtype=complex)
    return table[np.mod(m, 4)]


def _even_pattern(k_min: int, amps: np.ndarray, meta: dict) -> DiffractionPattern:
    probs = np.zeros(2 * amps.size - 1)
    probs[::2] = np.abs(amps) ** 2
    dropped = max(0.0, 1.0 - float(np.sum(probs)))
    return DiffractionPattern(2 * k_min, probs, dropped, meta)


def diffract(packet: WavePacket, params: AdiabaticParams) -> DiffractionPattern:
    """Adiabatic pattern of an arbitrary even-lattice packet.

    Each even-site amplitude ``alpha_2m`` seeds its own Bessel comb
    ``J_{n/2-m}(u)`` with phase ``(sign * i)**-m``; the combs interfere.
    """
    if not packet.even_only:
        raise InvalidArgumentError("adiabatic diffraction needs an even-only packet")
    m_min, c = packet.even_sites()
    m = np.arange(m_min, m_min + c.size)
    q = -1j * params.detuning_sign  # (sign * i)**-1
    coeffs = _quarter_powers(q, m) * c
    b = bessel_support(params.u)
    jv = bessel_j_array(b, params.u).values
    amps = np.convolve(coeffs, jv)
    meta = {"u": params.u, "detuning_sign": params.detuning_sign}
    return _even_pattern(m_min - b, amps, meta)


def _normalized_pair(a0: complex, a2: complex) -> tuple[complex, complex]:
    a0, a2 = complex(a0), complex(a2)
    norm = math.sqrt(abs(a0) ** 2 + abs(a2) ** 2)
    if norm == 0:
        raise InvalidArgumentError("a0 and a2 cannot both be zero")
    return a0 / norm, a2 / norm


def two_peak_diffract(a0: complex, a2: complex, params: AdiabaticParams) -> DiffractionPattern:
    """Closed-form pattern for a packet split over sites 0 and +2."""
    a0, a2 = _normalized_pair(a0, a2)
    b = bessel_support(params.u) + 1
    jv = bessel_j_array(b, params.u).values
    k = np.arange(-b + 1, b + 1)
    jk = jv[k + b]
    jk1 = jv[k - 1 + b]
    amps = a0 * jk + a2 / (1j * params.detuning_sign) * jk1
    meta = {"u": params.u, "detuning_sign": params.detuning_sign}
    return _even_pattern(-b + 1, amps, meta)


def asymmetry(pattern: DiffractionPattern) -> float:
    """Probability deflected to positive orders minus that to negative orders."""
    return pattern.forward_fraction() - pattern.backward_fraction()


def interference_kernel(u: float) -> float:
    """``(1/u) int_0^u x (J_0^2 + J_1^2) dx``, which tends to 2/pi.

    Lommel's integrals give the closed form ``u (J_0^2 + J_1^2) - J_0 J_1``.
    """
    if u == 0:
        return 0.0
    j0, j1 = bessel_j(0, u), bessel_j(1, u)
    return u * (j0 * j0 + j1 * j1) - j0 * j1


def asymmetry_closed_form(a0: complex, a2: complex, params: AdiabaticParams) -> float:
    a0, a2 = _normalized_pair(a0, a2)
    u = params.u
    if u == 0:
        return 0.0
    j0, j1 = bessel_j(0, u), bessel_j(1, u)
    im = (a0 * a2.conjugate()).imag
    return abs(a2) ** 2 * (j0 * j0 + j1 * j1) - 2.0 * im * params.detuning_sign * interference_kernel(u)


def mean_momentum(packet: WavePacket, params: AdiabaticParams) -> float:
    """Mean transferred momentum in units of hbar k, from the pattern's first moment."""
    return diffract(packet, params).first_moment()


def mean_momentum_closed_form(a0: complex, a2: complex, params: AdiabaticParams) -> float:
    a0, a2 = _normalized_pair(a0, a2)
    im = (a0 * a2.conjugate()).imag
    return 2.0 * (abs(a2) ** 2 - im * params.u * params.detuning_sign)


def raman_nath_check(params: PulseParams, margin: float = VALIDITY_MARGIN) -> ValidityReport:
    """Compare the recoil energy of the highest populated order with the drive.

    The populated orders reach ``n_max ~ 2u``; neglecting kinetic energy needs
    ``4 u^2 w_rec`` well below both ``U0`` and ``1/t``.  "Well below" means
    ``ratio <= margin``.
    """
    if params.recoil_frequency is None:
        raise InvalidArgumentError("raman_nath_check needs recoil_frequency")
    u = interaction_parameter(params).u
    lhs = 4.0 * u * u * params.recoil_frequency
    rhs = min(abs(params.rabi_peak), 1.0 / params.duration if params.duration > 0 else math.inf)
    if lhs == 0:
        ratio = 0.0
    elif rhs == 0:
        ratio = math.inf
    else:
        ratio = lhs / rhs
    return ValidityReport(u=u, n_max=int(math.ceil(2.0 * u)), lhs=lhs, rhs=rhs, ratio=ratio, valid=ratio <= margin)


def recoil_frequency(mass_amu: float, wavelength: float) -> float:
    """``hbar k^2 / (2 m)`` in rad/s for a mass in amu and a wavelength in metres."""
    hbar = 1.054571817e-34
    amu = 1.66053906660e-27
    k = 2.0 * math.pi / wavelength
    return hbar * k * k / (2.0 * mass_amu * amu)

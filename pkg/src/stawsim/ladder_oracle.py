"""Brute-force reference: the two-state equations on a truncated momentum ladder.

With ``a_j(z, t) = sum_n c^j_n(t) exp(i n k z)`` the standing-wave coupling
``2 cos(kz)`` links each site to its two neighbours:

    i dc1_n/dt = U0 f(t) exp(-i Delta t) (c2_{n+1} + c2_{n-1})
    i dc2_n/dt = U0 f(t) exp(+i Delta t) (c1_{n+1} + c1_{n-1})

Kinetic terms are absent (Raman-Nath), so the closed forms elsewhere in the
package should be reproduced exactly, up to adiabatic corrections.  The
ladder ends are reflecting; an edge-population monitor flags truncation.
Integration is classical fixed-step RK4.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .adiabatic import PulseParams, bessel_support, diffract, interaction_parameter
from .errors import InvalidArgumentError, StepSizeError, TruncationError
from .pattern import DiffractionPattern, total_variation
from .resonant import resonant_diffract
from .wavepacket import WavePacket

STEP_RULE = 0.05
DEFAULT_STEP_FRACTION = 0.02
EDGE_SITES = 3
EDGE_LIMIT = 1e-6
DRIFT_LIMIT = 1e-6
ADIABATIC_MIN = 200.0


@dataclass(frozen=True)
class LadderState:
    """Ground and excited amplitudes on sites ``-n_max..n_max`` at ``time``."""

    n_max: int
    ground: np.ndarray
    excited: np.ndarray
    time: float
    dt: float
    norm_drift: float
    edge_mass: float

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.n_max, self.n_max + 1)

    def ground_pattern(self) -> DiffractionPattern:
        p = np.abs(self.ground) ** 2
        return DiffractionPattern(-self.n_max, p, 0.0, {"level": "ground"})

    def total_pattern(self) -> DiffractionPattern:
        p = np.abs(self.ground) ** 2 + np.abs(self.excited) ** 2
        return DiffractionPattern(-self.n_max, p, 0.0, {"level": "both"})

    @property
    def excited_population(self) -> float:
        return float(np.sum(np.abs(self.excited) ** 2))


@dataclass
class OracleReport:
    norm_drift: float
    edge_mass: float
    excited_final: float
    dt: float
    n_max: int
    tv_distance: float | None = None
    max_abs_error: float | None = None
    step_halving_change: float | None = None
    u: float | None = None
    warnings: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=1)


def _neighbours(c: np.ndarray) -> np.ndarray:
    out = np.zeros_like(c)
    out[:-1] += c[1:]
    out[1:] += c[:-1]
    return out


def _rk4(deriv, y: np.ndarray, t_end: float, steps: int, monitor=None) -> np.ndarray:
    h = t_end / steps
    t = 0.0
    for i in range(steps):
        k1 = deriv(t, y)
        k2 = deriv(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = deriv(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = deriv(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = (i + 1) * h
        if monitor is not None:
            monitor(y)
    return y


def default_step(params: PulseParams) -> float:
    rate = max(abs(params.detuning), 2.0 * abs(params.rabi_peak))
    if rate == 0:
        return params.duration if params.duration > 0 else 1.0
    return DEFAULT_STEP_FRACTION / rate


def _step_count(params: PulseParams, dt: float) -> int:
    if params.duration == 0:
        return 0
    return max(1, int(math.ceil(params.duration / dt - 1e-9)))


def evolve(initial: WavePacket, params: PulseParams, n_max: int, dt: float | None = None,
           check: bool = True) -> LadderState:
    """Integrate the ladder from ``initial`` (all population in the ground state)."""
    if dt is None:
        dt = default_step(params)
    if not dt > 0:
        raise InvalidArgumentError("dt must be positive")
    rate = max(abs(params.detuning), 2.0 * abs(params.rabi_peak))
    if dt * rate > STEP_RULE * (1 + 1e-12):
        raise InvalidArgumentError(f"dt*max(|Delta|, 2 U0) = {dt * rate:.3g} exceeds {STEP_RULE}")
    n_max = int(n_max)
    if initial.half_support() > n_max - EDGE_SITES:
        raise InvalidArgumentError("n_max is too small to hold the initial packet")
    size = 2 * n_max + 1
    y = np.zeros((2, size), dtype=complex)
    for n, a in initial.items():
        y[0, n + n_max] = a
    norm0 = float(np.sum(np.abs(y) ** 2))

    steps = _step_count(params, dt)
    h = params.duration / steps if steps else 0.0
    u0, delta = params.rabi_peak, params.detuning
    env = params.envelope_value

    def deriv(t: float, y: np.ndarray) -> np.ndarray:
        g = u0 * env(t)
        ph = complex(math.cos(delta * t), math.sin(delta * t))
        out = np.empty_like(y)
        out[0] = (-1j * g * ph.conjugate()) * _neighbours(y[1])
        out[1] = (-1j * g * ph) * _neighbours(y[0])
        return out

    edge = [0.0]

    def monitor(y: np.ndarray) -> None:
        p = np.abs(y[:, :EDGE_SITES]) ** 2
        q = np.abs(y[:, -EDGE_SITES:]) ** 2
        edge[0] = max(edge[0], float(np.sum(p) + np.sum(q)))

    monitor(y)
    if steps:
        y = _rk4(deriv, y, params.duration, steps, monitor)
    drift = abs(float(np.sum(np.abs(y) ** 2)) - norm0)
    state = LadderState(n_max, y[0].copy(), y[1].copy(), params.duration, h, drift, edge[0])
    if check:
        if state.edge_mass > EDGE_LIMIT:
            raise TruncationError(f"edge population {state.edge_mass:.3e} exceeds {EDGE_LIMIT}")
        if state.norm_drift > DRIFT_LIMIT:
            raise StepSizeError(f"norm drift {state.norm_drift:.3e} exceeds {DRIFT_LIMIT}")
    return state


def two_level_evolve(rabi_peak: float, detuning: float, duration: float, envelope: str = "sin2",
                     dt: float | None = None) -> tuple[complex, complex]:
    """Single-site toy (``2 cos kz -> 2``); returns final ground and excited amplitudes."""
    params = PulseParams(rabi_peak, detuning, duration, envelope)
    if dt is None:
        dt = default_step(params)
    steps = _step_count(params, dt)
    env = params.envelope_value

    def deriv(t: float, y: np.ndarray) -> np.ndarray:
        g = 2.0 * rabi_peak * env(t)
        ph = complex(math.cos(detuning * t), math.sin(detuning * t))
        return np.array([-1j * g * ph.conjugate() * y[1], -1j * g * ph * y[0]])

    y = np.array([1.0 + 0j, 0j])
    if steps:
        y = _rk4(deriv, y, duration, steps)
    return complex(y[0]), complex(y[1])


def default_ladder_size(spread: float, packet: WavePacket) -> int:
    """Ladder half-length for a pattern spread of ``spread`` (u adiabatic, u_r resonant)."""
    return 2 * bessel_support(spread) + packet.half_support() + 20


def _halving_change(initial: WavePacket, params: PulseParams, n_max: int, dt: float, pick) -> float:
    coarse = pick(evolve(initial, params, n_max, dt))
    fine = pick(evolve(initial, params, n_max, dt / 2.0))
    return float(np.max(np.abs(coarse - fine)))


def adiabatic_validate(initial: WavePacket, params: PulseParams, n_max: int | None = None,
                       dt: float | None = None, halving: bool = False) -> OracleReport:
    """Ground-state ladder distribution against the adiabatic closed form."""
    adiabatic = interaction_parameter(params)
    warnings = []
    if params.adiabaticity < ADIABATIC_MIN:
        warnings.append(f"|Delta| t = {params.adiabaticity:.3g} is below {ADIABATIC_MIN:g}: not adiabatic")
    if params.envelope != "sin2":
        warnings.append("envelope switches suddenly: adiabatic elimination is not justified")
    if n_max is None:
        n_max = default_ladder_size(adiabatic.u, initial)
    if dt is None:
        dt = default_step(params)
    state = evolve(initial, params, n_max, dt)
    target = diffract(initial, adiabatic)
    report = OracleReport(
        norm_drift=state.norm_drift,
        edge_mass=state.edge_mass,
        excited_final=state.excited_population,
        dt=state.dt,
        n_max=n_max,
        tv_distance=total_variation(state.ground_pattern(), target),
        u=adiabatic.u,
        warnings=warnings,
    )
    if halving:
        report.step_halving_change = _halving_change(
            initial, params, n_max, dt, lambda s: np.abs(s.ground) ** 2)
    return report


def resonant_validate(s: WavePacket, rabi_peak: float, duration: float, n_max: int | None = None,
                      dt: float | None = None, halving: bool = False) -> OracleReport:
    """Total (both-level) ladder distribution against the resonant Bessel convolution."""
    if not s.even_only:
        raise InvalidArgumentError("the resonant correspondence holds for even-only s-vectors")
    params = PulseParams(rabi_peak, 0.0, duration, "rectangular")
    u_r = 2.0 * rabi_peak * duration
    if n_max is None:
        n_max = default_ladder_size(u_r, s)
    if dt is None:
        dt = default_step(params)
    state = evolve(s, params, n_max, dt)
    target = resonant_diffract(s, u_r)
    total = state.total_pattern()
    lo = min(total.n_min, target.n_min)
    hi = max(total.orders[-1], target.orders[-1])
    err = max(abs(total[n] - target[n]) for n in range(lo, hi + 1))
    report = OracleReport(
        norm_drift=state.norm_drift,
        edge_mass=state.edge_mass,
        excited_final=state.excited_population,
        dt=state.dt,
        n_max=n_max,
        tv_distance=total_variation(total, target),
        max_abs_error=err,
        u=u_r,
    )
    if halving:
        report.step_halving_change = _halving_change(
            s, params, n_max, dt, lambda st: np.abs(st.ground) ** 2 + np.abs(st.excited) ** 2)
    return report

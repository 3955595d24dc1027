"""Adiabatic scattering of the discrete Gaussian packet.

The diffraction amplitude at photon order ``n = 2k`` is ``|I_k(u)|`` with the
lattice sum

    I_k(u) = (pi M)^(-1/4) sum_nu exp(-i alpha nu - (k - nu)^2 / 2M) J_nu(u).

The sum also makes sense at real ``k``, which is how the exact
differential-difference equation is checked.  Two approximations follow from
a second-order Taylor expansion of that equation: a moving (chirped)
Gaussian, and an Airy-function packet.
"""
from __future__ import annotations

import cmath
import functools
import io
import math

import numpy as np

from .adiabatic import bessel_support
from .errors import InvalidArgumentError, RegimeError
from .pattern import DiffractionPattern, format_float, renormalized
from .specfun import airy_ai, bessel_j_array
from .wavepacket import GaussianSpec

# Gaussian factor exp(-x^2/2M) drops below 1e-18 for |x| > sqrt(2M ln 1e18)
_LOG_GAUSS_CUT = math.log(1e18)
_COS_FLOOR = 1e-8


def _gauss_reach(M: float) -> int:
    return int(math.ceil(math.sqrt(2.0 * M * _LOG_GAUSS_CUT)))


@functools.lru_cache(maxsize=64)
def _bessel_row(u: float) -> tuple[int, np.ndarray]:
    b = bessel_support(u)
    return b, bessel_j_array(b, u).values


def i_exact(n: float, u: float, M: float, alpha: float) -> complex:
    """Lattice sum ``I_n(u)`` at a real index ``n`` (``u`` may be negative)."""
    if not M > 0:
        raise InvalidArgumentError("M must be positive")
    b, jv = _bessel_row(float(u))
    g = _gauss_reach(M)
    lo = max(-b, math.floor(n - g))
    hi = min(b, math.ceil(n + g))
    if lo > hi:
        return 0j
    nu = np.arange(lo, hi + 1)
    terms = np.exp(-1j * alpha * nu - (n - nu) ** 2 / (2.0 * M)) * jv[nu + b]
    return complex(np.sum(terms)) / (math.pi * M) ** 0.25


def i_exact_lattice(u: float, M: float, alpha: float) -> tuple[int, np.ndarray]:
    """``(k_min, I)`` with ``I[j] = I_{k_min+j}(u)`` on every integer index that matters."""
    b, jv = _bessel_row(float(u))
    g = _gauss_reach(M)
    nu = np.arange(-b, b + 1)
    weighted = np.exp(-1j * alpha * nu) * jv
    x = np.arange(-g, g + 1)
    gauss = np.exp(-(x**2) / (2.0 * M)) / (math.pi * M) ** 0.25
    return -b - g, np.convolve(weighted, gauss)


def _lattice_pattern(k_min: int, values: np.ndarray, meta: dict) -> DiffractionPattern:
    probs = np.zeros(2 * values.size - 1)
    probs[::2] = np.abs(values) ** 2
    return renormalized(2 * k_min, probs, meta)


def gaussian_diffract(spec: GaussianSpec, u: float) -> DiffractionPattern:
    """Adiabatic pattern of the Gaussian packet over photon orders ``n = 2k``."""
    k_min, vals = i_exact_lattice(u, spec.M, spec.alpha)
    return _lattice_pattern(k_min, vals, {"u": u, "M": spec.M, "alpha": spec.alpha})


def dde_rhs(n: float, u: float, M: float, alpha: float) -> complex:
    return (-(n / M) * i_exact(n, u, M, alpha)
            + u / (2.0 * M) * (cmath.exp(1j * alpha) * i_exact(n + 1, u, M, alpha)
                               + cmath.exp(-1j * alpha) * i_exact(n - 1, u, M, alpha)))


def dde_residual(n: float, u: float, M: float, alpha: float, step: float) -> float:
    """Central-difference ``dI/dn`` minus the right-hand side of the exact DDE."""
    if not 0 < step <= 0.1:
        raise InvalidArgumentError("step must lie in (0, 0.1]")
    deriv = (i_exact(n + step, u, M, alpha) - i_exact(n - step, u, M, alpha)) / (2.0 * step)
    return abs(deriv - dde_rhs(n, u, M, alpha))


def moving_gaussian(n: float, u: float, M: float, alpha: float) -> complex:
    """First-order (no second derivative) solution: a drifting, chirped Gaussian.

    The centre moves to ``u cos(alpha)``; ``sin(alpha)`` broadens it.  The
    complex width ``M - i u sin(alpha)`` is the one that solves the reduced
    equation; its conjugate gives the same probabilities.
    """
    s, c = math.sin(alpha), math.cos(alpha)
    c0 = (math.pi * M * (1.0 + (s * u / M) ** 2)) ** -0.25
    return c0 * cmath.exp(-((n - c * u) ** 2) / (2.0 * (M - 1j * s * u)))


def airy_parameters(n: float, u: float, M: float, alpha: float) -> tuple[float, complex]:
    """Scaled coordinate ``N`` and width parameter ``h`` of the Airy packet."""
    c, s = math.cos(alpha), math.sin(alpha)
    if abs(c) <= _COS_FLOOR:
        raise RegimeError("cos(alpha) = 0: the Airy form degenerates, use moving_gaussian")
    if not u > 0:
        raise InvalidArgumentError("the Airy solution needs u > 0")
    cu = abs(c) * u
    N = (n - c * u) / (2.0 ** (-1.0 / 3.0) * cu ** (1.0 / 3.0))
    h = (M - 1j * s * u) / (2.0 ** (1.0 / 3.0) * cu ** (2.0 / 3.0))
    return N, h


def _airy_unnormalized(n: float, u: float, M: float, alpha: float) -> complex:
    N, h = airy_parameters(n, u, M, alpha)
    # for cos(alpha) < 0 the packet is the mirror image, so the coordinate flips
    if math.cos(alpha) < 0:
        N = -N
    return cmath.exp(h * N) * airy_ai(N + h * h)


@functools.lru_cache(maxsize=64)
def _airy_norm(u: float, M: float, alpha: float) -> float:
    centre = math.cos(alpha) * u
    reach = _gauss_reach(M) + int(2 * abs(u)) + 10
    total = 0.0
    for k in range(int(math.floor(centre)) - reach, int(math.ceil(centre)) + reach + 1):
        total += abs(_airy_unnormalized(k, u, M, alpha)) ** 2
    return 1.0 / math.sqrt(total)


def airy_solution(n: float, u: float, M: float, alpha: float) -> complex:
    """Airy-function packet, normalised numerically over the integer lattice."""
    return _airy_norm(float(u), float(M), float(alpha)) * _airy_unnormalized(n, u, M, alpha)


def comparison_table(spec: GaussianSpec, u: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Orders ``n`` and the exact, moving-Gaussian and Airy patterns on them."""
    exact = gaussian_diffract(spec, u)
    n = exact.orders
    w_exact = exact.probabilities
    mask = n % 2 == 0
    w_mg = np.zeros(n.size)
    w_mg[mask] = [abs(moving_gaussian(k // 2, u, spec.M, spec.alpha)) ** 2 for k in n[mask]]
    w_mg /= np.sum(w_mg)
    w_airy = np.zeros(n.size)
    if abs(math.cos(spec.alpha)) > _COS_FLOOR and u > 0:
        w_airy[mask] = [abs(airy_solution(k // 2, u, spec.M, spec.alpha)) ** 2 for k in n[mask]]
        w_airy /= np.sum(w_airy)
    else:
        w_airy[:] = np.nan
    return n, w_exact, w_mg, w_airy


def comparison_csv(spec: GaussianSpec, u: float) -> str:
    n, w_exact, w_mg, w_airy = comparison_table(spec, u)
    buf = io.StringIO()
    buf.write("n,W_exact,W_mg,W_airy\n")
    for row in zip(n, w_exact, w_mg, w_airy):
        buf.write(f"{row[0]}," + ",".join(format_float(v) for v in row[1:]) + "\n")
    return buf.getvalue()


def peak_location(orders: np.ndarray, probs: np.ndarray) -> float:
    """Sub-lattice peak position from a parabola through the three largest points."""
    keep = probs > 0
    x, y = orders[keep].astype(float), probs[keep]
    top = np.argsort(y)[-3:]
    a, b, _ = np.polyfit(x[top], y[top], 2)
    if a >= 0:
        return float(x[np.argmax(y)])
    return float(-b / (2.0 * a))


def half_width(orders: np.ndarray, probs: np.ndarray) -> float:
    """Width parameter ``w`` of ``exp(-x^2/w)``, i.e. twice the variance."""
    p = probs / np.sum(probs)
    mean = np.dot(orders, p)
    return float(2.0 * np.dot((orders - mean) ** 2, p))

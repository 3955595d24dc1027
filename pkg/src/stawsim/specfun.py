"""Integer-order Bessel functions of the first kind and the Airy function Ai.

Both kernels are written from scratch so that the lattice sums elsewhere in
the package do not depend on the accuracy quirks of an external library.

Bessel values come from Miller's backward recurrence, normalised with the
sum rule ``J_0**2 + 2*sum(J_n**2) = 1``.  Ai(z) for complex z combines three
evaluations:

* the optimally truncated asymptotic expansion for ``|z| >= 7``;
* for ``|z| < 7`` and ``|arg z| <= pi/3`` (where Ai is recessive and the
  Maclaurin series cancels badly), Taylor stepping of ``y'' = z y`` inward
  along the ray from the asymptotic value at ``|z| = 12``;
* the Maclaurin series everywhere else inside ``|z| < 7``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

__all__ = ["BesselArray", "bessel_j", "bessel_j_array", "airy_ai"]

MAX_ORDER = 10**6

# Ai(0) = 3**(-2/3) / Gamma(2/3), Ai'(0) = -3**(-1/3) / Gamma(1/3)
AI0 = 0.35502805388781723926
AIP0 = -0.25881940379280679840

_RESCALE = 1e100
_LOG_TINY = -745.0  # below the smallest subnormal double
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class BesselArray:
    """``J_n(argument)`` for every order ``n`` in ``-n_max..n_max``."""

    n_max: int
    argument: float
    values: np.ndarray  # values[n + n_max] == J_n(argument)

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.n_max, self.n_max + 1)

    def __getitem__(self, n: int) -> float:
        if abs(n) > self.n_max:
            raise IndexError(f"order {n} outside -{self.n_max}..{self.n_max}")
        return float(self.values[n + self.n_max])

    def __len__(self) -> int:
        return self.values.size


def _check_real(x: float, name: str = "x") -> float:
    try:
        x = float(x)
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"{name} must be a real number") from exc
    if not math.isfinite(x):
        raise InvalidArgumentError(f"{name} must be finite, got {x}")
    return x


def _negligible(n: int, x: float) -> bool:
    # |J_n(x)| <= (x/2)**n / n! for n >= 0
    return n > 0 and n * (math.log(x) - _LN2) - math.lgamma(n + 1.0) < _LOG_TINY


def _series_nonneg(n_top: int, x: float) -> np.ndarray:
    """J_0..J_{n_top} of 0 < x < 0.5 from the ascending series."""
    out = np.zeros(n_top + 1)
    q = -0.25 * x * x
    lx = math.log(x) - _LN2  # 0.5 * x underflows for subnormal x
    for n in range(n_top + 1):
        lp = n * lx - math.lgamma(n + 1.0)
        if lp < _LOG_TINY:
            break
        term, total, k = 1.0, 1.0, 0
        while abs(term) > 1e-18 * abs(total):
            k += 1
            term *= q / (k * (n + k))
            total += term
        out[n] = math.exp(lp) * total
    return out


def _miller_nonneg(n_top: int, x: float) -> np.ndarray:
    """J_0..J_{n_top} of x >= 0.5 by normalised backward recurrence."""
    start = max(n_top + 20, int(x + 25.0 * (0.5 * x) ** (1.0 / 3.0)) + 40)
    v = np.zeros(start + 2)
    v[start] = 1e-30
    two_over_x = 2.0 / x
    nxt, cur = 0.0, 1e-30
    for k in range(start, 0, -1):
        prev = k * two_over_x * cur - nxt
        v[k - 1] = prev
        nxt, cur = cur, prev
        if abs(prev) > _RESCALE:
            v[k - 1 :] /= _RESCALE
            nxt /= _RESCALE
            cur /= _RESCALE
    v = v[: start + 1]
    norm = v[0] ** 2 + 2.0 * np.sum(v[1:] ** 2)
    sign = math.copysign(1.0, v[0] + 2.0 * np.sum(v[2::2]))
    return (sign / math.sqrt(norm)) * v[: n_top + 1]


def _nonneg_orders(n_top: int, x: float) -> np.ndarray:
    """J_0..J_{n_top}(x) for x >= 0."""
    if x == 0.0:
        out = np.zeros(n_top + 1)
        out[0] = 1.0
        return out
    if x < 0.5:
        return _series_nonneg(n_top, x)
    return _miller_nonneg(n_top, x)


def bessel_j(n: int, x: float) -> float:
    """Bessel function of the first kind ``J_n(x)`` of integer order.

    Negative orders and arguments are handled through
    ``J_{-n}(x) = J_n(-x) = (-1)**n J_n(x)``.
    """
    x = _check_real(x)
    if int(n) != n:
        raise InvalidArgumentError(f"order must be an integer, got {n}")
    n = int(n)
    if abs(n) > MAX_ORDER:
        raise InvalidArgumentError(f"|n| must not exceed {MAX_ORDER}")
    m = abs(n)
    ax = abs(x)
    if ax == 0.0:
        return 1.0 if m == 0 else 0.0
    if _negligible(m, ax):
        return 0.0
    value = float(_nonneg_orders(m, ax)[m])
    flips = (n < 0) + (x < 0)
    if flips % 2 and m % 2:
        value = -value
    return value


def bessel_j_array(n_max: int, x: float) -> BesselArray:
    """Evaluate ``J_n(x)`` for all ``n`` in ``-n_max..n_max`` at once.

    Choose ``n_max >= 2*|x| + 40`` if the array has to carry the whole
    ``sum J_n**2 = 1`` mass.
    """
    x = _check_real(x)
    n_max = int(n_max)
    if n_max < 0:
        raise InvalidArgumentError("n_max must be non-negative")
    if n_max > MAX_ORDER:
        raise InvalidArgumentError(f"n_max must not exceed {MAX_ORDER}")
    pos = _nonneg_orders(n_max, abs(x))
    parity = np.where(np.arange(n_max + 1) % 2 == 0, 1.0, -1.0)
    if x < 0:
        pos = pos * parity
    neg = (pos * parity)[:0:-1]
    return BesselArray(n_max=n_max, argument=x, values=np.concatenate([neg, pos]))


# ---------------------------------------------------------------------------
# Airy function
# ---------------------------------------------------------------------------

_ASYMPTOTIC_RADIUS = 7.0
_TAYLOR_START_RADIUS = 12.0
_TAYLOR_STEP = 0.5
_MAX_MODULUS = 1e3


def _u_coefficients(count: int) -> list[float]:
    u = [1.0]
    for k in range(1, count):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k))
    return u


_U = _u_coefficients(120)
_V = [1.0] + [-(6 * k + 1) / (6 * k - 1) * _U[k] for k in range(1, len(_U))]


def _asymptotic_sum(coeffs: list[float], zeta: complex, start: int = 0, stride: int = 1) -> complex:
    """Sum ``(-1)**j c_{start+stride*j} zeta**-(start+stride*j)``, optimally truncated."""
    inv = 1.0 / zeta
    step = inv**stride
    power = inv**start
    total = 0j
    last = math.inf
    j = 0
    for k in range(start, len(coeffs), stride):
        term = (-1) ** j * coeffs[k] * power
        mag = abs(term)
        if mag > last:
            break
        total += term
        if mag < 1e-17 * abs(total):
            break
        last = mag
        power *= step
        j += 1
    return total


def _ai_asymptotic(z: complex) -> complex:
    if abs(cmath.phase(z)) <= 2.0 * math.pi / 3.0:
        zeta = (2.0 / 3.0) * z**1.5
        return cmath.exp(-zeta) / (2.0 * math.sqrt(math.pi) * z**0.25) * _asymptotic_sum(_U, zeta)
    w = -z
    zeta = (2.0 / 3.0) * w**1.5
    p = _asymptotic_sum(_U, zeta, 0, 2)
    q = _asymptotic_sum(_U, zeta, 1, 2)
    phase = zeta - math.pi / 4.0
    return (cmath.cos(phase) * p + cmath.sin(phase) * q) / (math.sqrt(math.pi) * w**0.25)


def _ai_pair_asymptotic(z: complex) -> tuple[complex, complex]:
    """Ai and Ai' from the recessive expansion; valid for large |z|, |arg z| < 2pi/3."""
    zeta = (2.0 / 3.0) * z**1.5
    pref = cmath.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    q = z**0.25
    return pref / q * _asymptotic_sum(_U, zeta), -pref * q * _asymptotic_sum(_V, zeta)


def _ai_maclaurin(z: complex) -> complex:
    z3 = z * z * z
    f = t = 1.0 + 0j
    g = s = z
    k = 0
    while True:
        k += 1
        t *= z3 / ((3 * k - 1) * (3 * k))
        s *= z3 / ((3 * k) * (3 * k + 1))
        f += t
        g += s
        if abs(t) + abs(s) < 1e-18 * (abs(f) + abs(g)) or k > 400:
            break
    return AI0 * f + AIP0 * g


def _taylor_step(a: complex, y: complex, dy: complex, h: complex) -> tuple[complex, complex]:
    """Advance a solution of y'' = z y from a to a + h with its Taylor series."""
    c = [y, dy, 0.5 * a * y]
    val = y + dy * h + c[2] * h * h
    der = dy + 2.0 * c[2] * h
    hk = h * h  # h**(k-1) for k = 3 below
    small = 0
    scale = abs(y) + abs(dy)
    for k in range(3, 300):
        ck = (a * c[k - 2] + c[k - 3]) / (k * (k - 1))
        c.append(ck)
        der += k * ck * hk
        hk *= h
        term = ck * hk
        val += term
        if abs(term) < 1e-18 * scale:
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    return val, der


def _ai_taylor_inward(z: complex) -> complex:
    r = abs(z)
    direction = z / r if r > 0 else 1.0
    a = _TAYLOR_START_RADIUS * direction
    y, dy = _ai_pair_asymptotic(a)
    steps = max(1, math.ceil((_TAYLOR_START_RADIUS - r) / _TAYLOR_STEP))
    h = (z - a) / steps
    for _ in range(steps):
        y, dy = _taylor_step(a, y, dy, h)
        a += h
    return y


def airy_ai(z: complex) -> complex:
    """Airy function of the first kind for complex argument, ``|z| <= 1e3``."""
    try:
        z = complex(z)
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError("z must be a number") from exc
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidArgumentError(f"z must be finite, got {z}")
    if abs(z) > _MAX_MODULUS:
        raise InvalidArgumentError(f"|z| must not exceed {_MAX_MODULUS:g}")
    if z.imag < 0.0:
        return airy_ai(z.conjugate()).conjugate()
    z = complex(z.real, 0.0) if z.imag == 0.0 else z  # drop a signed zero
    r = abs(z)
    if r >= _ASYMPTOTIC_RADIUS:
        value = _ai_asymptotic(z)
    elif cmath.phase(z) <= math.pi / 3.0 and r > 1.0:
        value = _ai_taylor_inward(z)
    else:
        value = _ai_maclaurin(z)
    if z.imag == 0.0:
        value = complex(value.real, 0.0)
    return value

"""Initial momentum-space superposition states on the photon-momentum lattice.

Lattice index ``n`` counts photon momenta relative to the reference momentum
``p0``; ``p0`` itself is carried only as metadata.  In the adiabatic
("alpha") representation a packet lives on even sites, ``n = 2m``.  The
resonant ("s") representation uses the same index, so the mapping between
the two only changes the interpretation of the packet, not its entries.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

import numpy as np

from .errors import InvalidArgumentError

NORM_TOL = 1e-12
# keep Gaussian sites whose amplitude exceeds this fraction of the peak amplitude
GAUSSIAN_CUTOFF = 1e-16


@dataclass(frozen=True)
class WavePacket:
    """Complex amplitudes on the contiguous sites ``n_min..n_min+len-1``."""

    n_min: int
    amplitudes: np.ndarray
    p0: float = 0.0
    representation: str = "alpha"
    raw_norm: float = 1.0
    meta: dict = field(default_factory=dict)

    @property
    def orders(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_min + self.amplitudes.size)

    @property
    def n_max(self) -> int:
        return self.n_min + self.amplitudes.size - 1

    def __getitem__(self, n: int) -> complex:
        i = n - self.n_min
        if 0 <= i < self.amplitudes.size:
            return complex(self.amplitudes[i])
        return 0j

    def items(self) -> Iterable[tuple[int, complex]]:
        for n, a in zip(self.orders, self.amplitudes):
            if a != 0:
                yield int(n), complex(a)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    @property
    def even_only(self) -> bool:
        odd = (self.orders % 2) != 0
        return not np.any(self.amplitudes[odd] != 0)

    @property
    def parity(self) -> str:
        return "even-only" if self.even_only else "general"

    def half_support(self) -> int:
        """Largest ``|n|`` carrying a nonzero amplitude."""
        nz = self.orders[self.amplitudes != 0]
        return int(np.max(np.abs(nz))) if nz.size else 0

    def even_sites(self) -> tuple[int, np.ndarray]:
        """``(m_min, c)`` with ``c[j]`` the amplitude at ``n = 2*(m_min + j)``."""
        lo = self.n_min + (self.n_min % 2)
        m_min = lo // 2
        return m_min, self.amplitudes[lo - self.n_min :: 2].copy()

    def probabilities(self) -> dict[int, float]:
        return {n: abs(a) ** 2 for n, a in self.items()}

    def to_json(self) -> str:
        entries = [{"n": n, "re": a.real, "im": a.imag} for n, a in self.items()]
        return json.dumps({"p0": self.p0, "entries": entries}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str, representation: str = "alpha") -> "WavePacket":
        doc = json.loads(text)
        amps = {int(e["n"]): complex(e["re"], e["im"]) for e in doc["entries"]}
        return from_mapping(amps, p0=float(doc.get("p0", 0.0)), representation=representation)


def from_mapping(amplitudes: Mapping[int, complex], p0: float = 0.0,
                 representation: str = "alpha", normalize: bool = True) -> WavePacket:
    """Packet from a sparse ``{n: amplitude}`` map, renormalised to unit norm."""
    if not amplitudes:
        raise InvalidArgumentError("a packet needs at least one site")
    lo, hi = min(amplitudes), max(amplitudes)
    amps = np.zeros(hi - lo + 1, dtype=complex)
    for n, a in amplitudes.items():
        amps[n - lo] = a
    raw = float(np.sum(np.abs(amps) ** 2))
    if not raw > 0 or not math.isfinite(raw):
        raise InvalidArgumentError("packet amplitudes must not all vanish")
    if normalize:
        amps = amps / math.sqrt(raw)
    return WavePacket(lo, amps, p0=p0, representation=representation, raw_norm=raw)


@dataclass(frozen=True)
class GaussianSpec:
    """Discrete Gaussian packet parameters.

    ``detuning_sign`` is +1 or -1 for off-resonant light; 0 stands for exact
    resonance (``sign(0) = 0``), which drops the quarter-period phase shift.
    """

    M: float
    alpha: float = 0.0
    detuning_sign: int = 1

    def __post_init__(self) -> None:
        if not (math.isfinite(self.M) and self.M > 0):
            raise InvalidArgumentError(f"half-width M must be positive, got {self.M}")
        if self.detuning_sign not in (-1, 0, 1):
            raise InvalidArgumentError("detuning_sign must be -1, 0 or +1")

    @property
    def phase_step(self) -> float:
        """Phase advance between neighbouring even sites."""
        return self.alpha + self.detuning_sign * math.pi / 2.0

    @property
    def m_cut(self) -> int:
        return int(math.floor(math.sqrt(-2.0 * self.M * math.log(GAUSSIAN_CUTOFF))))


def make_two_peak(a0: complex, a2: complex, p0: float = 0.0) -> WavePacket:
    """Packet ``a0`` at site 0 and ``a2`` at site +2, normalised."""
    a0, a2 = complex(a0), complex(a2)
    if abs(a0) == 0 and abs(a2) == 0:
        raise InvalidArgumentError("a0 and a2 cannot both be zero")
    return from_mapping({0: a0, 1: 0j, 2: a2}, p0=p0)


def gaussian_amplitude(m: np.ndarray | float, spec: GaussianSpec) -> np.ndarray:
    """Unnormalised discrete Gaussian amplitude at even site ``2m``."""
    m = np.asarray(m, dtype=float)
    return np.exp(1j * spec.phase_step * m - m**2 / (2.0 * spec.M)) / (math.pi * spec.M) ** 0.25


def make_gaussian(spec: GaussianSpec, p0: float = 0.0) -> WavePacket:
    """Discrete Gaussian on the even lattice, renormalised to unit norm.

    ``raw_norm`` keeps the norm of the untruncated closed form before
    renormalisation.
    """
    mc = spec.m_cut
    m = np.arange(-mc, mc + 1)
    amps = np.zeros(4 * mc + 1, dtype=complex)
    amps[::2] = gaussian_amplitude(m, spec)
    raw = float(np.sum(np.abs(amps) ** 2))
    return WavePacket(-2 * mc, amps / math.sqrt(raw), p0=p0, raw_norm=raw,
                      meta={"M": spec.M, "alpha": spec.alpha, "detuning_sign": spec.detuning_sign})


def to_resonant_vector(packet: WavePacket) -> WavePacket:
    """Map an even-only alpha packet to the integer-lattice s-vector.

    ``s_m`` equals the alpha amplitude at ``m/2`` in the even-site index,
    which is the same photon site ``m``; odd sites stay empty.
    """
    if not packet.even_only:
        raise InvalidArgumentError("resonant mapping needs an even-only packet")
    amps = packet.amplitudes / math.sqrt(packet.norm)
    return replace(packet, amplitudes=amps, representation="s")

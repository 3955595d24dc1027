"""Diffraction patterns: order -> probability maps with truncation bookkeeping."""
from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

NORM_TOL = 1e-12


def format_float(x: float) -> str:
    """Round-trip (17 significant digit) text form of a double."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class DiffractionPattern:
    """Probabilities ``W_n`` on the contiguous orders ``n_min..n_min+len-1``.

    ``dropped_mass`` is the probability outside the stored window, and
    ``truncation_bound`` the largest ``|n|`` that was kept.
    """

    n_min: int
    probabilities: np.ndarray
    dropped_mass: float = 0.0
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def orders(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_min + self.probabilities.size)

    @property
    def truncation_bound(self) -> int:
        return int(max(abs(self.n_min), abs(self.n_min + self.probabilities.size - 1)))

    @property
    def total(self) -> float:
        return float(np.sum(self.probabilities))

    def __getitem__(self, n: int) -> float:
        i = n - self.n_min
        if 0 <= i < self.probabilities.size:
            return float(self.probabilities[i])
        return 0.0

    def as_dict(self) -> dict[int, float]:
        return {int(n): float(w) for n, w in zip(self.orders, self.probabilities)}

    def forward_fraction(self) -> float:
        return float(np.sum(self.probabilities[self.orders > 0]))

    def backward_fraction(self) -> float:
        return float(np.sum(self.probabilities[self.orders < 0]))

    def first_moment(self) -> float:
        return float(np.dot(self.orders, self.probabilities))

    def peak_order(self) -> int:
        return int(self.orders[int(np.argmax(self.probabilities))])

    def check_normalized(self, tol: float = NORM_TOL) -> None:
        if np.any(self.probabilities < 0):
            raise ValueError("negative probability in pattern")
        err = abs(self.total + self.dropped_mass - 1.0)
        if err > tol:
            raise ValueError(f"pattern mass off by {err:.3e}")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("n,W\n")
        for n, w in zip(self.orders, self.probabilities):
            buf.write(f"{n},{format_float(w)}\n")
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "meta": self.meta,
            "dropped_mass": self.dropped_mass,
            "truncation_bound": self.truncation_bound,
            "entries": [{"n": int(n), "W": float(w)} for n, w in zip(self.orders, self.probabilities)],
        }
        return json.dumps(doc, sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "DiffractionPattern":
        doc = json.loads(text)
        entries = sorted(doc["entries"], key=lambda e: e["n"])
        n_min = entries[0]["n"] if entries else 0
        probs = np.zeros(entries[-1]["n"] - n_min + 1 if entries else 0)
        for e in entries:
            probs[e["n"] - n_min] = e["W"]
        return cls(n_min, probs, float(doc.get("dropped_mass", 0.0)), dict(doc.get("meta", {})))


def from_amplitudes(n_min: int, amplitudes: np.ndarray, meta: dict[str, Any] | None = None) -> DiffractionPattern:
    """Build a pattern from amplitudes whose squared moduli should sum to one."""
    probs = np.abs(amplitudes) ** 2
    dropped = max(0.0, 1.0 - float(np.sum(probs)))
    return DiffractionPattern(n_min, probs, dropped, dict(meta or {}))


def renormalized(n_min: int, probs: np.ndarray, meta: dict[str, Any] | None = None) -> DiffractionPattern:
    return DiffractionPattern(n_min, probs / np.sum(probs), 0.0, dict(meta or {}))


def total_variation(p: DiffractionPattern, q: DiffractionPattern) -> float:
    """Half the l1 distance between two patterns over the union of their supports."""
    lo = min(p.n_min, q.n_min)
    hi = max(p.n_min + p.probabilities.size, q.n_min + q.probabilities.size)
    a = np.zeros(hi - lo)
    b = np.zeros(hi - lo)
    a[p.n_min - lo : p.n_min - lo + p.probabilities.size] = p.probabilities
    b[q.n_min - lo : q.n_min - lo + q.probabilities.size] = q.probabilities
    return 0.5 * float(np.sum(np.abs(a - b)))


def max_abs_difference(p: DiffractionPattern, q: DiffractionPattern) -> float:
    lo = min(p.n_min, q.n_min)
    hi = max(p.n_min + p.probabilities.size, q.n_min + q.probabilities.size)
    return max(abs(p[n] - q[n]) for n in range(lo, hi))

"""Scenario configuration and execution behind the command-line front end."""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Any

import numpy as np

from . import adiabatic, gaussian_dynamics, ladder_oracle, resonant
from .errors import InvalidArgumentError, NumericalQualityError, RegimeError
from .pattern import NORM_TOL, DiffractionPattern, format_float, max_abs_difference
from .wavepacket import GaussianSpec, WavePacket, make_gaussian, make_two_peak, to_resonant_vector

MODES = (
    "adiabatic-two-peak",
    "adiabatic-gaussian",
    "resonant-gaussian",
    "resonant-general",
    "oracle-adiabatic",
    "oracle-resonant",
    "sweep",
)

PRESETS: dict[str, dict[str, Any]] = {
    "fig1": {"mode": "adiabatic-two-peak", "a0": [math.sqrt(0.5), 0.0], "a2": [0.0, -math.sqrt(0.5)],
             "U0": 50.0, "delta": -500.0, "t": 1.0, "envelope": "rectangular"},
    "fig3": {"mode": "adiabatic-gaussian", "M": 10.0, "alpha": math.pi,
             "U0": 50.0, "delta": 500.0, "t": 1.0, "envelope": "rectangular"},
    "fig4": {"mode": "resonant-gaussian", "M": 10.0, "alpha": math.pi, "sign_delta": 0,
             "U0": 50.0, "t": 1.0},
}


class ConfigError(ValueError):
    """Invalid scenario configuration; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


def parse_complex(value: Any, name: str) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and {"re", "im"} <= set(value):
        return complex(float(value["re"]), float(value["im"]))
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", "").replace("i", "j"))
        except ValueError:
            pass
    raise ConfigError(name, f"cannot read {value!r} as a complex number")


@dataclass
class ScenarioConfig:
    mode: str
    # physical drive
    U0: float | None = None
    delta: float | None = None
    t: float | None = None
    envelope: str = "rectangular"
    recoil_frequency: float | None = None
    # dimensionless drive
    u: float | None = None
    sign_delta: int | None = None
    ur: float | None = None
    # packet
    a0: complex | None = None
    a2: complex | None = None
    M: float | None = None
    alpha: float | None = None
    packet: dict | None = None
    # numerics and output
    nmax: int | None = None
    dt: float | None = None
    out: str = "."
    name: str | None = None
    scenarios: list = field(default_factory=list)

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "ScenarioConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown field")
        doc = dict(doc)
        if "mode" not in doc:
            raise ConfigError("mode", "missing")
        for key in ("a0", "a2"):
            if doc.get(key) is not None:
                doc[key] = parse_complex(doc[key], key)
        for key in ("U0", "delta", "t", "recoil_frequency", "u", "ur", "M", "alpha", "dt"):
            if doc.get(key) is not None:
                try:
                    doc[key] = float(doc[key])
                except (TypeError, ValueError):
                    raise ConfigError(key, f"expected a number, got {doc[key]!r}") from None
                if not math.isfinite(doc[key]):
                    raise ConfigError(key, "must be finite")
        for key in ("sign_delta", "nmax"):
            if doc.get(key) is not None:
                v = doc[key]
                try:
                    ok = not isinstance(v, bool) and float(v) == int(float(v))
                except (TypeError, ValueError):
                    ok = False
                if not ok:
                    raise ConfigError(key, f"expected an integer, got {v!r}")
                doc[key] = int(float(v))
        cfg = cls(**doc)
        cfg.validate()
        return cfg

    # -- validation ---------------------------------------------------------
    def _physical(self) -> bool:
        return any(v is not None for v in (self.U0, self.delta, self.t))

    def _dimensionless(self) -> bool:
        return self.u is not None or self.ur is not None

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError("mode", f"must be one of {', '.join(MODES)}")
        if self.mode == "sweep":
            if not self.scenarios:
                raise ConfigError("scenarios", "sweep needs a non-empty list of scenarios")
            return
        if self._physical() and self._dimensionless():
            raise ConfigError("u", "give either the physical block {U0, delta, t} or u/ur, not both")
        if self.envelope not in adiabatic.ENVELOPES:
            raise ConfigError("envelope", f"must be one of {adiabatic.ENVELOPES}")
        if self.sign_delta is not None and self.sign_delta not in (-1, 0, 1):
            raise ConfigError("sign_delta", "must be -1, 0 or +1")
        m = self.mode
        if m.startswith("oracle") and not self._physical():
            raise ConfigError("U0", f"{m} needs the physical block U0, delta, t")
        if self._physical():
            need = ("U0", "t") if m.startswith("resonant") or m == "oracle-resonant" else ("U0", "delta", "t")
            for key in need:
                if getattr(self, key) is None:
                    raise ConfigError(key, "missing from the physical parameter block")
            if self.t < 0:
                raise ConfigError("t", "must be non-negative")
        if m in ("adiabatic-two-peak", "adiabatic-gaussian"):
            if not self._physical() and self.u is None:
                raise ConfigError("u", f"{m} needs u (with sign_delta) or the physical block")
            if self.ur is not None:
                raise ConfigError("ur", f"{m} is adiabatic; ur does not apply")
            if self._physical() and self.delta == 0:
                raise ConfigError("delta", "zero detuning: use a resonant mode")
        if m.startswith("resonant") or m == "oracle-resonant":
            if not self._physical() and self.ur is None:
                raise ConfigError("ur", f"{m} needs ur or U0 and t")
            if self.u is not None:
                raise ConfigError("u", f"{m} is resonant; use ur")
            if self.delta not in (None, 0.0):
                raise ConfigError("delta", "resonant modes require delta = 0")
        if m == "adiabatic-two-peak":
            self._require_pair()
        if m in ("adiabatic-gaussian", "resonant-gaussian"):
            if self.M is None:
                raise ConfigError("M", "missing")
            if self.M <= 0:
                raise ConfigError("M", "must be positive")
        if m in ("resonant-general", "oracle-adiabatic", "oracle-resonant"):
            if self.packet is None and self.M is None:
                self._require_pair()
        if self.nmax is not None and self.nmax <= 0:
            raise ConfigError("nmax", "must be positive")
        if self.dt is not None and self.dt <= 0:
            raise ConfigError("dt", "must be positive")

    def _require_pair(self) -> None:
        if self.a0 is None and self.a2 is None:
            raise ConfigError("a0", "two-peak packet needs a0 and/or a2")
        if abs(self.a0 or 0) == 0 and abs(self.a2 or 0) == 0:
            raise ConfigError("a0", "a0 and a2 cannot both be zero")

    # -- derived objects ----------------------------------------------------
    def pulse(self) -> adiabatic.PulseParams:
        return adiabatic.PulseParams(self.U0, self.delta or 0.0, self.t, self.envelope, self.recoil_frequency)

    def adiabatic_params(self) -> adiabatic.AdiabaticParams:
        if self._physical():
            return adiabatic.interaction_parameter(self.pulse())
        sign = 1 if self.sign_delta is None else self.sign_delta
        if sign == 0:
            raise ConfigError("sign_delta", "adiabatic modes need sign_delta = +1 or -1")
        return adiabatic.AdiabaticParams(self.u, sign)

    def resonant_u(self) -> float:
        if self.ur is not None:
            return self.ur
        return resonant.resonant_u(self.U0, self.t)

    def packet_sign(self, default: int) -> int:
        if self.sign_delta is not None:
            return self.sign_delta
        if self.delta:
            return 1 if self.delta > 0 else -1
        return default

    def gaussian_spec(self, default_sign: int) -> GaussianSpec:
        return GaussianSpec(self.M, self.alpha or 0.0, self.packet_sign(default_sign))

    def build_packet(self, default_sign: int) -> WavePacket:
        if self.packet is not None:
            try:
                return WavePacket.from_json(json.dumps(self.packet))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError("packet", f"bad packet document: {exc}") from None
        if self.M is not None:
            return make_gaussian(self.gaussian_spec(default_sign))
        return make_two_peak(self.a0 or 0j, self.a2 or 0j)


# ---------------------------------------------------------------------------
# running
# ---------------------------------------------------------------------------

def _clean(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, complex):
        return [_clean(value.real), _clean(value.imag)]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def _write(out_dir: str, csv_text: str, metrics: dict[str, Any]) -> list[str]:
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "pattern.csv")
    json_path = os.path.join(out_dir, "metrics.json")
    with open(csv_path, "w", newline="\n") as fh:
        fh.write(csv_text)
    with open(json_path, "w", newline="\n") as fh:
        fh.write(json.dumps(_clean(metrics), sort_keys=True, indent=1) + "\n")
    return [csv_path, json_path]


def _checked(pattern: DiffractionPattern, tol: float = NORM_TOL) -> DiffractionPattern:
    try:
        pattern.check_normalized(tol)
    except ValueError as exc:
        raise NumericalQualityError(str(exc)) from None
    return pattern


def _run_two_peak(cfg: ScenarioConfig) -> tuple[str, dict]:
    p = cfg.adiabatic_params()
    a0, a2 = cfg.a0 or 0j, cfg.a2 or 0j
    pattern = _checked(adiabatic.two_peak_diffract(a0, a2, p))
    packet = make_two_peak(a0, a2)
    metrics = {
        "mode": cfg.mode,
        "u": p.u,
        "detuning_sign": p.detuning_sign,
        "asymmetry": adiabatic.asymmetry(pattern),
        "asymmetry_closed_form": adiabatic.asymmetry_closed_form(a0, a2, p),
        "mean_momentum": adiabatic.mean_momentum(packet, p),
        "mean_momentum_closed_form": adiabatic.mean_momentum_closed_form(a0, a2, p),
        "forward_fraction": pattern.forward_fraction(),
        "dropped_mass": pattern.dropped_mass,
    }
    if cfg._physical() and cfg.recoil_frequency is not None:
        metrics["validity"] = adiabatic.raman_nath_check(cfg.pulse()).as_dict()
    return pattern.to_csv(), metrics


def _run_gaussian(cfg: ScenarioConfig) -> tuple[str, dict]:
    p = cfg.adiabatic_params()
    spec = cfg.gaussian_spec(p.detuning_sign)
    exact = _checked(gaussian_dynamics.gaussian_diffract(spec, p.u))
    n, w_exact, w_mg, w_airy = gaussian_dynamics.comparison_table(spec, p.u)
    peak = float(np.max(w_exact))
    metrics = {
        "mode": cfg.mode,
        "u": p.u,
        "M": spec.M,
        "alpha": spec.alpha,
        "peak_order": exact.peak_order(),
        "asymmetry": adiabatic.asymmetry(exact),
        "mean_momentum": exact.first_moment(),
        "forward_fraction": exact.forward_fraction(),
        "moving_gaussian_max_dev": float(np.max(np.abs(w_mg - w_exact))) / peak,
        "airy_max_dev": float(np.max(np.abs(w_airy - w_exact))) / peak,
    }
    if cfg._physical() and cfg.recoil_frequency is not None:
        metrics["validity"] = adiabatic.raman_nath_check(cfg.pulse()).as_dict()
    return gaussian_dynamics.comparison_csv(spec, p.u), metrics


def _resonant_metrics(pattern: DiffractionPattern, u_r: float) -> dict:
    neg, pos = resonant.fringe_peaks(pattern)
    return {
        "u_r": u_r,
        "fringe_balance": resonant.fringe_balance(pattern),
        "peak_negative": neg,
        "peak_positive": pos,
        "forward_fraction": pattern.forward_fraction(),
        "dropped_mass": pattern.dropped_mass,
    }


def _run_resonant_gaussian(cfg: ScenarioConfig) -> tuple[str, dict]:
    u_r = cfg.resonant_u()
    spec = cfg.gaussian_spec(0)
    s = to_resonant_vector(make_gaussian(spec))
    pattern = _checked(resonant.resonant_diffract(s, u_r))
    closed = resonant.gaussian_resonant_closed_form(spec, u_r)
    separated = resonant.gaussian_resonant_separated(spec, u_r)
    peak = float(np.max(pattern.probabilities))
    metrics = {"mode": cfg.mode, "M": spec.M, "alpha": spec.alpha, "detuning_sign": spec.detuning_sign,
               "beta": resonant.resonant_beta(spec), **_resonant_metrics(pattern, u_r),
               "closed_form_max_dev": max_abs_difference(pattern, closed) / peak,
               "separated_max_dev": max_abs_difference(pattern, separated) / peak}
    return pattern.to_csv(), metrics


def _run_resonant_general(cfg: ScenarioConfig) -> tuple[str, dict]:
    u_r = cfg.resonant_u()
    s = cfg.build_packet(0)
    pattern = _checked(resonant.resonant_diffract(s, u_r))
    return pattern.to_csv(), {"mode": cfg.mode, **_resonant_metrics(pattern, u_r)}


def _run_oracle_adiabatic(cfg: ScenarioConfig) -> tuple[str, dict]:
    params = cfg.pulse()
    packet = cfg.build_packet(1 if params.detuning >= 0 else -1)
    report = ladder_oracle.adiabatic_validate(packet, params, cfg.nmax, cfg.dt)
    state = ladder_oracle.evolve(packet, params, report.n_max, cfg.dt)
    pattern = state.ground_pattern()
    _checked(state.total_pattern(), ladder_oracle.DRIFT_LIMIT)
    return pattern.to_csv(), {"mode": cfg.mode, **report.as_dict()}


def _run_oracle_resonant(cfg: ScenarioConfig) -> tuple[str, dict]:
    packet = cfg.build_packet(0)
    if packet.representation != "s":
        packet = to_resonant_vector(packet)
    report = ladder_oracle.resonant_validate(packet, cfg.U0, cfg.t, cfg.nmax, cfg.dt)
    params = adiabatic.PulseParams(cfg.U0, 0.0, cfg.t)
    state = ladder_oracle.evolve(packet, params, report.n_max, cfg.dt)
    pattern = _checked(state.total_pattern(), ladder_oracle.DRIFT_LIMIT)
    return pattern.to_csv(), {"mode": cfg.mode, **report.as_dict()}


_RUNNERS = {
    "adiabatic-two-peak": _run_two_peak,
    "adiabatic-gaussian": _run_gaussian,
    "resonant-gaussian": _run_resonant_gaussian,
    "resonant-general": _run_resonant_general,
    "oracle-adiabatic": _run_oracle_adiabatic,
    "oracle-resonant": _run_oracle_resonant,
}


def _run_single(cfg: ScenarioConfig) -> list[str]:
    try:
        csv_text, metrics = _RUNNERS[cfg.mode](cfg)
    except (RegimeError, InvalidArgumentError) as exc:
        raise ConfigError(cfg.mode, str(exc)) from None
    return _write(cfg.out, csv_text, metrics)


def _run_child(doc: dict) -> list[str]:
    return _run_single(ScenarioConfig.from_dict(doc))


def run(cfg: ScenarioConfig, jobs: int = 1) -> list[str]:
    """Execute a scenario and return the paths of the files written."""
    if cfg.mode != "sweep":
        return _run_single(cfg)
    docs = []
    for i, sub in enumerate(cfg.scenarios):
        if not isinstance(sub, dict):
            raise ConfigError(f"scenarios[{i}]", "each scenario must be an object")
        sub = dict(sub)
        if sub.get("mode") == "sweep":
            raise ConfigError(f"scenarios[{i}].mode", "sweeps cannot nest")
        name = sub.pop("name", None) or f"scenario_{i:03d}"
        sub["out"] = os.path.join(cfg.out, name)
        ScenarioConfig.from_dict(sub)  # fail fast before any work
        docs.append(sub)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_child, docs))
    else:
        results = [_run_child(d) for d in docs]
    return [p for paths in results for p in paths]


__all__ = ["ScenarioConfig", "ConfigError", "PRESETS", "MODES", "run", "parse_complex", "format_float"]

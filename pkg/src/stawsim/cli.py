"""``stawsim`` command line: compute a scenario and write pattern.csv + metrics.json.

Settings are layered: ``--preset`` first, then ``--config``, then
individual flags.  Exit status: 0 success, 2 configuration error,
3 numerical-quality failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import NumericalQualityError
from .scenario import MODES, PRESETS, ConfigError, ScenarioConfig, run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICS = 3

# flag dest -> config key
_FLAG_KEYS = {
    "u": "u", "M": "M", "alpha": "alpha", "sign_delta": "sign_delta", "ur": "ur",
    "nmax": "nmax", "dt": "dt", "a0": "a0", "a2": "a2", "U0": "U0", "delta": "delta",
    "t": "t", "envelope": "envelope", "recoil": "recoil_frequency", "out": "out",
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stawsim", description=__doc__.splitlines()[0])
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", metavar="PATH", help="JSON scenario file")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--out", metavar="DIR", help="output directory (default: current)")
    p.add_argument("--u", type=float, help="adiabatic interaction parameter")
    p.add_argument("--M", type=float, help="Gaussian half-width")
    p.add_argument("--alpha", type=float, help="Gaussian phase [rad]")
    p.add_argument("--sign-delta", dest="sign_delta", type=int, choices=(-1, 0, 1))
    p.add_argument("--ur", type=float, help="resonant parameter 2 U t")
    p.add_argument("--nmax", type=int, help="ladder half-length for oracle runs")
    p.add_argument("--dt", type=float, help="oracle time step")
    p.add_argument("--a0", help="amplitude at site 0, e.g. 0.7071 or 0.6+0.8j")
    p.add_argument("--a2", help="amplitude at site +2")
    p.add_argument("--U0", type=float, help="peak Rabi frequency")
    p.add_argument("--delta", type=float, help="detuning")
    p.add_argument("--t", type=float, help="pulse duration")
    p.add_argument("--envelope", choices=("rectangular", "sin2"))
    p.add_argument("--recoil", type=float, help="recoil frequency, enables the Raman-Nath report")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for sweep mode")
    return p


def _merge(args: argparse.Namespace) -> dict:
    doc: dict = {}
    if args.preset:
        doc.update(PRESETS[args.preset])
        if doc["mode"] != args.mode:
            raise ConfigError("preset", f"preset {args.preset} is a {doc['mode']} scenario, not {args.mode}")
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise ConfigError("config", f"cannot read {args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError("config", "top level must be a JSON object")
        doc.update(loaded)
    doc["mode"] = args.mode
    for dest, key in _FLAG_KEYS.items():
        value = getattr(args, dest)
        if value is not None:
            doc[key] = value
    # a physical block from a preset must not clash with a dimensionless override
    if args.u is not None or args.ur is not None:
        for key in ("U0", "delta", "t"):
            if getattr(args, key) is None:
                doc.pop(key, None)
    return doc


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = ScenarioConfig.from_dict(_merge(args))
        paths = run(cfg, jobs=max(1, args.jobs))
    except ConfigError as exc:
        print(f"stawsim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalQualityError as exc:
        print(f"stawsim: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    for path in paths:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""``nfbeam`` command line: gain sweeps, beamdepth/EBRD, decay curves, sum-rate, validate.

Exit codes: 0 success, 1 a validation check failed, 2 usage error,
3 invalid configuration, 4 numerical failure. Errors are reported on stderr
as one JSON object ``{"error": <category>, "message": ...}``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .capacity import RNG_ALGORITHM, ScenarioConfig, run_scenario
from .channel import Position
from .errors import ConfigError, NearFieldError, NumericalError
from .focus import (
    AlphaSource,
    alpha_3db,
    beamdepth_closed,
    beamdepth_numeric,
    beamdepth_record,
    ebrd,
)
from .gain import decay_curves, gain_profile
from .geometry import ArrayKind, CarrierConfig, make_uca, make_ula, uca_for_aperture, ula_for_aperture
from .validation import run_all

EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_NUMERICAL = 4


def _fmt(x) -> str:
    return f"{x:.12g}"


def _round_floats(obj):
    if isinstance(obj, float):
        return float(_fmt(obj)) if math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _json_text(obj) -> str:
    return json.dumps(_round_floats(obj), indent=2) + "\n"


def _geometry(args):
    carrier = CarrierConfig.from_ghz(args.fc_ghz)
    kind = ArrayKind(args.array)
    if args.n is not None:
        return (make_ula if kind is ArrayKind.ULA else make_uca)(args.n, carrier)
    return (ula_for_aperture if kind is ArrayKind.ULA else uca_for_aperture)(args.aperture_m, carrier)


def _focus(args) -> Position:
    return Position(args.focus_m, math.radians(args.theta_deg), math.radians(args.phi_deg))


def _angle_rad(args, kind: ArrayKind) -> float:
    return math.radians(args.theta_deg if kind is ArrayKind.UCA else args.phi_deg)


def _geometry_summary(g) -> dict:
    return {
        "kind": g.kind.value,
        "n": g.n,
        "fc_hz": g.carrier.frequency,
        "wavelength_m": g.wavelength,
        "spacing_m": g.spacing,
        "aperture_m": g.aperture,
        "rayleigh_m": g.rayleigh,
        "min_nf_m": g.min_nf,
    }


# -- subcommands -------------------------------------------------------------
# Each returns (text, resolved_config).

def cmd_gain_sweep(args):
    g = _geometry(args)
    focus = _focus(args)
    r_lo = args.r_lo if args.r_lo is not None else g.min_nf
    r_hi = args.r_hi if args.r_hi is not None else 100 * g.rayleigh
    prof = gain_profile(g, focus, r_lo, r_hi, args.samples, args.model, args.allow_reactive)
    cfg = {"geometry": _geometry_summary(g), "focus_m": focus.r, "theta_rad": focus.theta,
           "phi_rad": focus.phi, "r_lo_m": r_lo, "r_hi_m": r_hi, "samples": args.samples,
           "model": args.model, "grid": "uniform-inverse-range"}
    return prof.to_csv(), cfg


def cmd_beamdepth(args):
    g = _geometry(args)
    focus = _focus(args)
    chosen = AlphaSource(args.alpha)
    other = AlphaSource.COMPUTED if chosen is AlphaSource.PUBLISHED else AlphaSource.PUBLISHED
    a = alpha_3db(g.kind, chosen)
    rec = beamdepth_record(g, focus, a, beamdepth_closed(g, focus, a, args.allow_reactive))
    b = alpha_3db(g.kind, other)
    rec["alternate_alpha"] = beamdepth_record(g, focus, b, beamdepth_closed(g, focus, b, args.allow_reactive))
    if args.numeric:
        res = beamdepth_numeric(g, focus, args.grid)
        num = {"grid": args.grid}
        if res.is_finite:
            num.update(r_min_m=res.r_min, r_max_m=res.r_max, depth_m=res.depth)
        else:
            num["unbounded"] = True
        rec["numeric"] = num
    cfg = {"geometry": _geometry_summary(g), "focus_m": focus.r, "theta_rad": focus.theta,
           "phi_rad": focus.phi, "alpha": chosen.value, "numeric": args.numeric}
    return _json_text(rec), cfg


def _parse_sweep(spec: str) -> np.ndarray:
    try:
        a, b, step = (float(v) for v in spec.split(":"))
    except ValueError:
        raise ConfigError(f"--sweep-deg expects a:b:step, got {spec!r}") from None
    if step <= 0 or b < a:
        raise ConfigError(f"invalid sweep {spec!r}")
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    return a + step * np.arange(count)


def cmd_ebrd(args):
    g = _geometry(args)
    chosen = AlphaSource(args.alpha)
    published, computed = alpha_3db(g.kind, AlphaSource.PUBLISHED), alpha_3db(g.kind, AlphaSource.COMPUTED)
    cfg = {"geometry": _geometry_summary(g), "alpha": chosen.value}
    if args.sweep_deg:
        angles = _parse_sweep(args.sweep_deg)
        lines = ["angle_deg,ebrd_published_m,ebrd_computed_m"]
        for deg in angles:
            rad = math.radians(deg)
            lines.append(f"{_fmt(deg)},{_fmt(ebrd(g, rad, published))},{_fmt(ebrd(g, rad, computed))}")
        cfg["sweep_deg"] = args.sweep_deg
        return "\n".join(lines) + "\n", cfg
    ang = _angle_rad(args, g.kind)
    a = published if chosen is AlphaSource.PUBLISHED else computed
    b = computed if chosen is AlphaSource.PUBLISHED else published
    rec = {"kind": g.kind.value, "angle_rad": ang, "alpha": a.value, "alpha_source": a.source.value,
           "ebrd_m": ebrd(g, ang, a),
           "alternate_alpha": {"alpha": b.value, "alpha_source": b.source.value, "ebrd_m": ebrd(g, ang, b)}}
    cfg["angle_rad"] = ang
    return _json_text(rec), cfg


def cmd_decay(args):
    if not (0 <= args.x_min < args.x_max) or args.samples < 2:
        raise ConfigError("decay needs 0 <= x-min < x-max and at least 2 samples")
    x = np.linspace(args.x_min, args.x_max, args.samples)
    bes, fre, snc = decay_curves(x)
    lines = ["x,bessel_j0,fresnel_ratio,sinc"]
    lines += [f"{_fmt(a)},{_fmt(b)},{_fmt(c)},{_fmt(d)}" for a, b, c, d in zip(x, bes, fre, snc)]
    return "\n".join(lines) + "\n", {"x_min": args.x_min, "x_max": args.x_max, "samples": args.samples}


def cmd_sumrate(args):
    try:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read scenario {args.config}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("scenario JSON must be an object")
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.trials is not None:
        raw["trials"] = args.trials
    cfg = ScenarioConfig.from_dict(raw)
    res = run_scenario(cfg)
    resolved = cfg.to_dict()
    g = cfg.array.build()
    resolved["resolved_geometry"] = _geometry_summary(g)
    resolved["resolved_range_m"] = [g.min_nf, cfg.upper_range(g)]
    return res.to_csv(), resolved


def cmd_validate(args):
    checks = run_all()
    text = "".join(c.line() + "\n" for c in checks)
    failed = [c.name for c in checks if not c.passed]
    return text, {"checks": [c.name for c in checks], "failed": failed}


# -- plumbing ----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(json.dumps({"error": "usage", "message": message}) + "\n")
        sys.exit(EXIT_USAGE)


def _add_geometry(p):
    p.add_argument("--array", choices=[k.value for k in ArrayKind], required=True)
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("--n", type=int, help="element count")
    size.add_argument("--aperture-m", type=float, help="target aperture in metres")
    p.add_argument("--fc-ghz", type=float, default=28.0)


def _add_angles(p):
    p.add_argument("--theta-deg", type=float, default=90.0, help="elevation from the array normal")
    p.add_argument("--phi-deg", type=float, default=0.0, help="azimuth from +x (ULA boresight)")


def _add_out(p):
    p.add_argument("--out", help="output file (stdout if omitted); a manifest is written next to it")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="nfbeam", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"nfbeam {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gain-sweep", help="range-domain gain profile as CSV")
    _add_geometry(p)
    _add_angles(p)
    p.add_argument("--focus-m", type=float, required=True)
    p.add_argument("--model", choices=["exact", "taylor", "closed"], default="exact")
    p.add_argument("--r-lo", type=float, help="default 1.2*D")
    p.add_argument("--r-hi", type=float, help="default 100*R_D")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--allow-reactive", action="store_true", help="permit ranges below 1.2*D")
    _add_out(p)
    p.set_defaults(func=cmd_gain_sweep)

    p = sub.add_parser("beamdepth", help="closed-form (and optionally numeric) 3 dB beamdepth as JSON")
    _add_geometry(p)
    _add_angles(p)
    p.add_argument("--focus-m", type=float, required=True)
    p.add_argument("--alpha", choices=[s.value for s in AlphaSource], default=AlphaSource.PUBLISHED.value)
    p.add_argument("--numeric", action="store_true", help="also sweep the exact gain")
    p.add_argument("--grid", type=int, default=4000)
    p.add_argument("--allow-reactive", action="store_true")
    _add_out(p)
    p.set_defaults(func=cmd_beamdepth)

    p = sub.add_parser("ebrd", help="EBRD at one angle (JSON) or over a sweep (CSV)")
    _add_geometry(p)
    _add_angles(p)
    p.add_argument("--alpha", choices=[s.value for s in AlphaSource], default=AlphaSource.PUBLISHED.value)
    p.add_argument("--sweep-deg", metavar="A:B:STEP")
    _add_out(p)
    p.set_defaults(func=cmd_ebrd)

    p = sub.add_parser("decay", help="Bessel / Fresnel / sinc gain kernels as CSV")
    p.add_argument("--x-min", type=float, default=0.0)
    p.add_argument("--x-max", type=float, default=50.0)
    p.add_argument("--samples", type=int, default=1001)
    _add_out(p)
    p.set_defaults(func=cmd_decay)

    p = sub.add_parser("sumrate", help="Monte Carlo MRT sum-rate from a scenario JSON")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, help="override the scenario seed")
    p.add_argument("--trials", type=int, help="override the scenario trial count")
    _add_out(p)
    p.set_defaults(func=cmd_sumrate)

    p = sub.add_parser("validate", help="run the oracle cross-checks")
    _add_out(p)
    p.set_defaults(func=cmd_validate)
    return ap


def _write_outputs(args, argv, text, config, started):
    if not args.out:
        sys.stdout.write(text)
        return
    out = Path(args.out)
    data = text.encode("utf-8")
    out.write_bytes(data)
    manifest = {
        "tool": "nfbeam",
        "version": __version__,
        "command": args.command,
        "argv": list(argv),
        "config": config,
        "seed": config.get("seed"),
        "rng": RNG_ALGORITHM if args.command == "sumrate" else None,
        "started_utc": started,
        "finished_utc": datetime.now(timezone.utc).isoformat(),
        "outputs": {str(out): hashlib.sha256(data).hexdigest()},
    }
    out.with_name(out.name + ".manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


def run_cli(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    started = datetime.now(timezone.utc).isoformat()
    try:
        text, config = args.func(args)
        _write_outputs(args, argv, text, config, started)
    except NearFieldError as exc:
        sys.stderr.write(json.dumps({"error": exc.category, "message": str(exc)}) + "\n")
        return EXIT_NUMERICAL if isinstance(exc, NumericalError) else EXIT_CONFIG
    if args.command == "validate" and config["failed"]:
        return EXIT_CHECK_FAILED
    return 0


def main() -> None:
    sys.exit(run_cli())

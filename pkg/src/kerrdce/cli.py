"""Command-line entry point.

Subcommands mirror the scenarios module: run, spectrum, sweep,
resonance. Exit codes: 0 success, 2 invalid configuration or
parameters, 3 convergence or search failure.
"""

from __future__ import annotations

import argparse
import sys

from ._version import __version__
from .errors import KerrdceError, ValidationError
from . import scenarios
from .spectra import gaps


def _add_source(p: argparse.ArgumentParser):
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--config", help="scenario INI file")
    group.add_argument(
        "--builtin",
        choices=scenarios.BUILTIN_NAMES,
        help="shipped scenario name",
    )


def _load(args) -> scenarios.ScenarioConfig:
    if args.config:
        return scenarios.load_config(args.config)
    return scenarios.builtin_config(args.builtin)


def _parse_bracket(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValidationError("--bracket expects lo,hi")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise ValidationError(f"--bracket expects two numbers, got {text!r}") from None
    if not hi > lo:
        raise ValidationError(f"--bracket needs hi > lo, got {text!r}")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kerrdce",
        description="Photon generation from time-modulated Kerr-type nonlinearities.",
    )
    parser.add_argument("--version", action="version", version=f"kerrdce {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="integrate a scenario and export CSV + JSON")
    _add_source(p)
    p.add_argument("--out", help="output directory (default $KERRDCE_OUT or cwd)")

    p = sub.add_parser("spectrum", help="export the static dressed ladder as CSV")
    _add_source(p)
    p.add_argument("--out", help="output directory (default $KERRDCE_OUT or cwd)")

    p = sub.add_parser("sweep", help="evaluate the scenario's sweep grid")
    _add_source(p)
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--out", help="output directory (default $KERRDCE_OUT or cwd)")

    p = sub.add_parser("resonance", help="search for the optimal drive frequency")
    _add_source(p)
    p.add_argument("--bracket", help="search interval lo,hi (default: static gap +-1%%)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--out", help="output directory (default $KERRDCE_OUT or cwd)")

    return parser


def _cmd_run(args) -> int:
    cfg = _load(args)
    result = scenarios.run(cfg, out_dir=args.out)
    s = result.summary
    print(f"{cfg.name}: n_max = {s['n_max_final']} ({s['escalations']} escalations)")
    print(f"t* = {s['t_star']:g}  max <n> = {s['max_mean_n']:.6g}  Q(t*) = {s['q_at_peak']:.6g}")
    print(f"norm drift: max per sample {s['max_sample_drift']:.3e}, total {s['total_drift']:.3e}")
    print(f"wrote {result.csv_path}")
    print(f"wrote {result.json_path}")
    return 0


def _cmd_spectrum(args) -> int:
    cfg = _load(args)
    spec = scenarios.static_spectrum(cfg)
    out = scenarios.resolve_out_dir(args.out)
    path = scenarios.write_spectrum_csv(out / f"{cfg.out_stem}_spectrum.csv", cfg, spec)
    eta_n = gaps(spec)
    print(f"{cfg.name}: {len(spec.lambdas)} levels, eta_0 = {eta_n[0]:.10g}")
    print(f"wrote {path}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load(args)
    rows, path = scenarios.sweep(cfg, jobs=args.jobs, out_dir=args.out)
    failed = sum(1 for r in rows if r.get("error"))
    print(f"{cfg.name}: {len(rows)} points, {failed} failed")
    print(f"wrote {path}")
    return 0


def _cmd_resonance(args) -> int:
    cfg = _load(args)
    bracket = _parse_bracket(args.bracket) if args.bracket else None
    result = scenarios.resonance_scan(cfg, bracket=bracket, jobs=args.jobs, out_dir=args.out)
    print(f"{cfg.name}: eta* = {result.eta_star:.6f}  response <n> = {result.response:.6g}")
    print(f"bracket [{result.bracket[0]:.6f}, {result.bracket[1]:.6f}], {len(result.probes)} probes")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "spectrum": _cmd_spectrum,
    "sweep": _cmd_sweep,
    "resonance": _cmd_resonance,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KerrdceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

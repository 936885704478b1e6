"""Command line: ``mops verify | table | shift-check``.

Exit codes: 0 when every verdict passes, 1 when any identity fails (the
report is still written), 2 on a configuration error.
"""
from __future__ import annotations

import argparse
import sys
import time

from . import io as mio
from .contiguity import ShiftDescriptor
from .errors import MopsError
from .families import KINDS, FamilySpec
from .kernel import DEFAULT_AMPLIFICATION, Q, fmt
from .pipeline import DEFAULT_TAIL
from .suite import RunConfig, run_shift_check, run_table, run_verify
from .weights import WeightSystem

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


def _rationals(text):
    if text is None:
        return None
    try:
        return [Q(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, TypeError) as e:
        raise ConfigError(f"not a rational list: {text!r}") from e


def _rational(text, name):
    try:
        return Q(text)
    except (ValueError, TypeError) as e:
        raise ConfigError(f"{name}: not a rational: {text!r}") from e


def build_parser():
    ap = argparse.ArgumentParser(prog="mops", description="Exact multiple discrete orthogonal polynomials.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (("verify", "run the identity suites"),
                        ("table", "emit recurrence coefficients, pivots and tau"),
                        ("shift-check", "connection and compatibility checks for parameter shifts")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--family", choices=KINDS)
        p.add_argument("--weights", help="weight-system JSON file")
        p.add_argument("--p", type=int)
        p.add_argument("--eta", help="comma-separated rationals (one shared value for Meixner kinds)")
        p.add_argument("--b", help="comma-separated rationals")
        p.add_argument("--c")
        p.add_argument("--n", type=int, default=8)
        p.add_argument("--jet", type=int, default=0)
        p.add_argument("--tail", default=fmt(DEFAULT_TAIL))
        p.add_argument("--amp", default=fmt(DEFAULT_AMPLIFICATION))
        p.add_argument("--shift", action="append", default=[], help='e.g. "b:a=1,i=1" or "c:j=1"')
        p.add_argument("--out", default="-")
        p.add_argument("--format", choices=("json", "csv"), default=None)
    return ap


def config_from_args(args) -> RunConfig:
    if (args.family is None) == (args.weights is None):
        raise ConfigError("give exactly one of --family or --weights")
    if args.p is not None and args.p < 1:
        raise ConfigError("p must be ≥ 1")
    shifts = []
    for s in args.shift:
        try:
            shifts.append(ShiftDescriptor.parse(s))
        except ValueError as e:
            raise ConfigError(str(e)) from e
    common = dict(jet=args.jet, tail=_rational(args.tail, "tail"), amp=_rational(args.amp, "amp"),
                  shifts=shifts)
    if args.weights is not None:
        try:
            with open(args.weights, encoding="utf-8") as fh:
                ws = WeightSystem.from_json(fh.read())
        except (OSError, ValueError, KeyError) as e:
            raise ConfigError(f"cannot read weights: {e}") from e
        if args.p is not None and args.p != ws.p:
            raise ConfigError(f"--p {args.p} does not match the weight file (p={ws.p})")
        return RunConfig(ws, args.n, **common)
    if args.p is None:
        raise ConfigError("--family needs --p")
    eta = _rationals(args.eta) or []
    b = _rationals(args.b) or []
    c = _rational(args.c, "c") if args.c is not None else None
    fs = FamilySpec(args.family, args.p, tuple(eta), c, tuple(b))
    return RunConfig.for_family(fs, args.n, **common)


def _emit(args, text, meta):
    mio.write_text(args.out, text)
    mio.write_sidecar(args.out, meta)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.time()
    try:
        cfg = config_from_args(args)
        if args.command == "shift-check" and not cfg.shifts:
            raise ConfigError("shift-check needs at least one --shift")
        for sd in cfg.shifts:
            sd.validate(cfg.ws)
    except (ConfigError, MopsError, ValueError) as e:
        print(f"mops: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "table":
            table = run_table(cfg)
            text = mio.dumps_table(table, cfg.echo(), args.format or "csv")
            ok = all(v for _, v in table.verdicts)
        else:
            reports = run_verify(cfg) if args.command == "verify" else run_shift_check(cfg)
            text = mio.dumps_report(reports, cfg.echo(), args.format or "json")
            ok = all(r.passed for r in reports)
    except MopsError as e:
        print(f"mops: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(args, text, {"command": args.command, "wall_seconds": round(time.time() - started, 3),
                       "argv": list(sys.argv[1:] if argv is None else argv)})
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

"""``muntz-elevate`` command-line front end.

Exit codes: 0 on success, 2 for invalid input (arguments, configuration
files, unwritable output) and 3 when the numerical engine gives up.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .config import OUTPUT_FORMATS, ExperimentConfig, load_config, preset_config
from .errors import ConfigError, DomainError, MuntzError, NumericalFailure
from .exponents import (NAMED_SEQUENCES, ExponentSequence, Interval, materialize,
                        muntz_partial_sums)
from .numerics import PrecisionContext

__all__ = ["main", "build_parser", "run_config"]

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3
SUMS_LABEL = "partial sums - no divergence verdict"


# ---------------------------------------------------------------------------
# Argument helpers

def _floats(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _formats(values) -> list:
    out = []
    for v in values or ["json"]:
        out.extend(x for x in v.split(",") if x)
    bad = [f for f in out if f not in OUTPUT_FORMATS]
    if bad:
        raise ConfigError({"format": f"unknown format(s) {bad}; choose from {OUTPUT_FORMATS}"})
    return list(dict.fromkeys(out))


def parse_sequence(text: str, rule: str | None = None, params=None) -> ExponentSequence:
    """Named sequence, JSON descriptor file, or comma-separated prefix."""
    params = dict(params or {})
    if text in NAMED_SEQUENCES and rule is None:
        return NAMED_SEQUENCES[text]
    if text.endswith(".json"):
        try:
            return ExponentSequence.from_dict(json.loads(Path(text).read_text()))
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise DomainError(f"cannot read exponent descriptor {text}: {exc}") from None
    return ExponentSequence(tuple(_floats(text)), rule or "explicit", params)


def _params(items) -> dict:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise DomainError(f"--param expects KEY=VALUE, got {item!r}")
        out[key] = [float(x) for x in value.split(",")] if key == "table" else float(value)
    return out


# ---------------------------------------------------------------------------
# Runs

def run_config(config: ExperimentConfig, out_dir=None, formats=None, stem=None) -> list:
    """Elevate, diagnose and write the outputs of one configuration."""
    from .diagnostics import run_experiment
    from .report import TraceReport, write_outputs

    trace, report, curve = run_experiment(config)
    tr = TraceReport.from_run(config, trace, report, curve)
    out_dir = config.output["path"] if out_dir is None else out_dir
    formats = config.output["formats"] if formats is None else formats
    return [str(p) for p in write_outputs(tr, out_dir, formats, stem or config.name)]


def _run_job(job):
    """Process-pool entry; returns ``(exit_code, message)``."""
    path, out_dir, formats = job
    try:
        config = load_config(path)
        return EXIT_OK, "\n".join(run_config(config, out_dir, formats, Path(path).stem))
    except ConfigError as exc:
        return EXIT_INVALID, f"{path}: {exc}"
    except NumericalFailure as exc:
        return EXIT_NUMERICAL, f"{path}: numerical failure at iteration {exc.iteration}: {exc}"
    except (DomainError, OSError) as exc:
        return EXIT_INVALID, f"{path}: {exc}"


def cmd_figure(args) -> int:
    formats = _formats(args.format)
    config = preset_config(f"fig{args.figure_id}")
    changes = {"output": {"formats": formats, "path": args.out}}
    if args.iters is not None:
        changes["iterations"] = args.iters
    config = config.replace(**changes)
    for p in run_config(config):
        print(p)
    return EXIT_OK


def cmd_elevate(args) -> int:
    formats = _formats(args.format) if args.format else None
    jobs = [(p, args.out, formats) for p in args.configs]
    if len(jobs) == 1 or args.jobs == 1:
        results = [_run_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_job, jobs))
    code = EXIT_OK
    for status, message in results:
        print(message, file=sys.stderr if status else sys.stdout)
        code = max(code, status)
    return code


def _diagnose_rows(args, ctx):
    from .bases import theorem4_gap
    from .diagnostics import first_basis_ratio, node_max_gap, theorem7_gap

    t = args.theorem
    default_seq = {4: "fig3", 7: "fig3", 8: "fig3", 9: "fig2"}[t]
    seq = parse_sequence(args.exponents or default_seq, args.rule, _params(args.param))
    if t == 4:
        if not args.a:
            raise DomainError("--theorem 4 needs --a (comma-separated left ends)")
        rs = materialize(seq, args.m[0] if args.m else seq.n)
        return ["a", "gap"], [(a, theorem4_gap(rs, a, ctx=ctx)) for a in args.a]
    ms = args.m or ([4, 6, 8, 10, 12] if t == 9 else [10, 20, 40, 80])
    if t == 7:
        if args.k is None:
            raise DomainError("--theorem 7 needs --k")
        a = args.a[0] if args.a else 0.2
        return ["m", "gap"], [(m, theorem7_gap(materialize(seq, m), a, args.k, ctx)) for m in ms]
    if t == 8:
        interval = Interval(args.a[0] if args.a else 0.0, 1.0)
        return ["m", "node_max_gap"], [(m, node_max_gap(materialize(seq, m), interval, ctx)) for m in ms]
    return ["m", "ratio"], [(m, first_basis_ratio(materialize(seq, m), args.epsilon, ctx=ctx)) for m in ms]


def cmd_diagnose(args) -> int:
    ctx = PrecisionContext.from_env()
    header, rows = _diagnose_rows(args, ctx)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(header)
    for x, y in rows:
        w.writerow([format(x, ".17g") if isinstance(x, float) else x, format(y, ".17g")])
    return EXIT_OK


def cmd_sums(args) -> int:
    seq = parse_sequence(args.exponents, args.rule, _params(args.param))
    print(f"# {SUMS_LABEL}")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["m", "sum_reciprocal", "sum_density", "sum_full"])
    for m in args.m:
        s = muntz_partial_sums(seq, m)
        w.writerow([m, *(format(v, ".17g") for v in (s.sum_reciprocal, s.sum_density, s.sum_full))])
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser

def _add_sequence_args(p, required: bool):
    p.add_argument("--exponents", required=required,
                   help=f"named sequence ({', '.join(NAMED_SEQUENCES)}), a JSON descriptor file, "
                        "or a comma-separated prefix starting with 0")
    p.add_argument("--rule", choices=["explicit", "affine", "power", "harmonic", "custom"],
                   help="extension rule for a comma-separated prefix")
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="rule parameter, e.g. --param p=2 (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="muntz-elevate",
        description="Dimension elevation of Muntz curves: presets, custom runs and diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("figure", help="run one of the four bundled figure presets")
    p.add_argument("figure_id", type=int, choices=[1, 2, 3, 4])
    p.add_argument("--iters", type=int, default=None, help="iterations (default 100)")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", action="append", help="csv, svg or json; repeat or comma-separate")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("elevate", help="run experiment configuration files")
    p.add_argument("configs", nargs="+", help="JSON configuration files")
    p.add_argument("--out", default=None, help="override the configured output directory")
    p.add_argument("--format", action="append", help="override the configured formats")
    p.add_argument("--jobs", type=int, default=None, help="worker processes for several configs")
    p.set_defaults(func=cmd_elevate)

    p = sub.add_parser("diagnose", help="theorem-level gap and ratio series as CSV")
    p.add_argument("--theorem", type=int, choices=[4, 7, 8, 9], required=True)
    _add_sequence_args(p, required=False)
    p.add_argument("--a", type=_floats, help="left end(s) of [a, 1]")
    p.add_argument("--m", type=_ints, help="dimension(s) m")
    p.add_argument("--k", type=int, help="monomial index for --theorem 7")
    p.add_argument("--epsilon", type=float, default=0.5, help="split point 1 - epsilon for --theorem 9")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("sums", help="partial sums of the density series")
    _add_sequence_args(p, required=True)
    p.add_argument("--m", type=_ints, required=True, help="upper index (comma-separated for several)")
    p.set_defaults(func=cmd_sums)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalFailure as exc:
        where = f" at iteration {exc.iteration}" if exc.iteration is not None else ""
        print(f"numerical failure{where}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DomainError, MuntzError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

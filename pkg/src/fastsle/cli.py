"""Command line: ``fastsle {simulate,compare,bench,sweep}``.

Traces and sweeps are written as CSV with a ``# key=value`` header that
echoes the full configuration; summaries are JSON. Exit status is 0 on
success, 2 for usage errors and 1 when a computation fails.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from contextlib import contextmanager
from dataclasses import replace

import numpy as np

from . import __version__
from ._backend import BACKEND
from .bench import AXES, TraceConfig, loglog_slope, prepare, sweep, evaluate
from .driving import make_partition
from .trace import error_between

__all__ = ["main", "build_parser", "config_from_args", "write_trace_csv", "read_trace_csv"]

SWEEP_FIELDS = (
    "N", "b", "n", "L", "kappa", "d", "algorithm", "discretization", "scheme",
    "variant", "time_per_point", "error", "samples", "seed",
)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % x
    return "" if x is None else str(x)


def parse_L(text: str) -> float:
    v = float(text)  # accepts "inf"
    if not v > 1:
        raise argparse.ArgumentTypeError(f"L must exceed 1, got {text!r}")
    return v


def _parse_values(text: str) -> list[float]:
    out = [float(t) for t in text.replace(" ", "").split(",") if t]
    if not out:
        raise argparse.ArgumentTypeError("empty value list")
    return out


def _add_common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("driving")
    g.add_argument("--kappa", type=float, default=8 / 3)
    g.add_argument("-N", "--N", dest="N", type=int, default=10_000)
    g.add_argument("-d", "--d", dest="d", type=int, default=None, help="point spacing (default N//1000)")
    g.add_argument("--discretization", choices=["tilted", "vertical"], default="tilted")
    g.add_argument("--partition", choices=["uniform", "spaced"], default="uniform")
    g.add_argument("--nu", type=float, default=0.75, help="exponent of the spaced partition")
    g.add_argument("--increments", choices=["gaussian", "bernoulli"], default="gaussian")
    g.add_argument("--seed", type=int, default=0)
    g = p.add_argument_group("fast algorithm")
    g.add_argument("--algorithm", choices=["baseline", "fast"], default="fast")
    g.add_argument("-b", "--b", dest="b", type=int, default=None, help="block size (default ~0.12 sqrt N)")
    g.add_argument("-n", "--n", dest="n", type=int, default=12, help="series order")
    g.add_argument("-L", "--L", dest="L", type=parse_L, default=None, help="radius factor, or inf")
    g.add_argument("--eps", type=float, default=1e-6, help="target L**-n when L is unset")
    p.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fastsle", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="compute a trace and write it as CSV")
    _add_common(p)

    p = sub.add_parser("compare", help="error of the configured algorithm against the baseline (JSON)")
    _add_common(p)

    p = sub.add_parser("bench", help="time both algorithms over a list of N (CSV + JSON slopes)")
    _add_common(p)
    p.add_argument("--values", type=_parse_values, default=[1e4, 3e4, 1e5, 3e5], help="comma-separated N")
    p.add_argument("--repetitions", type=int, default=5)
    p.add_argument("--summary", default=None, help="JSON summary path (default stdout, or stderr if CSV goes to stdout)")

    p = sub.add_parser("sweep", help="time and error over one parameter (CSV + JSON slopes)")
    _add_common(p)
    p.add_argument("--axis", choices=AXES, required=True)
    p.add_argument("--values", type=_parse_values, required=True, help="comma-separated values")
    p.add_argument("--repetitions", type=int, default=5)
    p.add_argument("--no-error", action="store_true", help="skip the baseline comparison")
    p.add_argument("--summary", default=None)
    return parser


def config_from_args(args: argparse.Namespace) -> TraceConfig:
    return TraceConfig(
        N=args.N, kappa=args.kappa, d=args.d, discretization=args.discretization,
        scheme=args.partition, nu=args.nu, variant=args.increments, seed=args.seed,
        algorithm=args.algorithm, b=args.b, n=args.n, L=args.L, eps=args.eps,
    )


@contextmanager
def _open(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _header(fh, meta: dict) -> None:
    for k, v in meta.items():
        fh.write(f"# {k}={_fmt(v)}\n")


def write_trace_csv(fh, cfg: TraceConfig, result) -> None:
    times = make_partition(cfg.N, cfg.scheme, cfg.nu).times
    _header(fh, {"fastsle": __version__, "command": "simulate", **cfg.as_dict()})
    fh.write("k,t_k,re,im\n")
    for k, z in zip(result.indices.tolist(), result.points.tolist()):
        fh.write(f"{k},{_fmt(times[k])},{_fmt(z.real)},{_fmt(z.imag)}\n")


def read_trace_csv(path: str) -> tuple[dict, np.ndarray]:
    """Config echo and rows ``(k, t_k, re, im)`` of a trace CSV."""
    meta = {}
    with open(path) as fh:
        lines = fh.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            k, _, v = line[1:].strip().partition("=")
            meta[k] = v
        elif line and not line.startswith("k,"):
            body.append([float(t) for t in line.split(",")])
    return meta, np.array(body).reshape(-1, 4)


def write_sweep_csv(fh, meta: dict, rows) -> None:
    _header(fh, meta)
    fh.write(",".join(SWEEP_FIELDS) + "\n")
    for r in rows:
        d = r.as_dict()
        fh.write(",".join(_fmt(d[f]) for f in SWEEP_FIELDS) + "\n")


def _slope_or_none(rows, x, y):
    try:
        return loglog_slope(rows, x, y)
    except ValueError:
        return None


def _summary_stream(args):
    if args.summary:
        return open(args.summary, "w")
    return sys.stderr if args.output == "-" else sys.stdout


def cmd_simulate(args, cfg: TraceConfig) -> None:
    cfg = cfg.resolved()
    maps, idx = prepare(cfg)
    result = evaluate(cfg, maps, idx)
    with _open(args.output) as fh:
        write_trace_csv(fh, cfg, result)


def cmd_compare(args, cfg: TraceConfig) -> None:
    cfg = cfg.resolved()
    ref_cfg = replace(cfg, algorithm="baseline")
    maps, idx = prepare(cfg)
    ref = evaluate(ref_cfg, maps, idx)
    res = ref if cfg.algorithm == "baseline" else evaluate(cfg, maps, idx)
    report = {
        "mean_error": error_between(res, ref, "mean"),
        "max_error": error_between(res, ref, "max"),
        "points": len(idx),
        "seed": cfg.seed,
        "backend": BACKEND,
        "config": cfg.as_dict(),
        "reference_config": ref_cfg.as_dict(),
    }
    with _open(args.output) as fh:
        json.dump(_clean(report), fh, indent=2)
        fh.write("\n")


def _clean(obj):
    # JSON has no infinity; write it as the same "inf" the CLI accepts
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_clean(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def cmd_bench(args, cfg: TraceConfig) -> None:
    base = cfg
    rows = {}
    for alg in ("baseline", "fast"):
        rows[alg] = sweep("N", args.values, replace(base, algorithm=alg), args.repetitions, with_error=(alg == "fast"))
    all_rows = rows["baseline"] + rows["fast"]
    meta = {"fastsle": __version__, "command": "bench", "backend": BACKEND, "repetitions": args.repetitions,
            **{k: v for k, v in cfg.as_dict().items() if k not in ("N", "algorithm")}}
    with _open(args.output) as fh:
        write_sweep_csv(fh, meta, all_rows)
    summary = {
        "baseline_slope": _slope_or_none(rows["baseline"], "N", "time_per_point"),
        "fast_slope": _slope_or_none(rows["fast"], "N", "time_per_point"),
        "speedup": {str(a.N): a.time_per_point / f.time_per_point for a, f in zip(rows["baseline"], rows["fast"])},
        "max_error": max(r.error for r in rows["fast"]),
        "backend": BACKEND,
        "config": meta,
    }
    _dump_summary(args, summary)


def cmd_sweep(args, cfg: TraceConfig) -> None:
    rows = sweep(args.axis, args.values, cfg, args.repetitions, with_error=not args.no_error)
    meta = {"fastsle": __version__, "command": "sweep", "axis": args.axis, "backend": BACKEND,
            "repetitions": args.repetitions, **cfg.as_dict()}
    with _open(args.output) as fh:
        write_sweep_csv(fh, meta, rows)
    summary = {"axis": args.axis, "time_slope": _slope_or_none(rows, args.axis, "time_per_point")}
    errs = [r for r in rows if r.error]
    if len(errs) >= 3 and not args.no_error:
        x = np.array([getattr(r, args.axis) for r in errs], dtype=float)
        y = np.log([r.error for r in errs])
        if args.axis == "n":
            summary["log_error_vs_n_slope"] = float(np.polyfit(x, y, 1)[0])
        elif np.all(np.isfinite(x)):
            summary["error_slope"] = loglog_slope(errs, args.axis, "error")
    summary["config"] = meta
    _dump_summary(args, summary)


def _dump_summary(args, summary) -> None:
    fh = _summary_stream(args)
    try:
        json.dump(_clean(summary), fh, indent=2)
        fh.write("\n")
    finally:
        if args.summary:
            fh.close()


COMMANDS = {"simulate": cmd_simulate, "compare": cmd_compare, "bench": cmd_bench, "sweep": cmd_sweep}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        if getattr(args, "repetitions", 1) < 1:
            raise ValueError("repetitions must be >= 1")
    except ValueError as exc:
        parser.error(str(exc))
    try:
        COMMANDS[args.command](args, cfg)
    except (ArithmeticError, ValueError, OSError) as exc:
        print(f"fastsle: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``pdda generate|estimate|sweep|recurrence``.

Every subcommand accepts ``--config FILE``, an INI file whose ``[pdda]``
section (or a section named after the subcommand) supplies defaults using the
long flag names with dashes turned into underscores. Explicit flags win.

Exit codes: 0 success, 2 parameter error, 3 data error, 4 estimation error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import __version__
from .arfima import ArfimaSpec, TimeSeries, generate
from .errors import DataError, EstimationError, ParameterError, PDDAError
from .estimators import estimate
from .montecarlo import SweepConfig, run_sweep, split_seed
from .recurrence import (
    DEFAULT_EPSILON,
    DEFAULT_TAU_FIT,
    decay_report,
    normalized_path,
    recurrence_probability,
)

log = logging.getLogger("pdda")


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _range(text: str):
    try:
        lo, hi = str(text).split(":")
        return (int(lo), int(hi))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi integers, got {text!r}") from None


def _add_shared(p: argparse.ArgumentParser, generation: bool = True) -> None:
    p.add_argument("--config", type=Path, help="INI file with default flag values")
    p.add_argument("--out", type=Path, help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), help="output format")
    p.add_argument("--threads", type=int, default=1, help="worker threads, 0 = one per CPU")
    if generation:
        p.add_argument("--hurst", type=_floats, help="Hurst exponent(s) h[,h2,...], one per coordinate")
        p.add_argument("--n", type=int, help="number of samples N")
        p.add_argument("--rho", type=float, default=0.0, help="pairwise innovation correlation")
        p.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
        p.add_argument("--truncation", type=int, help="MA truncation K (default max(N, 2048))")
        p.add_argument("--burn-in", type=int, default=0, help="extra discarded samples B")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pdda", description="Pairwise distance-diffusion Hurst analysis")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="simulate an ARFIMA(0,d,0) series")
    _add_shared(g)

    e = sub.add_parser("estimate", help="R/S- and MSD-PDDA estimates for one series")
    _add_shared(e)
    e.add_argument("--input", type=Path, help="series CSV (t,x1,...,xm); otherwise one is generated")
    e.add_argument("--rs-window", type=_range, help="R/S fit range lo:hi in window sizes")
    e.add_argument("--msd-window", type=_range, help="MSD fit range lo:hi in lags")
    e.add_argument("--local-slope", action="store_true", help="include the local H(tau) curve")
    e.add_argument("--smoothing", type=int, default=5, help="local-slope moving-average width")

    s = sub.add_parser("sweep", help="Monte Carlo bias/SD/RMSE over a Hurst grid")
    _add_shared(s)
    s.add_argument("--h-grid", type=_floats, help="grid of H values (one sweep point each)")
    s.add_argument("--h-fixed", type=_floats,
                   help="extra fixed exponent(s) appended to every grid value (anisotropic sweep)")
    s.add_argument("--m", type=int, default=1, help="coordinates for isotropic points")
    s.add_argument("--replicates", type=int, default=50)
    s.add_argument("--rs-window", type=_range)
    s.add_argument("--msd-window", type=_range)
    s.add_argument("--per-replicate", type=Path, help="also write replicate-level estimates here")

    r = sub.add_parser("recurrence", help="recurrence probability decay vs range dimension")
    _add_shared(r)
    r.add_argument("--input", type=Path, help="series CSV; otherwise generated")
    r.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    r.add_argument("--tau-fit", type=_range, default=DEFAULT_TAU_FIT)
    r.add_argument("--lags", type=_range, default=(1, 100), help="lag span lo:hi of the curve")
    r.add_argument("--replicates", type=int, default=1, help="independent series to average over")
    r.add_argument("--h-max", type=float, help="reference H for the prediction (default max of --hurst)")
    r.add_argument("--report", type=Path, help="report JSON path (default: <out>.report.json)")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: List[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if getattr(args, "config", None) is None:
        return args
    cp = configparser.ConfigParser()
    if not cp.read(args.config):
        raise ParameterError(f"cannot read config file {args.config}")
    values = {}
    for section in ("pdda", args.command):
        if cp.has_section(section):
            values.update(cp.items(section))

    sub = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in values.items():
        dest = key.replace("-", "_")
        if dest not in actions:
            raise ParameterError(f"unknown key {key!r} in {args.config}")
        action = actions[dest]
        if isinstance(action, argparse._StoreTrueAction):
            defaults[dest] = raw.strip().lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            defaults[dest] = action.type(raw)
        else:
            defaults[dest] = raw
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _spec_from_args(args, seed: Optional[int] = None) -> ArfimaSpec:
    if args.hurst is None or args.n is None:
        raise ParameterError("--hurst and --n are required to generate a series")
    return ArfimaSpec(
        hurst_exponents=tuple(args.hurst),
        length=args.n,
        rho=args.rho,
        truncation=args.truncation,
        burn_in=args.burn_in,
        seed=args.seed if seed is None else seed,
    )


def _read_series(path: Path) -> TimeSeries:
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    return TimeSeries.from_csv(text)


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _sidecar(config: dict, out: Optional[Path], suffix: str = ".config.json") -> None:
    text = json.dumps(config, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stderr.write(text)
    else:
        out.with_name(out.name + suffix).write_text(text)


def cmd_generate(args) -> int:
    spec = _spec_from_args(args)
    ts = generate(spec)
    if (args.format or "csv") == "csv":
        _emit(ts.to_csv(), args.out)
    else:
        _emit(json.dumps({"spec": spec.to_dict(), "values": ts.values.tolist()}, indent=2) + "\n", args.out)
    _sidecar({"command": "generate", "spec": spec.to_dict()}, args.out)
    return 0


def cmd_estimate(args) -> int:
    if args.input is not None:
        ts = _read_series(args.input)
        source = {"input": str(args.input)}
    else:
        spec = _spec_from_args(args)
        ts = generate(spec)
        source = {"spec": spec.to_dict()}
    report = estimate(
        ts,
        rs_range=args.rs_window,
        msd_range=args.msd_window,
        local=args.local_slope,
        smoothing_window=args.smoothing,
    )
    config = dict(
        source,
        command="estimate",
        rs_window=list(report.fit_rs.fit_range),
        msd_window=list(report.fit_msd.fit_range),
        local_slope=bool(args.local_slope),
        smoothing=args.smoothing,
    )
    if (args.format or "json") == "json":
        _emit(report.to_json(), args.out)
    else:
        _emit(f"h_rs,h_msd\n{report.h_rs!r},{report.h_msd!r}\n", args.out)
    _sidecar(config, args.out)
    return 0


def cmd_sweep(args) -> int:
    if args.h_grid is None or args.n is None:
        raise ParameterError("--h-grid and --n are required for a sweep")
    if args.h_fixed:
        points = tuple((h, *args.h_fixed) for h in args.h_grid)
    else:
        points = tuple(args.h_grid)
    cfg = SweepConfig(
        h_values=points,
        n_samples=args.n,
        replicates=args.replicates,
        rho=args.rho,
        m=args.m,
        master_seed=args.seed,
        rs_range=args.rs_window,
        msd_range=args.msd_window,
        truncation=args.truncation,
        burn_in=args.burn_in,
    )
    result = run_sweep(cfg, threads=args.threads)
    _emit(result.to_csv() if (args.format or "csv") == "csv" else result.to_json(), args.out)
    if args.per_replicate is not None:
        args.per_replicate.write_text(result.replicates_csv())
    _sidecar(
        {
            "command": "sweep",
            "h_values": [list(cfg.hurst_at(i)) for i in range(len(points))],
            "n": cfg.n_samples,
            "replicates": cfg.replicates,
            "rho": cfg.rho,
            "master_seed": cfg.master_seed,
            "rs_window": None if cfg.rs_range is None else list(cfg.rs_range),
            "msd_window": None if cfg.msd_range is None else list(cfg.msd_range),
            "truncation": cfg.truncation,
            "burn_in": cfg.burn_in,
        },
        args.out,
    )
    if result.failures:
        raise EstimationError(f"{result.failures} replicate(s) failed; see the per-replicate output")
    return 0


def cmd_recurrence(args) -> int:
    if args.replicates < 1:
        raise ParameterError("--replicates must be >= 1")
    if not args.epsilon > 0:
        raise ParameterError(f"--epsilon must be positive, got {args.epsilon}")
    if args.input is not None:
        series = [_read_series(args.input)]
        h_max = args.h_max
        if h_max is None:
            raise ParameterError("--h-max is required with --input")
        source = {"input": str(args.input)}
    else:
        seeds = [args.seed] if args.replicates == 1 else [split_seed(args.seed, 0, r) for r in range(args.replicates)]
        specs = [_spec_from_args(args, seed=s) for s in seeds]
        series = [generate(s) for s in specs]
        h_max = specs[0].h_max if args.h_max is None else args.h_max
        source = {"spec": specs[0].to_dict(), "seeds": seeds}
    m = series[0].m
    lags = np.arange(args.lags[0], args.lags[1] + 1)

    curves = [recurrence_probability(normalized_path(ts), args.epsilon, lags) for ts in series]
    reports = [decay_report(c, h_max, m, args.tau_fit) for c in curves]
    pooled_rec = sum(c.recurrent for c in curves)
    pooled_tot = sum(c.total for c in curves)
    pooled = type(curves[0])(args.epsilon, curves[0].lags, pooled_rec / pooled_tot, pooled_rec, pooled_tot)

    # fitted_decay is the replicate mean; "fit" is the regression on pooled counts.
    summary = reports[0].to_dict()
    summary["fitted_decay"] = float(np.mean([r.fitted_decay for r in reports]))
    summary["replicate_decays"] = [r.fitted_decay for r in reports]
    summary["fit"] = decay_report(pooled, h_max, m, args.tau_fit).fit.to_dict()
    report_text = json.dumps(summary, indent=2) + "\n"

    if (args.format or "csv") == "csv":
        _emit(pooled.to_csv(), args.out)
        report_path = args.report or (None if args.out is None else args.out.with_name(args.out.name + ".report.json"))
        if report_path is None:
            sys.stdout.write(report_text)
        else:
            report_path.write_text(report_text)
    else:
        _emit(report_text, args.out)
    _sidecar(
        dict(source, command="recurrence", epsilon=args.epsilon, tau_fit=list(args.tau_fit),
             lags=list(args.lags), replicates=args.replicates, h_max=h_max),
        args.out,
    )
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "estimate": cmd_estimate,
    "sweep": cmd_sweep,
    "recurrence": cmd_recurrence,
}


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return COMMANDS[args.command](args)
    except PDDAError as exc:
        print(f"pdda: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except argparse.ArgumentTypeError as exc:
        print(f"pdda: ParameterError: {exc}", file=sys.stderr)
        return ParameterError.exit_code


if __name__ == "__main__":
    sys.exit(main())

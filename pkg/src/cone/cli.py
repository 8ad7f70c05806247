"""Command-line entry point: ``cone {eval,sweep-w,simulate,ingest-check}``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import fields
from pathlib import Path

from .baselines import BaselineUnavailableError
from .harness import (
    ExperimentConfig,
    TraceFormatError,
    _parse_value,
    build_trace,
    ingest_trace,
    read_config_file,
    run_eval,
    sweep_w,
    write_trace,
)

_CONFIG_FLAGS = {
    "w": ("--w", int, "window size (number of recent fixes)"),
    "alpha_list": ("--alpha", str, "comma-separated confidence levels"),
    "gp_factor": ("--gp-factor", float, "GP-Tailored radius factor"),
    "k": ("--k", int, "top-k grid candidates reported by the localizer"),
    "seed": ("--seed", int, "RNG seed"),
    "trace": ("--trace", str, "trace CSV to evaluate instead of simulating"),
    "methods": ("--methods", str, "comma-separated subset of cone,gp"),
    "n_fixes": ("--n-fixes", int, "number of simulated fixes"),
    "samples_per_point": ("--samples-per-point", int, "scans per simulated test point"),
    "trajectory": ("--trajectory", str, "grid (stationary test points) or walk"),
    "walk_speed": ("--walk-speed", float, "walking speed in m/s for --trajectory walk"),
    "tx_power": ("--tx-power", float, "RSS at 1 m, dBm"),
    "path_loss_exp": ("--path-loss-exp", float, "log-distance path-loss exponent"),
    "noise_sd": ("--noise-sd", float, "RSS shadowing noise, dB"),
}


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file (flags override it)")
    for name, (flag, typ, help_) in _CONFIG_FLAGS.items():
        p.add_argument(flag, dest=name, type=typ, default=None, help=help_)
    p.add_argument("--include-priming", dest="include_priming", action="store_const",
                   const=True, default=None, help="also score fixes before the window fills")


def _config_from_args(args) -> ExperimentConfig:
    values = read_config_file(args.config) if args.config else {}
    defaults = ExperimentConfig()
    for f in fields(ExperimentConfig):
        v = getattr(args, f.name, None)
        if v is None:
            continue
        if f.name in ("alpha_list", "methods"):
            v = _parse_value(f.name, v, getattr(defaults, f.name))
        values[f.name] = v
    return ExperimentConfig(**values)


def _provenance(config: ExperimentConfig, **paths) -> None:
    print(f"seed: {config.seed}", file=sys.stderr)
    if config.trace:
        print(f"trace: {Path(config.trace).resolve()}", file=sys.stderr)
    for k, v in paths.items():
        print(f"{k}: {Path(v).resolve()}", file=sys.stderr)


def _cmd_eval(args) -> int:
    cfg = _config_from_args(args)
    _provenance(cfg, out_dir=args.out_dir)
    summaries = run_eval(cfg, args.out_dir)
    for (method, alpha), s in summaries.items():
        tag = method if alpha is None else f"{method} a={alpha}"
        print(f"{tag:16s} n={s.count:6d} median_aed={s.median_aed:.3f} "
              f"inside={s.inside_fraction:.3f}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _config_from_args(args)
    out = Path(args.out_dir) / "sweep_w.csv"
    _provenance(cfg, output=out)
    ws = [int(v) for v in args.w_values.split(",") if v.strip()]
    for w, alpha, med, inside in sweep_w(cfg, ws, out):
        print(f"w={w:3d} a={alpha} median_aed={med:.3f} inside={inside:.3f}")
    return 0


def _cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    _provenance(cfg, output=args.out)
    trace = build_trace(cfg)
    write_trace(trace, args.out)
    print(f"wrote {len(trace)} fixes")
    return 0


def _cmd_ingest_check(args) -> int:
    print(f"trace: {Path(args.path).resolve()}", file=sys.stderr)
    trace = ingest_trace(args.path)
    k = 0 if trace.candidates is None else trace.candidates.shape[1]
    print(f"ok: {len(trace)} fixes, {k} candidate columns")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cone", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="score CONE and GP-Tailored on one trace")
    _add_config_args(p)
    p.add_argument("--out-dir", default="results")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("sweep-w", help="CONE metrics as a function of window size")
    _add_config_args(p)
    p.add_argument("--w-values", default="2,4,8,16,32")
    p.add_argument("--out-dir", default="results")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("simulate", help="write a synthetic testbed trace as CSV")
    _add_config_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("ingest-check", help="validate a trace CSV")
    p.add_argument("path")
    p.set_defaults(func=_cmd_ingest_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (TraceFormatError, BaselineUnavailableError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

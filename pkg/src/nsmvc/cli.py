"""Command-line entry point: ``run``, ``sweep`` and ``synth`` subcommands."""

from __future__ import annotations

import argparse
import logging
import sys

from .experiment import (
    METHODS,
    METRICS,
    ConfigError,
    ExperimentConfig,
    ExperimentError,
    export_synth,
    run_experiment,
    sweep,
    sweep_rows,
)


def _float_list(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _int_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _flatten(values):
    return [x for chunk in values for x in chunk]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nsmvc", description="Multi-view clustering experiments.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def experiment_flags(p):
        p.add_argument("--config", required=True, help="experiment config (JSON)")
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--trace", action="store_true", default=None)
        p.add_argument("--method", choices=METHODS)

    experiment_flags(sub.add_parser("run", help="repeated trials of one configuration"))
    p = sub.add_parser("sweep", help="grid over the pace start point and round count")
    experiment_flags(p)
    p.add_argument("--alpha", type=_float_list, nargs="+", required=True, help="e.g. 0.3,0.4,0.5")
    p.add_argument("--T", type=_int_list, nargs="+", required=True, help="e.g. 3,4,5")

    p = sub.add_parser("synth", help="write a synthetic dataset as manifest + CSVs")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    return parser


def _config(args) -> ExperimentConfig:
    config = ExperimentConfig.load(args.config)
    overrides = {
        key: getattr(args, key)
        for key in ("trials", "seed", "out", "trace", "method")
        if getattr(args, key) is not None
    }
    return config.replace(**overrides) if overrides else config


def _print_summary(report):
    for variant, per in report.summary().items():
        parts = "  ".join(f"{m}={per[m].mean:.4f}+-{per[m].std:.4f}" for m in METRICS)
        print(f"{variant:>8}  {parts}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        if args.command == "synth":
            print(export_synth(args.spec, args.out))
        elif args.command == "run":
            _print_summary(run_experiment(_config(args)))
        else:
            cells = sweep(_config(args), _flatten(args.alpha), _flatten(args.T))
            for row in sweep_rows(cells):
                print("  ".join(f"{k}={v:.4f}" if isinstance(v, float) else f"{k}={v}" for k, v in row.items()))
    except (ConfigError, ExperimentError, OSError, ValueError) as exc:
        print(f"nsmvc: error: {exc}", file=sys.stderr)
        return 2
    return 0

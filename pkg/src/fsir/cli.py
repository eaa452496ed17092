"""Command-line entry point for the experiment runners.

Each subcommand is one experiment; parameters come from the preset for that
experiment, overridden first by ``--config`` (a JSON object of config keys)
and then by explicit flags. Exit codes: 0 success, 2 configuration error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields

from .errors import ConfigError, SchemaError
from .harness import EXPERIMENTS, ExperimentConfig, default_config, emit, run_experiment

_LIST_FIELDS = {
    "models": str,
    "n_values": int,
    "m_values": int,
    "rho_values": float,
    "d_values": int,
    "H_values": int,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fsir",
        description="Run functional sliced-inverse-regression experiments.",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="JSON file of config overrides")
        p.add_argument("--seed", type=int, help="base seed")
        p.add_argument("--reps", type=int, help="replications per grid cell")
        p.add_argument("--out", help="output file (default <experiment>.<format>)")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument("--threads", type=int, help="worker processes")
        p.add_argument("--grid-size", type=int, help="discretization size G")
        p.add_argument("--data", help="path to the bike-sharing hourly CSV")
    return parser


def _load_overrides(path: str) -> dict:
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ConfigError("config file must contain a JSON object")
    known = {f.name for f in fields(ExperimentConfig)}
    overrides = {}
    for key, value in raw.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        if key in _LIST_FIELDS:
            if not isinstance(value, list):
                raise ConfigError(f"config key {key!r} must be a list")
            value = tuple(_LIST_FIELDS[key](v) for v in value)
        overrides[key] = value
    return overrides


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        overrides = _load_overrides(args.config) if args.config else {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.reps is not None:
            overrides["replications"] = args.reps
        if args.format is not None:
            overrides["out_format"] = args.format
        if args.threads is not None:
            overrides["threads"] = args.threads
        if args.grid_size is not None:
            overrides["grid_size"] = args.grid_size
        if args.data is not None:
            overrides["data_path"] = args.data
        if args.out is not None:
            overrides["out_path"] = args.out
        overrides.pop("experiment", None)
        cfg = default_config(args.experiment, **overrides)
        result = run_experiment(cfg)
        out_path = cfg.out_path or f"{args.experiment}.{cfg.out_format}"
        emit(result, cfg.out_format, out_path)
    except (ConfigError, TypeError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (OSError, SchemaError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point for running experiment sweeps."""

import argparse
import os
import sys

from .config import DEFAULTS, EXPERIMENT_KINDS, load_config, parse_config
from .errors import AgingMimoError, ConfigError
from .runner import run_experiment


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agingmimo",
        description="Spectral-efficiency sweeps for multiuser MIMO uplinks "
                    "over aging channels.")
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in EXPERIMENT_KINDS:
        run = sub.add_parser(kind, help=f"run the {kind} experiment")
        run.add_argument("--config", help="JSON config file; defaults apply "
                                          "for missing keys")
        run.add_argument("--out", default=".", help="output directory "
                                                    "(default: current directory)")
        run.add_argument("--seed", type=int, help="override the RNG seed")
        run.add_argument("--threads", type=int, default=None,
                         help="worker threads (default: 1, or AGINGMIMO_THREADS)")
        run.add_argument("--format", choices=("csv", "json"), default="csv",
                         help="output format (default: csv)")
    sub.add_parser("list", help="list available experiment kinds")
    return parser


def _resolve_threads(arg_value) -> int:
    if arg_value is not None:
        return max(1, arg_value)
    env = os.environ.get("AGINGMIMO_THREADS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        raise ConfigError(f"AGINGMIMO_THREADS must be an integer, got {env!r}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for kind in EXPERIMENT_KINDS:
            print(kind)
        return 0
    try:
        if args.config:
            cfg = load_config(args.config)
            raw = cfg.as_dict()
            # as_dict uses the internal list form for n_r; parse_config
            # accepts it unchanged
        else:
            raw = dict(DEFAULTS)
        raw["experiment"] = args.command
        if args.seed is not None:
            raw["seed"] = args.seed
        cfg = parse_config(raw)
        threads = _resolve_threads(args.threads)
    except ConfigError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 2
    try:
        records, data_path, manifest_path = run_experiment(
            cfg, args.out, threads=threads, fmt=args.format)
    except AgingMimoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    failed = sum(1 for r in records if r.error is not None)
    print(f"{cfg.experiment}: wrote {len(records)} rows "
          f"({failed} failed) to {data_path}")
    print(f"manifest: {manifest_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

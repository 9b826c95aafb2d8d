"""Command line front end.

Subcommands
-----------
validate
    Load a config, build the network and run the full weight matrix
    check; prints a one line summary.
bounds
    Print the closed form certificate constants and write them to
    ``bounds.txt`` in the output directory.
run
    Simulate the asynchronous Newton protocol; writes the trace CSV, an
    aggregate CSV when more than one trial is requested, and an SVG
    convergence plot.
compare
    Run Newton and the gossip baseline on the same problem and plot the
    two error curves together.
accept
    Run the acceptance suite against this installation; exits nonzero
    if any criterion fails.

The run seed is resolved in precedence order: ``--seed`` flag, then the
``NN_SEED`` environment variable, then the config file.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .acceptance import run_acceptance
from .config import apply_overrides, bundled_config_path, load_config
from .errors import ConfigParse, NetNewtonError
from .harness import cli_bounds, cli_compare, cli_run, cli_validate


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64 bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netnewton",
        description="Asynchronous Newton methods for penalized consensus "
                    "optimization: simulator, certificates and acceptance "
                    "checks.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for name, text in (
        ("validate", "check a network config and its weight matrix"),
        ("bounds", "print the closed form rate certificates"),
        ("run", "simulate the asynchronous Newton protocol"),
        ("compare", "run Newton and gossip on the same problem"),
        ("accept", "run the acceptance suite"),
    ):
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("--config", metavar="PATH", type=Path, default=None,
                         help="TOML problem description "
                              "(default: bundled complete5.toml)")
        cmd.add_argument("--seed", metavar="U64", type=_u64, default=None,
                         help="run seed; beats NN_SEED and the config value")
        cmd.add_argument("--trials", metavar="N", type=int, default=None,
                         help="independent trials for the run subcommand")
        cmd.add_argument("--iters", metavar="N", type=int, default=None,
                         help="iteration count override")
        cmd.add_argument("--out", metavar="DIR", type=Path, default=None,
                         help="output directory override")
        cmd.add_argument("--stride", metavar="N", type=int, default=None,
                         help="record every N-th iteration")
    return parser


def resolve_seed(flag_seed: int | None, env=os.environ) -> int | None:
    """Apply the seed precedence: flag, then NN_SEED, then None."""
    if flag_seed is not None:
        return flag_seed
    raw = env.get("NN_SEED")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ConfigParse(f"NN_SEED must be an integer, got {raw!r}") from None
    if not 0 <= value < 2 ** 64:
        raise ConfigParse(f"NN_SEED must be an unsigned 64 bit integer, got {raw}")
    return value


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        seed = resolve_seed(args.seed)
        config_path = args.config if args.config is not None else bundled_config_path()
        cfg = load_config(config_path)
        cfg = apply_overrides(
            cfg, mode=args.mode, seed=seed, trials=args.trials,
            iterations=args.iters, stride=args.stride,
            out=None if args.out is None else str(args.out),
        )
        if args.mode == "validate":
            cli_validate(cfg)
        elif args.mode == "bounds":
            cli_bounds(cfg)
        elif args.mode == "run":
            cli_run(cfg)
        elif args.mode == "compare":
            cli_compare(cfg)
        else:
            report = run_acceptance(cfg)
            return 0 if report.all_passed else 1
    except NetNewtonError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

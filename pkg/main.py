"""Command-line entry point: ``python main.py <solve|verify|logsob|sweep> --config PATH``."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from configs import env_config
from configs.constants import EXIT_CONFIG
from helpers.cli_reporting import run_command
from utils.run_config import COMMANDS, ConfigError, load_run_config


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    p = argparse.ArgumentParser(
        description="Radial biharmonic ground states and the biharmonic log-Sobolev constant."
    )
    p.add_argument("command", choices=COMMANDS, help="What to run.")
    p.add_argument("--config", required=True, help="Path to a key = value run configuration.")
    p.add_argument("--out", default=None, help="Output directory (overrides output.dir).")
    p.add_argument("--seed", type=int, default=None, help="Seed for random test fields (overrides seed).")
    p.add_argument("--profile", default=None, help="Profile CSV for verify (overrides verify.profile).")
    return p.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, env_config.LOG_LEVEL, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    overrides = {
        "command": args.command,
        "output.dir": args.out,
        "seed": args.seed,
        "verify.profile": args.profile,
    }
    try:
        cfg = load_run_config(args.config, overrides=overrides)
    except ConfigError as exc:
        print(f"❌ Invalid input: {exc}")
        return EXIT_CONFIG
    return run_command(cfg)


if __name__ == "__main__":
    sys.exit(main())

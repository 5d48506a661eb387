#!/usr/bin/env python3
"""
shiftk - shift-K approximation by diagonal linear recurrences
Run with: python main.py {loss,window,train,verify} [--config PATH] [--out PATH]
"""
import argparse
import logging
import os
import sys

import config
import commands  # noqa: F401  (registers the subcommands)
from core.commands import COMMANDS, execute_command, get_command_list


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=config.APP_NAME,
        description="Shift-K filters, their losses and bounds, and the copy-task experiments",
        epilog=f"commands:\n{get_command_list()}",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--log-level", default=config.LOG_LEVEL, help="Logging level (default from SHIFTK_LOG_LEVEL)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name, command in COMMANDS.items():
        sub = subparsers.add_parser(name, help=command.description, description=command.description)
        sub.add_argument("--config", help="JSON run config (see configs/)")
        sub.add_argument("--out", help="Output path, overriding the config")
        sub.add_argument("--seed", type=int, help="Seed overriding the config")
        sub.add_argument("--threads", type=int, default=config.THREADS,
                         help="Worker threads for sweeps (default from SHIFTK_THREADS)")
        sub.add_argument("--full", action="store_true", help="Full experiment scale instead of desk scale")
        command.add_arguments(sub)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s: %(message)s")
    return execute_command(args.command, args)


if __name__ == "__main__":
    # Force unbuffered output for real-time logging
    os.environ['PYTHONUNBUFFERED'] = '1'
    sys.stdout.reconfigure(line_buffering=True)
    sys.stderr.reconfigure(line_buffering=True)
    sys.exit(main())

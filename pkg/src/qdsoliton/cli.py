"""Command-line front end.

    qdsoliton <command> [--config PATH] [--output PATH] [--format csv|json] [--jobs N]

Exit codes: 0 success, 1 invalid configuration, 2 I/O failure, 3 results
written but at least one row was flagged.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .config import COMMANDS, parse_config
from .errors import ConfigError
from .runner import run

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_FLAGGED = 0, 1, 2, 3

log = logging.getLogger("qdsoliton")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdsoliton", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--output", help="result file (overrides the config)")
        p.add_argument("--format", choices=("csv", "json"), help="result format (overrides the config)")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for sweep rows")
        p.add_argument("--seed", help="ignored; every computation is deterministic")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        text = ""
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        config = parse_config(text, args.command)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.jobs < 1:
        print("config error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG

    try:
        manifest = run(config, jobs=args.jobs, output=args.output, fmt=args.format)
    except OSError as exc:
        print(f"cannot write results: {exc}", file=sys.stderr)
        return EXIT_IO
    log.info("wrote %d rows to %s (%d flagged)", manifest.row_count, manifest.result_path,
             manifest.flagged_rows)
    return EXIT_FLAGGED if manifest.flagged_rows else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

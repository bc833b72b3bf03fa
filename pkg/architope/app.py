"""
Command-line entry point.

    python -m architope.app <partition|upgrade|gap-demo|diagnose|metrics> CONFIG [--out DIR] [--seed N]

Exit codes: 0 success, 2 invalid input or config, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from architope.cli import COMMANDS, prepare
from architope.services.config import LOG_LEVEL
from architope.services.errors import NumericalError, ValidationError

logger = logging.getLogger("architope")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="architope", description="Architope upgrade experiments.")
    subcommands = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub = subcommands.add_parser(name)
        sub.add_argument("config", type=Path, help="Experiment config (JSON).")
        sub.add_argument("--out", default=None, help="Output directory; overrides output_dir.")
        sub.add_argument("--seed", type=int, default=None, help="Global seed; overrides seed.")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=LOG_LEVEL, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        experiment = prepare(args.config, out=args.out, seed=args.seed)
        COMMANDS[args.command](experiment)
    except ValidationError as exc:
        logger.error("%s", exc)
        return EXIT_VALIDATION
    except NumericalError as exc:
        logger.error("%s", exc)
        return EXIT_NUMERICAL
    logger.info("%s finished; reports in %s", args.command, experiment.output_dir)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

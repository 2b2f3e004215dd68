"""
CSM-H-R Workbench - Command-Line Entry Point

Generates the IntellElevator and IntellRestaurant workloads, builds context
state machines from them, answers next-state queries and reports build
timings and model compression.

Architecture:
   1. Configuration Setup (config/)
   2. Domain model and index mapping (core/)
   3. Ingestion (ingestion/)
   4. State machines and prediction (engine/)
   5. Relationship and hierarchy management (management/)
   6. Broker and privacy channels (broker/, privacy/)
   7. Persistence and reports (storage/, reports/)
   8. Subcommands (commands/)

Flow:
   main() -> parse args -> setup logging -> route to subcommand -> exit code

Exit codes:
   0 success, 1 engine error (CSMError), 2 usage error
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

# --------------------------------------------------------------------
# Add src directory to Python path when run from a checkout
# --------------------------------------------------------------------
current_dir = Path(__file__).parent
if str(current_dir) not in sys.path:
    sys.path.insert(0, str(current_dir))

from src import __version__
from src.commands import COMMANDS
from src.config import logs_dir, setup_logging
from src.core.errors import CSMError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csmhr", description="Context state machine workbench")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("--log-file", help="also log to this file")
    parser.add_argument("--log", action="store_true", help="also log to <output dir>/logs/csmhr.log")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for command in COMMANDS:
        command.add_parser(subparsers).set_defaults(handler=command.run)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and run one subcommand.

    Library errors (CSMError) are logged and turned into exit code 1;
    argparse exits with 2 on bad flags.
    """
    args = build_parser().parse_args(argv)
    log_file = Path(args.log_file) if args.log_file else (logs_dir() / "csmhr.log" if args.log else None)
    logger = setup_logging(logging.DEBUG if args.verbose else logging.INFO, log_file)
    logger.debug(f"Running command: {args.command}")
    try:
        return args.handler(args)
    except CSMError as e:
        logger.error(f"{args.command} failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())

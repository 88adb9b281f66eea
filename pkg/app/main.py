"""
MUBTRIO - complex Hadamard matrices and MUB trios in dimension six
Main command-line application

Exit codes: 0 success, 2 not excluded, 3 validation failure, 4 usage error.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from app.context import CliArgumentParser, RunContext, UsageError
from config import settings
from models.errors import ChmError, UnknownFamily
from models.responses import RunRecord
from persistence import RunLog
from routes import census, dephase, exclude, gen, scan, search, verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NOT_EXCLUDED = 2
EXIT_VALIDATION = 3
EXIT_USAGE = 4

SUBCOMMANDS = (gen, census, exclude, dephase, verify, search, scan)


def build_parser() -> CliArgumentParser:
    parser = CliArgumentParser(
        prog="mubtrio",
        description="Complex Hadamard matrices and MUB trios in dimension six",
    )
    parser.add_argument("--seed", type=int, default=0, help="master seed for all randomness")
    parser.add_argument("--run-log", type=Path, default=None,
                        help="run log path (overrides CHM_RUN_LOG)")
    parser.add_argument("--verbose", "-v", action="store_true")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in SUBCOMMANDS:
        module.register(subparsers)
    # also accepted after the subcommand, where it wins over the global flag
    for sub in subparsers.choices.values():
        sub.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                         help="master seed for all randomness")
    return parser


def _echo(args) -> Dict[str, Any]:
    """Parameter echo for the run record."""
    out = {}
    for key, value in sorted(vars(args).items()):
        if key == "handler":
            continue
        out[key] = str(value) if isinstance(value, Path) else value
    return out


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else settings.log_level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv, dispatch one subcommand and append its run record."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return int(e.code or 0)

    _configure_logging(args.verbose)
    ctx = RunContext(seed=args.seed)

    try:
        code, summary = args.handler(args, ctx)
    except (UsageError, UnknownFamily, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        code, summary = EXIT_USAGE, {"error": type(e).__name__, "message": str(e)}
    except ChmError as e:
        print(f"validation failed: {e}", file=sys.stderr)
        code, summary = EXIT_VALIDATION, {"error": type(e).__name__, "message": str(e)}

    record = RunRecord(
        subcommand=args.command,
        params=_echo(args),
        version=settings.version,
        inputs=ctx.inputs,
        outputs=ctx.outputs,
        exit_code=code,
        summary=summary,
    )
    RunLog(args.run_log).append(record)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

"""Command-line front end: argument parsing, dispatch and exit codes.

Exit codes: 0 success, 1 computation error, 2 usage error. Errors are printed
to stderr as ``ErrorName: message``.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from typing import Final, NoReturn, Sequence

from humanfriendly import format_timespan

from trace_map_toolkit.cli.output import write_result
from trace_map_toolkit.core.commands import CommandManager, get_command_manager
from trace_map_toolkit.core.errors import BadFlagValue, TraceMapError, UnknownSubcommand, UsageError
from trace_map_toolkit.core.settings import Settings

__all__: Final = ["main", "build_parser", "EXIT_OK", "EXIT_FAILURE", "EXIT_USAGE"]

_LOGGER = logging.getLogger(__name__)

EXIT_OK: Final = 0
EXIT_FAILURE: Final = 1
EXIT_USAGE: Final = 2
_PROG: Final = "tmt"


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting on bad input."""

    def error(self, message: str) -> NoReturn:
        raise BadFlagValue(f"{self.prog}: {message}")


def build_parser(manager: CommandManager) -> argparse.ArgumentParser:
    parser = _Parser(prog=_PROG, description="Trace maps of two-letter substitution rules")
    parser.add_argument("--log-level", default=None, help="override the configured log level")

    common = _Parser(add_help=False)
    common.add_argument("-o", "--output", default=None, help="write here instead of stdout")

    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    for name, meta in manager.metadata().items():
        cmd_parser = sub.add_parser(
            name,
            help=meta.description,
            description=f"{meta.description} (output: {meta.output_format})",
            parents=[common],
            allow_abbrev=False,
        )
        manager.get(name).add_arguments(cmd_parser)
    return parser


def _fail(exc: TraceMapError, code: int) -> int:
    print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
    return code


def _first_positional(argv: Sequence[str]) -> str | None:
    skip = False
    for token in argv:
        if skip:
            skip = False
            continue
        if token == "--log-level":
            skip = True
            continue
        if not token.startswith("-"):
            return token
    return None


def main(argv: Sequence[str] | None = None, settings: Settings | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    settings = settings or Settings.load()
    manager = get_command_manager()

    try:
        name = _first_positional(argv)
        if name is not None and name not in manager.names:
            raise UnknownSubcommand(
                f"unknown subcommand {name!r}; choose from {', '.join(manager.names)}"
            )
        parser = build_parser(manager)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        if args.command is None:
            raise UnknownSubcommand(f"no subcommand given; choose from {', '.join(manager.names)}")
        if args.log_level:
            level = logging.getLevelName(args.log_level.upper())
            if not isinstance(level, int):
                raise BadFlagValue(f"--log-level: unknown level {args.log_level!r}")
            logging.getLogger().setLevel(level)
    except UsageError as exc:
        return _fail(exc, EXIT_USAGE)

    command = manager.get(args.command)
    started = time.perf_counter()
    try:
        result = command.run(args, settings)
        write_result(result, args.output)
    except UsageError as exc:
        return _fail(exc, EXIT_USAGE)
    except TraceMapError as exc:
        _LOGGER.debug("%s failed", command.name, exc_info=True)
        return _fail(exc, EXIT_FAILURE)
    except Exception:
        _LOGGER.exception("unexpected error in %s", command.name)
        raise
    _LOGGER.info("%s done in %s", command.name, format_timespan(time.perf_counter() - started))
    return EXIT_OK

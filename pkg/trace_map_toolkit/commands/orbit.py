"""``orbit``: iterate the trace map of any rule from a starting point."""
from __future__ import annotations

import argparse
from fractions import Fraction

from typing_extensions import override

from trace_map_toolkit.commands import non_negative_int, rule
from trace_map_toolkit.core.commands import BaseCommand, CommandResult
from trace_map_toolkit.core.errors import BadFlagValue
from trace_map_toolkit.core.fibfamily import family_params, known_invariants
from trace_map_toolkit.core.kicked import orbit
from trace_map_toolkit.core.settings import Settings
from trace_map_toolkit.core.tracemap import derive, fricke_sheet_point

HEADERS = ("n", "x", "y", "z", "I")


class OrbitCommand(BaseCommand):
    name = "orbit"
    description = "Iterate the trace map of a rule"
    output_format = "csv"

    @override
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--rule", type=rule, required=True)
        seed = parser.add_mutually_exclusive_group(required=True)
        seed.add_argument("--start", nargs=3, metavar=("X", "Y", "Z"))
        seed.add_argument(
            "--on-sheet",
            nargs=2,
            type=float,
            metavar=("X", "Y"),
            help="start on I = 0 above (X, Y)",
        )
        parser.add_argument(
            "--branch",
            type=int,
            choices=(1, -1),
            default=1,
            help="root taken for z with --on-sheet",
        )
        parser.add_argument("--steps", type=non_negative_int, default=10)
        parser.add_argument(
            "--exact", action="store_true", help="read the start as fractions and stay exact"
        )

    @override
    def run(self, args: argparse.Namespace, settings: Settings) -> CommandResult:
        if args.on_sheet is not None:
            if args.exact:
                raise BadFlagValue("--exact needs --start; sheet points are floating point")
            try:
                start = fricke_sheet_point(*args.on_sheet, branch=args.branch)
            except ValueError as exc:
                raise BadFlagValue(f"--on-sheet: {exc}") from None
        else:
            convert = Fraction if args.exact else float
            try:
                start = tuple(convert(v) for v in args.start)
            except ValueError as exc:
                raise BadFlagValue(f"--start: {exc}") from None

        params = family_params(args.rule)
        invariants = dict(sorted(known_invariants(params).items())) if params is not None else {}
        trace_orbit = orbit(derive(args.rule), start, args.steps)
        return CommandResult(
            "csv",
            rows=trace_orbit.rows(invariants),
            headers=HEADERS + tuple(invariants),
        )

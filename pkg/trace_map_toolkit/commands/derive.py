"""``derive``: trace map, transformation polynomial and class of a rule."""
from __future__ import annotations

import argparse
import logging

from typing_extensions import override

from trace_map_toolkit.commands import rule
from trace_map_toolkit.core.commands import BaseCommand, CommandResult
from trace_map_toolkit.core.settings import Settings
from trace_map_toolkit.core.tracemap import classify_map, derive, structural_checks

_LOGGER = logging.getLogger(__name__)


class DeriveCommand(BaseCommand):
    name = "derive"
    description = "Derive the trace map of a substitution rule"

    @override
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--rule", type=rule, required=True, help='e.g. "a->b;b->ba"')

    @override
    def run(self, args: argparse.Namespace, settings: Settings) -> CommandResult:
        trace_map = derive(args.rule)
        klass = classify_map(trace_map)
        _LOGGER.info("%s is %s", args.rule, klass)
        return CommandResult(
            "json",
            payload={
                "rule": str(args.rule),
                **trace_map.as_dict(),
                "P": str(klass.witness),
                "class": str(klass),
                "checks": structural_checks(trace_map),
            },
        )

"""``classify``: substitution matrix, determinant and transformation polynomial."""
from __future__ import annotations

import argparse

from typing_extensions import override

from trace_map_toolkit.commands import rule
from trace_map_toolkit.core.commands import BaseCommand, CommandResult
from trace_map_toolkit.core.settings import Settings
from trace_map_toolkit.core.tracemap import classify
from trace_map_toolkit.core.wordcore import commutator_image_sign, substitution_matrix


class ClassifyCommand(BaseCommand):
    name = "classify"
    description = "Classify a rule as invertible, non-injective or injective but not onto"

    @override
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--rule", type=rule, required=True, help='e.g. "a->ab;b->b"')

    @override
    def run(self, args: argparse.Namespace, settings: Settings) -> CommandResult:
        matrix = substitution_matrix(args.rule)
        klass = classify(args.rule)
        return CommandResult(
            "json",
            payload={
                "rule": str(args.rule),
                "class": str(klass),
                "P": str(klass.witness),
                "matrix": matrix.rows(),
                "det": matrix.det(),
                "commutator_sign": commutator_image_sign(args.rule),
            },
        )

"""``kick``: trace orbit of a δ-kicked two-level system."""
from __future__ import annotations

import argparse
import logging

import numpy as np
from typing_extensions import override

from trace_map_toolkit.commands import non_negative_int
from trace_map_toolkit.core.commands import BaseCommand, CommandResult
from trace_map_toolkit.core.fibfamily import FibParams, closed_form_map
from trace_map_toolkit.core.kicked import (
    Kick,
    initial_traces,
    invariant_value,
    matrix_halftraces,
    matrix_orbit,
    orbit,
)
from trace_map_toolkit.core.settings import Settings

_LOGGER = logging.getLogger(__name__)

HEADERS = ("n", "x", "y", "z", "I")


class KickCommand(BaseCommand):
    name = "kick"
    description = "Trace orbit of SU(2) kicks applied in substitution order"
    output_format = "csv"

    @override
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        for i in (0, 1):
            parser.add_argument(f"--a{i}", type=float, required=True, help=f"kick angle {i}")
            for c in "xyz":
                parser.add_argument(f"--n{i}{c}", type=float, required=True)
        parser.add_argument("--k", type=int, default=1)
        parser.add_argument("--l", type=int, default=1, dest="ell")
        parser.add_argument("--steps", type=non_negative_int, default=100)
        parser.add_argument(
            "--matrix-check",
            action="store_true",
            help="also multiply the matrices and log the largest half-trace deviation",
        )

    @override
    def run(self, args: argparse.Namespace, settings: Settings) -> CommandResult:
        k0 = Kick(args.a0, (args.n0x, args.n0y, args.n0z))
        k1 = Kick(args.a1, (args.n1x, args.n1y, args.n1z))
        params = FibParams(args.k, args.ell)
        trace_orbit = orbit(closed_form_map(params), initial_traces(k0, k1), args.steps)
        _LOGGER.info("invariant I = %.17g", invariant_value(k0, k1))

        if args.matrix_check:
            mats = matrix_orbit(k0, k1, params, args.steps, settings.reunitarize_every)
            expected = np.array(matrix_halftraces(mats), dtype=float)
            actual = np.array(trace_orbit.points, dtype=float)
            deviation = float(np.max(np.abs(expected - actual))) if len(actual) else 0.0
            _LOGGER.info("matrix check: max half-trace deviation %.3g", deviation)

        return CommandResult("csv", rows=trace_orbit.rows(), headers=HEADERS)

"""``idos``: bands, gaps and gap labels of a periodic approximant."""
from __future__ import annotations

import argparse
import logging
import time

from humanfriendly import format_timespan
from typing_extensions import override

from trace_map_toolkit.commands import positive_float, positive_int
from trace_map_toolkit.core.commands import BaseCommand, CommandResult
from trace_map_toolkit.core.settings import Settings
from trace_map_toolkit.core.spectra import TightBindingChain, assign_labels, band_structure

_LOGGER = logging.getLogger(__name__)

HEADERS = ("E_low", "E_high", "type", "idos_num", "idos_den", "mu", "nu")


class IdosCommand(BaseCommand):
    name = "idos"
    description = "Integrated density of states of a tight-binding approximant"
    output_format = "csv"

    @override
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--k", type=int, default=1)
        parser.add_argument("--l", type=int, default=2, dest="ell")
        parser.add_argument("--n", type=positive_int, required=True, help="generation")
        parser.add_argument("--v1", type=float, default=None)
        parser.add_argument("--v2", type=float, default=None)
        parser.add_argument("--grid", type=positive_int, default=None, help="energy grid points")
        parser.add_argument("--tol", type=positive_float, default=None, help="band-edge tolerance")
        parser.add_argument("--jobs", type=positive_int, default=None)
        parser.add_argument(
            "--no-seed",
            dest="seed_with_bloch",
            action="store_false",
            help="scan the plain grid without Bloch seed points",
        )

    @override
    def run(self, args: argparse.Namespace, settings: Settings) -> CommandResult:
        chain = TightBindingChain(
            v1=settings.v1 if args.v1 is None else args.v1,
            v2=settings.v2 if args.v2 is None else args.v2,
            k=args.k,
            ell=args.ell,
            generation=args.n,
        )
        started = time.perf_counter()
        stair = band_structure(
            chain,
            resolution=args.grid or settings.grid_points,
            tol=args.tol or settings.band_tol,
            jobs=args.jobs or settings.jobs,
            seed_with_bloch=args.seed_with_bloch,
        )
        if chain.k == 1:
            stair = assign_labels(stair, chain.ell, chain.generation, chain.k)
        else:
            _LOGGER.info("labels are only assigned for k = 1")
        _LOGGER.info(
            "length %d: %d bands in %d intervals, %d open gaps (%s)",
            stair.length,
            stair.band_count,
            len(stair.bands),
            len(stair.gaps),
            format_timespan(time.perf_counter() - started),
        )
        return CommandResult("csv", rows=stair.rows(), headers=HEADERS)

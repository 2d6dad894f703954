"""``ising``: free energy per site along the generations of an aperiodic chain."""
from __future__ import annotations

import argparse
import logging
from typing import Any

from typing_extensions import override

from trace_map_toolkit.commands import non_negative_int
from trace_map_toolkit.core.commands import BaseCommand, CommandResult
from trace_map_toolkit.core.errors import DegenerateD
from trace_map_toolkit.core.ising import (
    IsingParams,
    commuting_free_energy,
    free_energy_series,
    transfers_commute,
)
from trace_map_toolkit.core.settings import Settings

_LOGGER = logging.getLogger(__name__)


class IsingCommand(BaseCommand):
    name = "ising"
    description = "Free energy of the Ising chain via the trace map"

    @override
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--k", type=int, default=1)
        parser.add_argument("--l", type=int, default=1, dest="ell")
        parser.add_argument("--K0", type=float, required=True)
        parser.add_argument("--K1", type=float, required=True)
        parser.add_argument("--h0", type=float, default=0.0)
        parser.add_argument("--h1", type=float, default=0.0)
        parser.add_argument("--n", type=non_negative_int, default=30, help="last generation")

    @override
    def run(self, args: argparse.Namespace, settings: Settings) -> CommandResult:
        params = IsingParams(args.K0, args.K1, args.h0, args.h1, args.k, args.ell)
        series = free_energy_series(params, args.n)
        generations = [
            {
                "n": g.n,
                "N": g.length,
                "x_mantissa": g.x.mantissa,
                "x_exponent": g.x.exponent,
                "F": g.free_energy,
            }
            for g in series
        ]
        delta = (
            abs(series[-1].free_energy - series[-2].free_energy) if len(series) > 1 else None
        )
        payload: dict[str, Any] = {
            "params": params.as_dict(),
            "generations": generations,
            "convergence_delta": delta,
            "commuting": transfers_commute(params),
        }
        if payload["commuting"]:
            try:
                payload["commuting_free_energy"] = commuting_free_energy(params)
            except DegenerateD as exc:
                _LOGGER.warning("no frequency-weighted limit: %s", exc)
        _LOGGER.info("F(%d) = %.12g", args.n, series[-1].free_energy)
        return CommandResult("json", payload=payload)

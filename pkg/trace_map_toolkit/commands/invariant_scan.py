"""``invariant-scan``: transformation polynomials and extra invariants over a (k, ℓ) box."""
from __future__ import annotations

import argparse
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any

from tqdm import tqdm
from typing_extensions import override

from trace_map_toolkit.commands import positive_int
from trace_map_toolkit.core.commands import BaseCommand, CommandResult
from trace_map_toolkit.core.errors import BadFlagValue
from trace_map_toolkit.core.fibfamily import (
    FibParams,
    closed_form_transformation,
    integer_eigenvalue_condition,
    known_invariants,
)
from trace_map_toolkit.core.settings import Settings

_LOGGER = logging.getLogger(__name__)


def scan_one(pair: tuple[int, int]) -> dict[str, Any]:
    """One row of the scan; module level so worker processes can pickle it."""
    k, ell = pair
    params = FibParams(k, ell)
    found = known_invariants(params)
    return {
        "k": k,
        "l": ell,
        "P": str(closed_form_transformation(params)),
        "invariant": ",".join(sorted(found)) or "none",
        "integer_eigenvalue_m": integer_eigenvalue_condition(params),
    }


class InvariantScanCommand(BaseCommand):
    name = "invariant-scan"
    description = "Scan the generalised Fibonacci family for invariants"

    @override
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--kmin", type=int, required=True)
        parser.add_argument("--kmax", type=int, required=True)
        parser.add_argument("--lmin", type=int, required=True)
        parser.add_argument("--lmax", type=int, required=True)
        parser.add_argument("--jobs", type=positive_int, default=None)

    @override
    def run(self, args: argparse.Namespace, settings: Settings) -> CommandResult:
        if args.kmin > args.kmax or args.lmin > args.lmax:
            raise BadFlagValue("empty scan range: need kmin <= kmax and lmin <= lmax")
        pairs = list(
            itertools.product(range(args.kmin, args.kmax + 1), range(args.lmin, args.lmax + 1))
        )
        jobs = args.jobs or settings.jobs
        progress = dict(total=len(pairs), desc="invariant-scan", disable=not settings.progress)
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                rows = list(tqdm(pool.map(scan_one, pairs), **progress))
        else:
            rows = [scan_one(pair) for pair in tqdm(pairs, **progress)]
        _LOGGER.info(
            "%d of %d rules carry an extra invariant",
            sum(r["invariant"] != "none" for r in rows),
            len(rows),
        )
        return CommandResult("json", payload={"rows": rows})

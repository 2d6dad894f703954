"""``gaplabel``: Perron data, counting matrices and the frequency module."""
from __future__ import annotations

import argparse
from fractions import Fraction
from typing import Any

from typing_extensions import override

from trace_map_toolkit.commands import int_triple
from trace_map_toolkit.core.commands import BaseCommand, CommandResult
from trace_map_toolkit.core.gaplabel import (
    FrequencyModule,
    QuadExact,
    characteristic_polynomial,
    frequency_module,
    m1,
    m2,
    module_contains,
    perron_data,
    satisfies_congruences,
)
from trace_map_toolkit.core.settings import Settings
from trace_map_toolkit.core.wordcore import gen_fibonacci


def _test_row(mod: FrequencyModule, mu: int, nu: int, p: int) -> dict[str, Any]:
    """Value (μ̃ + ν̃λ₊)/(D·k^p) with its congruence and membership verdicts."""
    lam = QuadExact.lam(mod.k, mod.ell)
    value = (mu + nu * lam) / (mod.d * Fraction(mod.k) ** p)
    return {
        "mu": mu,
        "nu": nu,
        "p": p,
        "value": value,
        "satisfies_congruences": satisfies_congruences(mod, mu, nu),
        "in_module": module_contains(mod, value),
    }


class GapLabelCommand(BaseCommand):
    name = "gaplabel"
    description = "Frequency module of the rule a->b, b->b^l a^k"

    @override
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--k", type=int, required=True)
        parser.add_argument("--l", type=int, required=True, dest="ell")
        parser.add_argument(
            "--test",
            type=int_triple,
            action="append",
            default=[],
            metavar="(mu,nu,p)",
            help="test (mu + nu*lambda)/(D*k^p); may be repeated",
        )

    @override
    def run(self, args: argparse.Namespace, settings: Settings) -> CommandResult:
        k, ell = args.k, args.ell
        data = perron_data(k, ell)
        mod = frequency_module(k, ell)
        rho = gen_fibonacci(k, ell)
        pair_matrix = m2(rho)
        payload: dict[str, Any] = {
            **mod.as_dict(),
            "lambda": data.lam,
            "v1": list(data.v1),
            "v2": list(data.v2),
            "M1": m1(rho).rows(),
            "M2": pair_matrix,
            "M2_charpoly": characteristic_polynomial(pair_matrix),
        }
        if args.test:
            payload["tests"] = [_test_row(mod, *triple) for triple in args.test]
        return CommandResult("json", payload=payload)

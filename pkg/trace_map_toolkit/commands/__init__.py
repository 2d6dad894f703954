"""Built-in subcommands, one module each, plus shared flag parsers."""
from __future__ import annotations

import argparse
import re
from typing import Final

from trace_map_toolkit.core.errors import RuleSyntaxError
from trace_map_toolkit.core.wordcore import Substitution, parse_substitution

__all__: Final = ["positive_int", "non_negative_int", "positive_float", "rule", "int_triple"]


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return value


def non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {text}")
    return value


def positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a number > 0, got {text}")
    return value


def rule(text: str) -> Substitution:
    try:
        return parse_substitution(text)
    except RuleSyntaxError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


_TRIPLE = re.compile(r"^\(?\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)?$")


def int_triple(text: str) -> tuple[int, int, int]:
    """``"(mu,nu,p)"`` → three ints; the parentheses are optional."""
    match = _TRIPLE.match(text.strip())
    if match is None:
        raise argparse.ArgumentTypeError(f"expected '(mu,nu,p)', got {text!r}")
    mu, nu, p = (int(g) for g in match.groups())
    return mu, nu, p

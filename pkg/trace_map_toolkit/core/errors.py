"""Exception taxonomy shared by the library and the command line.

Every error raised on purpose by :mod:`trace_map_toolkit` derives from
:class:`TraceMapError`. Each class also inherits the builtin that describes
its nature, so ``except ValueError`` keeps working for generic callers.

The CLI maps :class:`UsageError` subclasses to exit status 2 and every other
:class:`TraceMapError` to exit status 1, printing ``ClassName: message``.
"""
from __future__ import annotations

from typing import Final

__all__: Final = [
    "TraceMapError",
    "RuleSyntaxError",
    "PolynomialSyntaxError",
    "NotMonicInZ",
    "DivisionLeftRemainder",
    "InverseLettersUnsupported",
    "DegenerateD",
    "FieldMismatch",
    "ComplexEigenvalues",
    "ResolutionTooCoarse",
    "NonPositiveLength",
    "AntiferroNormalization",
    "TraceCollapse",
    "InvalidKick",
    "UsageError",
    "UnknownSubcommand",
    "BadFlagValue",
]


class TraceMapError(Exception):
    """Root of all toolkit errors."""


# ─────────────────────────────── parsing ───────────────────────────────


class RuleSyntaxError(TraceMapError, ValueError):
    """A word or substitution rule could not be parsed."""


class PolynomialSyntaxError(TraceMapError, ValueError):
    """A polynomial in canonical text form could not be parsed."""


# ─────────────────────────────── algebra ───────────────────────────────


class NotMonicInZ(TraceMapError, ValueError):
    """The divisor's leading coefficient in ``z`` is not the constant 1."""


class DivisionLeftRemainder(TraceMapError, RuntimeError):
    """``I∘F`` was not divisible by ``I``; the half-trace reducer is broken."""


class InverseLettersUnsupported(TraceMapError, ValueError):
    """The operation needs positive words (physical chains) only."""


class DegenerateD(TraceMapError, ValueError):
    """``D = k(k+ℓ-1)`` vanishes, so the frequency module is undefined."""


class FieldMismatch(TraceMapError, TypeError):
    """Two quadratic numbers from different fields were combined."""


class ComplexEigenvalues(TraceMapError, ValueError):
    """``ℓ² + 4k < 0``: the substitution matrix has no real Perron root."""


# ─────────────────────────────── physics ───────────────────────────────


class ResolutionTooCoarse(TraceMapError, RuntimeError):
    """The energy scan disagrees with the Bloch band count; refine the grid."""


class NonPositiveLength(TraceMapError, ValueError):
    """The substitution parameters yield a chain of non-positive length."""


class AntiferroNormalization(TraceMapError, ValueError):
    """``sinh 2K <= 0``: the determinant normalisation would be imaginary."""


class TraceCollapse(TraceMapError, ArithmeticError):
    """A normalised trace became non-positive during the free-energy iteration."""

    def __init__(self, generation: int, message: str | None = None) -> None:
        self.generation = generation
        super().__init__(message or f"non-positive trace at generation {generation}")


class InvalidKick(TraceMapError, ValueError):
    """Kick axis is not a unit vector or the angle is negative."""


# ─────────────────────────────── CLI usage ─────────────────────────────


class UsageError(TraceMapError):
    """Bad command line; mapped to exit status 2."""


class UnknownSubcommand(UsageError, LookupError):
    """No registered subcommand has this name."""


class BadFlagValue(UsageError, ValueError):
    """A flag is missing, malformed or out of range."""

"""δ-kicked two-level systems.

A kick of strength ``a`` about the unit axis ``n̂`` is the SU(2) matrix
``U = cos a · 1 - i sin a · (n̂·σ)``. Kicking with the sequence of the rule
a → b, b → b^ℓ a^k gives the one-period propagators
``U_{n+1} = U_{n-1}^k U_n^ℓ``, whose half-traces follow the trace map.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Final, Mapping, Sequence

import numpy as np
import scipy.linalg

from trace_map_toolkit.core.errors import InvalidKick
from trace_map_toolkit.core.fibfamily import FibParams
from trace_map_toolkit.core.polyring import IntPoly3
from trace_map_toolkit.core.tracemap import TraceMap, fricke

__all__: Final = [
    "Kick",
    "TraceOrbit",
    "PAULI",
    "su2_kick",
    "initial_traces",
    "invariant_value",
    "orbit",
    "matrix_orbit",
    "matrix_halftraces",
]

_LOGGER = logging.getLogger(__name__)

PAULI: Final = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_AXIS_TOL: Final = 1e-12
DEFAULT_REUNITARIZE_EVERY: Final = 50


@dataclass(frozen=True, slots=True)
class Kick:
    angle: float
    axis: tuple[float, float, float]

    def __post_init__(self) -> None:
        if self.angle < 0 or not math.isfinite(self.angle):
            raise InvalidKick(f"kick angle must be finite and >= 0, got {self.angle}")
        if len(self.axis) != 3:
            raise InvalidKick(f"axis needs three components, got {self.axis}")
        norm = math.sqrt(sum(c * c for c in self.axis))
        if abs(norm - 1.0) > _AXIS_TOL:
            raise InvalidKick(f"axis {self.axis} is not a unit vector (norm {norm:.15g})")

    def dot(self, other: Kick) -> float:
        return sum(p * q for p, q in zip(self.axis, other.axis))


@dataclass(frozen=True, slots=True)
class TraceOrbit:
    points: tuple[tuple[Any, Any, Any], ...]
    invariant: Any

    def __len__(self) -> int:
        return len(self.points)

    def max_abs_x(self) -> float:
        return max(abs(float(p[0])) for p in self.points)

    def rows(self, extra: Mapping[str, IntPoly3] | None = None) -> list[dict[str, Any]]:
        """``n, x, y, z, I`` per step, I evaluated at every point.

        ``extra`` adds one column per named polynomial, e.g. a family invariant.
        """
        columns = {"I": fricke(), **(extra or {})}
        return [
            {"n": n, "x": x, "y": y, "z": z}
            | {name: poly.eval((x, y, z)) for name, poly in columns.items()}
            for n, (x, y, z) in enumerate(self.points)
        ]


def su2_kick(kick: Kick) -> np.ndarray:
    n_sigma = sum(c * s for c, s in zip(kick.axis, PAULI))
    return math.cos(kick.angle) * np.eye(2, dtype=complex) - 1j * math.sin(kick.angle) * n_sigma


def initial_traces(k0: Kick, k1: Kick) -> tuple[float, float, float]:
    """(½tr U⁽⁰⁾, ½tr U⁽¹⁾, ½tr U⁽⁰⁾U⁽¹⁾)."""
    x0, x1 = math.cos(k0.angle), math.cos(k1.angle)
    x2 = x0 * x1 - math.sin(k0.angle) * math.sin(k1.angle) * k0.dot(k1)
    return x0, x1, x2


def invariant_value(k0: Kick, k1: Kick) -> float:
    """I = ((n̂₀·n̂₁)² - 1)(sin a₀ sin a₁)², always in [-1, 0]."""
    return (k0.dot(k1) ** 2 - 1.0) * (math.sin(k0.angle) * math.sin(k1.angle)) ** 2


def orbit(trace_map: TraceMap, start: Sequence[Any], steps: int) -> TraceOrbit:
    """``steps`` iterations of ``trace_map``; exact for Fraction starts."""
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    point = tuple(start)
    if len(point) != 3:
        raise ValueError(f"start needs three coordinates, got {len(point)}")
    points = [point]
    for _ in range(steps):
        point = trace_map(point)
        points.append(point)
    return TraceOrbit(tuple(points), fricke().eval(points[0]))


def _reunitarize(u: np.ndarray) -> np.ndarray:
    unitary, _ = scipy.linalg.polar(u)
    return unitary / np.sqrt(np.linalg.det(unitary))


def matrix_orbit(
    k0: Kick,
    k1: Kick,
    params: FibParams,
    steps: int,
    reunitarize_every: int = DEFAULT_REUNITARIZE_EVERY,
) -> list[np.ndarray]:
    """U_0 … U_{steps+1} with U_{n+1} = U_{n-1}^k U_n^ℓ."""
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    mats = [su2_kick(k0), su2_kick(k1)]
    for step in range(1, steps + 1):
        nxt = np.linalg.matrix_power(mats[-2], params.k) @ np.linalg.matrix_power(
            mats[-1], params.ell
        )
        if reunitarize_every and step % reunitarize_every == 0:
            # mats[-1] is a factor of the next product as well
            mats[-1] = _reunitarize(mats[-1])
            nxt = _reunitarize(nxt)
        mats.append(nxt)
    _LOGGER.debug("matrix orbit of %d steps for k=%d, l=%d", steps, params.k, params.ell)
    return mats


def matrix_halftraces(matrices: Sequence[np.ndarray]) -> list[tuple[float, float, float]]:
    """(½tr U_n, ½tr U_{n+1}, ½tr U_n U_{n+1}) for consecutive pairs; real parts."""
    return [
        (
            float(np.trace(u).real) / 2,
            float(np.trace(v).real) / 2,
            float(np.trace(u @ v).real) / 2,
        )
        for u, v in zip(matrices, matrices[1:])
    ]

"""Generalised Fibonacci family a → b, b → b^ℓ a^k.

Closed-form trace maps, transformation polynomials and the extra invariants
``H`` (k = ℓ+1) and ``H̃`` (k = 1-ℓ). Negative ``k`` or ``ℓ`` go through the
backwards Chebyshev recursion, no separate code path.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Final

from trace_map_toolkit.core.polyring import X, Y, Z, IntPoly3, chebyshev_u
from trace_map_toolkit.core.tracemap import TraceMap, check_invariant
from trace_map_toolkit.core.wordcore import Substitution, Word, gen_fibonacci, reduce

__all__: Final = [
    "FibParams",
    "closed_form_map",
    "closed_form_transformation",
    "integer_eigenvalue_condition",
    "invariant_H",
    "invariant_H_tilde",
    "invariant_H_pm",
    "known_invariants",
    "family_params",
    "kernel_witness",
]

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class FibParams:
    k: int
    ell: int

    @property
    def non_singular(self) -> bool:
        return self.k != 0

    @property
    def discriminant(self) -> int:
        """ℓ² + 4k; the eigenvalues of the substitution matrix are ½(ℓ ± √Δ)."""
        return self.ell * self.ell + 4 * self.k

    def substitution(self) -> Substitution:
        return gen_fibonacci(self.k, self.ell)


def _u(n: int, var: str) -> IntPoly3:
    return chebyshev_u(n, var)


def _middle_component(k: int, ell: int) -> IntPoly3:
    return (
        _u(k - 1, "x") * _u(ell - 1, "y") * Z
        - _u(k - 1, "x") * _u(ell - 2, "y") * X
        - _u(k - 2, "x") * _u(ell - 1, "y") * Y
        + _u(k - 2, "x") * _u(ell - 2, "y")
    )


def closed_form_map(p: FibParams) -> TraceMap:
    """``(y, g, h)`` with ``h = g`` at ``ℓ+1``."""
    return TraceMap(Y, _middle_component(p.k, p.ell), _middle_component(p.k, p.ell + 1))


def closed_form_transformation(p: FibParams) -> IntPoly3:
    """(U_{k-1}(x))²."""
    return _u(p.k - 1, "x") ** 2


def integer_eigenvalue_condition(p: FibParams) -> int | None:
    """Integer ``m`` with ``k = mℓ + m²`` (λ₊ = ℓ+m, λ₋ = -m), smallest |m| first."""
    disc = p.discriminant
    if disc < 0:
        return None
    root = math.isqrt(disc)
    if root * root != disc:
        return None
    # m solves m² + ℓm - k = 0, so m = (-ℓ ± √Δ)/2
    candidates = [(-p.ell + s * root) // 2 for s in (1, -1) if (-p.ell + s * root) % 2 == 0]
    candidates = [m for m in candidates if m * p.ell + m * m == p.k]
    if not candidates:
        return None
    return min(candidates, key=lambda m: (abs(m), m < 0))


def invariant_H(ell: int) -> IntPoly3:
    """H = U_{ℓ+1}(x)·y - U_ℓ(x)·z, invariant when k = ℓ+1."""
    return _u(ell + 1, "x") * Y - _u(ell, "x") * Z


def invariant_H_tilde(ell: int) -> IntPoly3:
    """H̃ = U_{ℓ-1}(x)·y - U_{ℓ-2}(x)·z, invariant when k = 1-ℓ."""
    return _u(ell - 1, "x") * Y - _u(ell - 2, "x") * Z


def invariant_H_pm(ell: int, sign: int) -> IntPoly3:
    """Combined form ±(U_{±(ℓ+1)}(x)·y - U_{±ℓ}(x)·z) for k = 1 ± ℓ.

    ``sign = -1`` reproduces :func:`invariant_H_tilde` via U_{-(n+2)} = -U_n.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return sign * (_u(sign * (ell + 1), "x") * Y - _u(sign * ell, "x") * Z)


def known_invariants(p: FibParams) -> dict[str, IntPoly3]:
    """Family invariants applicable to ``(k, ℓ)``, each verified exactly."""
    trace_map = closed_form_map(p)
    found: dict[str, IntPoly3] = {}
    if p.k == p.ell + 1:
        found["H"] = invariant_H(p.ell)
    if p.k == 1 - p.ell:
        found["H_tilde"] = invariant_H_tilde(p.ell)
    verified = {name: h for name, h in found.items() if check_invariant(trace_map, h)}
    for name in found.keys() - verified.keys():
        _LOGGER.warning("%s failed the invariance check for k=%d, l=%d", name, p.k, p.ell)
    return verified


def kernel_witness(ell: int) -> Word:
    """a^{-ℓ} b, which gen_fibonacci(0, ℓ) sends to the empty word."""
    return reduce([("a", -ell), ("b", 1)])


def family_params(rho: Substitution) -> FibParams | None:
    """``(k, ℓ)`` when ``rho`` is exactly a → b, b → b^ℓ a^k, else ``None``."""
    if rho.image_a != Word.letter("b"):
        return None
    counts = {"a": 0, "b": 0}
    for gen, exp in rho.image_b.blocks:
        counts[gen] = exp
    params = FibParams(counts["a"], counts["b"])
    return params if params.substitution() == rho else None

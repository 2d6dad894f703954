"""Trace maps of substitution rules.

For a unimodular pair ``(A, B)`` put ``x = ½tr A``, ``y = ½tr B`` and
``z = ½tr AB``. Every word ``W(A, B)`` has a half-trace that is a polynomial
in ``x, y, z`` with integer coefficients. :func:`word_halftrace` computes that
polynomial with Cayley–Hamilton reductions, and :func:`derive` turns a
substitution ϱ into its trace map ``F_ϱ = (f, g, h)``.

The Fricke character ``I = x² + y² + z² - 2xyz - 1`` transforms as
``I∘F_ϱ = P_ϱ · I``; the transformation polynomial ``P_ϱ`` classifies ϱ.
"""
from __future__ import annotations

import cmath
import enum
import logging
from dataclasses import dataclass
from typing import Any, Final, Sequence

import numpy as np

from trace_map_toolkit.core.errors import DivisionLeftRemainder
from trace_map_toolkit.core.polyring import (
    X,
    Y,
    Z,
    IntPoly3,
    chebyshev_u,
    divide_by_monic_in_z,
    substitute,
)
from trace_map_toolkit.core.wordcore import (
    Substitution,
    Word,
    cyclically_reduce,
    reduce,
)

__all__: Final = [
    "TraceMap",
    "SubstKind",
    "SubstClass",
    "word_halftrace",
    "derive",
    "compose_maps",
    "fricke",
    "transformation_polynomial",
    "transformation_polynomial_of_map",
    "classify",
    "classify_map",
    "check_invariant",
    "fricke_surface_matrices",
    "fricke_sheet_point",
    "evaluate_word",
    "structural_checks",
]

_LOGGER = logging.getLogger(__name__)

_ONE: Final = IntPoly3.constant(1)
_GEN_VARIABLE: Final = {"a": "x", "b": "y"}
_GEN_POLY: Final = {"a": X, "b": Y}

Block = tuple[str, int]
HalftraceCache = dict[tuple[Block, ...], IntPoly3]


# ─────────────────────────────────────────────────────────────────────────────
# Data types
# ─────────────────────────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class TraceMap:
    """Polynomial self-map ``(x, y, z) ↦ (fx, fy, fz)`` of ℂ³."""

    fx: IntPoly3
    fy: IntPoly3
    fz: IntPoly3

    @classmethod
    def identity(cls) -> TraceMap:
        return cls(X, Y, Z)

    @property
    def components(self) -> tuple[IntPoly3, IntPoly3, IntPoly3]:
        return self.fx, self.fy, self.fz

    def __call__(self, point: Sequence[Any]) -> tuple[Any, Any, Any]:
        return self.fx.eval(point), self.fy.eval(point), self.fz.eval(point)

    def __matmul__(self, other: TraceMap) -> TraceMap:
        return compose_maps(self, other)

    def iterate(self, n: int) -> TraceMap:
        """n-fold composition ``F∘…∘F``."""
        result = TraceMap.identity()
        for _ in range(n):
            result = compose_maps(result, self)
        return result

    def as_dict(self) -> dict[str, str]:
        return {"fx": str(self.fx), "fy": str(self.fy), "fz": str(self.fz)}


class SubstKind(str, enum.Enum):
    INVERTIBLE = "Invertible"
    NONTRIVIAL_KERNEL = "NontrivialKernel"
    INJECTIVE_NOT_ONTO = "InjectiveNotOnto"


@dataclass(frozen=True, slots=True)
class SubstClass:
    kind: SubstKind
    witness: IntPoly3

    def __str__(self) -> str:
        return self.kind.value


# ─────────────────────────────────────────────────────────────────────────────
# Half-trace reduction
# ─────────────────────────────────────────────────────────────────────────────


def _cyclic_blocks(blocks: Sequence[Block]) -> tuple[Block, ...]:
    return cyclically_reduce(reduce(blocks)).blocks


def _canonical_key(blocks: tuple[Block, ...]) -> tuple[Block, ...]:
    """Minimal rotation of the cyclic word and of its inverse."""
    inverse = tuple((g, -e) for g, e in reversed(blocks))
    candidates = [
        seq[i:] + seq[:i] for seq in (blocks, inverse) for i in range(len(seq))
    ]
    return min(candidates)


def _alternating_halftrace(n: int) -> IntPoly3:
    # ½tr (AB)^n = U_{n-1}(z)·z - U_{n-2}(z)
    return chebyshev_u(n - 1, "z") * Z - chebyshev_u(n - 2, "z")


def _halftrace(blocks: tuple[Block, ...], cache: HalftraceCache) -> IntPoly3:
    if not blocks:
        return _ONE
    key = _canonical_key(blocks)
    if (hit := cache.get(key)) is not None:
        return hit

    # leftmost block whose exponent is not 1: inverse letters first get
    # rewritten with C^e = U_{e-1}(t)·C - U_{e-2}(t)·1 (valid for all e ∈ ℤ)
    pivot = next((i for i, (_, e) in enumerate(blocks) if e != 1), None)
    if pivot is None:
        # all exponents 1 on a cyclically reduced word: the word is (ab)^n or a lone letter
        if len(blocks) == 1:
            result = _GEN_POLY[blocks[0][0]]
        else:
            result = _alternating_halftrace(len(blocks) // 2)
    else:
        gen, exp = blocks[pivot]
        var = _GEN_VARIABLE[gen]
        with_one = blocks[:pivot] + ((gen, 1),) + blocks[pivot + 1 :]
        without = _cyclic_blocks(blocks[:pivot] + blocks[pivot + 1 :])
        result = chebyshev_u(exp - 1, var) * _halftrace(with_one, cache) - chebyshev_u(
            exp - 2, var
        ) * _halftrace(without, cache)

    cache[key] = result
    return result


def word_halftrace(w: Word, cache: HalftraceCache | None = None) -> IntPoly3:
    """Polynomial ``p`` with ``p(x, y, z) = ½tr W(A, B)`` for all A, B ∈ Sl(2, ℂ)."""
    if cache is None:
        cache = {}
    return _halftrace(cyclically_reduce(w).blocks, cache)


def derive(rho: Substitution) -> TraceMap:
    """Trace map ``F_ϱ`` of the substitution ϱ."""
    cache: HalftraceCache = {}
    trace_map = TraceMap(
        word_halftrace(rho.image_a, cache),
        word_halftrace(rho.image_b, cache),
        word_halftrace(rho.image_a * rho.image_b, cache),
    )
    _LOGGER.debug("derived trace map of %s (%d cached cyclic words)", rho, len(cache))
    return trace_map


def compose_maps(f: TraceMap, g: TraceMap) -> TraceMap:
    """``F∘G``, so that ``derive(compose(ϱ, σ)) == compose_maps(derive(ϱ), derive(σ))``."""
    return TraceMap(*(substitute(component, *g.components) for component in f.components))


# ─────────────────────────────────────────────────────────────────────────────
# Fricke character and classification
# ─────────────────────────────────────────────────────────────────────────────


def fricke() -> IntPoly3:
    """I = x² + y² + z² - 2xyz - 1."""
    return X**2 + Y**2 + Z**2 - 2 * X * Y * Z - 1


def transformation_polynomial_of_map(trace_map: TraceMap) -> IntPoly3:
    invariant = fricke()
    pulled_back = substitute(invariant, *trace_map.components)
    quotient, remainder = divide_by_monic_in_z(pulled_back, invariant)
    if remainder:
        raise DivisionLeftRemainder(
            f"I∘F is not a multiple of I (remainder {remainder}); map {trace_map.as_dict()}"
        )
    return quotient


def transformation_polynomial(rho: Substitution) -> IntPoly3:
    """P_ϱ with ``I∘F_ϱ = P_ϱ · I``."""
    return transformation_polynomial_of_map(derive(rho))


def classify_map(trace_map: TraceMap) -> SubstClass:
    """Classification from an already derived trace map."""
    witness = transformation_polynomial_of_map(trace_map)
    if witness == 1:
        kind = SubstKind.INVERTIBLE
    elif witness == 0:
        kind = SubstKind.NONTRIVIAL_KERNEL
    elif not witness.is_constant():
        kind = SubstKind.INJECTIVE_NOT_ONTO
    else:
        raise DivisionLeftRemainder(
            f"transformation polynomial is the constant {witness}, not 0 or 1"
        )
    return SubstClass(kind, witness)


def classify(rho: Substitution) -> SubstClass:
    return classify_map(derive(rho))


def check_invariant(trace_map: TraceMap, h: IntPoly3) -> bool:
    """True iff ``H∘F == H`` exactly."""
    return substitute(h, *trace_map.components) == h


_SIGN_POINTS: Final = ((1, -1, -1), (-1, 1, -1), (-1, -1, 1))
_SHEET_IMAG_TOL: Final = 1e-12


def structural_checks(trace_map: TraceMap) -> dict[str, Any]:
    """Properties every trace map shares, plus the origin data that depends on ϱ."""
    origin_image = trace_map((0, 0, 0))
    p = transformation_polynomial_of_map(trace_map)
    return {
        "fixes_111": trace_map((1, 1, 1)) == (1, 1, 1),
        "sign_set_invariant": all(trace_map(pt) in _SIGN_POINTS for pt in _SIGN_POINTS),
        "origin_image": list(origin_image),
        "origin_fixed": origin_image == (0, 0, 0),
        "P_at_origin": p.eval((0, 0, 0)),
    }


# ─────────────────────────────────────────────────────────────────────────────
# Numerical helpers
# ─────────────────────────────────────────────────────────────────────────────


def evaluate_word(w: Word, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product ``W(A, B)``."""
    mats = {"a": a, "b": b}
    inverses = {"a": np.linalg.inv(a), "b": np.linalg.inv(b)}
    result = np.eye(a.shape[0], dtype=np.result_type(a, b))
    for gen, exp in w.blocks:
        factor = mats[gen] if exp > 0 else inverses[gen]
        result = result @ np.linalg.matrix_power(factor, abs(exp))
    return result


def fricke_surface_matrices(
    x: complex, y: complex, branch: int = 1
) -> tuple[np.ndarray, np.ndarray, complex]:
    """Commuting diagonal pair with half-traces ``(x, y, z)`` on ``{I = 0}``.

    ``A = diag(α, 1/α)``, ``B = diag(β^ε, β^-ε)`` with ``α = x + √(x²-1)`` and
    ``β = y + √(y²-1)`` on the principal branch; ``ε = branch`` selects which
    root of the quadratic in ``z`` is realised. Returns ``(A, B, z)``.
    """
    if branch not in (1, -1):
        raise ValueError(f"branch must be +1 or -1, got {branch}")
    alpha = x + cmath.sqrt(x * x - 1)
    beta = y + cmath.sqrt(y * y - 1)
    beta_eps = beta if branch == 1 else 1 / beta
    a = np.diag([alpha, 1 / alpha]).astype(complex)
    b = np.diag([beta_eps, 1 / beta_eps]).astype(complex)
    z = 0.5 * (alpha * beta_eps + 1 / (alpha * beta_eps))
    return a, b, z


def fricke_sheet_point(x: float, y: float, branch: int = 1) -> tuple[float, float, float]:
    """Real point ``(x, y, z)`` on ``{I = 0}`` with ``z`` from the diagonal pair.

    ``z`` is real when ``|x|`` and ``|y|`` are both at most 1 or both at least 1.
    """
    _, _, z = fricke_surface_matrices(x, y, branch)
    if abs(z.imag) > _SHEET_IMAG_TOL * max(1.0, abs(z)):
        raise ValueError(f"no real point of I = 0 above (x, y) = ({x}, {y}); z = {z}")
    return float(x), float(y), float(z.real)

"""Aperiodic classical Ising chain a → b, b → b^ℓ a^k.

Bond ``j`` of the chain built on the word ``w_n`` (``w_0 = a``, ``w_1 = b``,
``w_{n+1} = ϱ(w_n)``) carries coupling ``K0``/``K1`` and field ``h0``/``h1``
according to its letter. The transfer matrices obey
``T_{n+1} = T_n^ℓ T_{n-1}^k``; splitting each ``T_n`` into its determinant
root ``d_n`` and the unimodular rest turns the partition function
``Z_n = tr T_n = 2 d_n x_n`` into one trace-map orbit plus an exponent
recursion. Values grow like ``e^{N_n}``, so the orbit runs in
:class:`ScaledScalar` arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Final, NamedTuple, Sequence

import numpy as np

from trace_map_toolkit.core.errors import AntiferroNormalization, NonPositiveLength, TraceCollapse
from trace_map_toolkit.core.fibfamily import FibParams, closed_form_map
from trace_map_toolkit.core.gaplabel import perron_data
from trace_map_toolkit.core.wordcore import Word

__all__: Final = [
    "IsingParams",
    "ScaledScalar",
    "IsingGeneration",
    "elementary_transfer",
    "chain_transfer_direct",
    "word_transfer_product",
    "chain_lengths",
    "determinant_exponents",
    "initial_traces",
    "free_energy",
    "free_energy_series",
    "commuting_free_energy",
    "transfers_commute",
]

_LOG2: Final = math.log(2.0)


@dataclass(frozen=True, slots=True)
class IsingParams:
    """Couplings and fields in units of k_B T, plus the rule parameters."""

    K0: float
    K1: float
    h0: float = 0.0
    h1: float = 0.0
    k: int = 1
    ell: int = 1

    @property
    def fib(self) -> FibParams:
        return FibParams(self.k, self.ell)

    def bond(self, letter: str) -> tuple[float, float]:
        return (self.K0, self.h0) if letter == "a" else (self.K1, self.h1)

    def as_dict(self) -> dict[str, Any]:
        return {
            "K0": self.K0,
            "K1": self.K1,
            "h0": self.h0,
            "h1": self.h1,
            "k": self.k,
            "l": self.ell,
        }


# ─────────────────────────────────────────────────────────────────────────────
# Scaled arithmetic
# ─────────────────────────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class ScaledScalar:
    """``mantissa · 2**exponent`` with ``|mantissa|`` in [1, 2) or exactly 0.

    The exponent is a Python int, so magnitudes far beyond the double range
    stay representable.
    """

    mantissa: float = 0.0
    exponent: int = 0

    @classmethod
    def of(cls, value: float | int | ScaledScalar) -> ScaledScalar:
        if isinstance(value, ScaledScalar):
            return value
        return cls._normalized(float(value), 0)

    @classmethod
    def _normalized(cls, mantissa: float, exponent: int) -> ScaledScalar:
        if mantissa == 0.0:
            return cls(0.0, 0)
        if not math.isfinite(mantissa):
            raise OverflowError(f"non-finite mantissa {mantissa}")
        frac, shift = math.frexp(mantissa)
        return cls(frac * 2.0, exponent + shift - 1)

    # ---------------------------------------------------------- arithmetic
    def __add__(self, other: Any) -> ScaledScalar:
        other = ScaledScalar.of(other)
        if other.mantissa == 0.0:
            return self
        if self.mantissa == 0.0:
            return other
        big, small = (self, other) if self.exponent >= other.exponent else (other, self)
        shifted = math.ldexp(small.mantissa, small.exponent - big.exponent)
        return ScaledScalar._normalized(big.mantissa + shifted, big.exponent)

    __radd__ = __add__

    def __neg__(self) -> ScaledScalar:
        return ScaledScalar(-self.mantissa, self.exponent)

    def __sub__(self, other: Any) -> ScaledScalar:
        return self + (-ScaledScalar.of(other))

    def __rsub__(self, other: Any) -> ScaledScalar:
        return ScaledScalar.of(other) + (-self)

    def __mul__(self, other: Any) -> ScaledScalar:
        other = ScaledScalar.of(other)
        return ScaledScalar._normalized(
            self.mantissa * other.mantissa, self.exponent + other.exponent
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> ScaledScalar:
        other = ScaledScalar.of(other)
        if other.mantissa == 0.0:
            raise ZeroDivisionError("division by a zero ScaledScalar")
        return ScaledScalar._normalized(
            self.mantissa / other.mantissa, self.exponent - other.exponent
        )

    def __pow__(self, n: int) -> ScaledScalar:
        if n == 0:
            return ScaledScalar(1.0, 0)
        if n < 0:
            return ScaledScalar(1.0, 0) / self ** (-n)
        half = self ** (n // 2)
        squared = half * half
        return squared * self if n % 2 else squared

    # ---------------------------------------------------------- inspection
    def sign(self) -> int:
        return (self.mantissa > 0) - (self.mantissa < 0)

    def log(self) -> float:
        """Natural log of a positive value."""
        if self.mantissa <= 0.0:
            raise ValueError(f"log of non-positive value {self}")
        return math.log(self.mantissa) + self.exponent * _LOG2

    def __float__(self) -> float:
        try:
            return math.ldexp(self.mantissa, self.exponent)
        except OverflowError:
            return math.copysign(math.inf, self.mantissa)

    def __repr__(self) -> str:
        return f"ScaledScalar({self.mantissa!r}, {self.exponent})"

    def __str__(self) -> str:
        return f"{self.mantissa:.17g}*2^{self.exponent}"


_ONE: Final = ScaledScalar(1.0, 0)
_ZERO: Final = ScaledScalar()

ScaledMatrix = tuple[tuple[ScaledScalar, ScaledScalar], tuple[ScaledScalar, ScaledScalar]]


def _mat_mul(a: ScaledMatrix, b: ScaledMatrix) -> ScaledMatrix:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _mat_pow(a: ScaledMatrix, n: int) -> ScaledMatrix:
    result: ScaledMatrix = ((_ONE, _ZERO), (_ZERO, _ONE))
    base = a
    while n:
        if n & 1:
            result = _mat_mul(result, base)
        base = _mat_mul(base, base)
        n >>= 1
    return result


# ─────────────────────────────────────────────────────────────────────────────
# Transfer matrices
# ─────────────────────────────────────────────────────────────────────────────


def elementary_transfer(K: float, h: float) -> np.ndarray:
    """[[e^{K+h}, e^{-K}], [e^{-K}, e^{K-h}]]."""
    return np.array(
        [[math.exp(K + h), math.exp(-K)], [math.exp(-K), math.exp(K - h)]], dtype=float
    )


def _check_rule(k: int, ell: int) -> None:
    if k < 0 or ell < 0:
        raise NonPositiveLength(f"chain lengths need k, l >= 0, got k={k}, l={ell}")


def chain_lengths(k: int, ell: int, n: int) -> list[int]:
    """N_0 … N_n with N_0 = N_1 = 1 and N_{m+1} = ℓ N_m + k N_{m-1}."""
    _check_rule(k, ell)
    lengths = [1, 1]
    while len(lengths) <= n:
        lengths.append(ell * lengths[-1] + k * lengths[-2])
    lengths = lengths[: n + 1]
    if any(length <= 0 for length in lengths):
        raise NonPositiveLength(f"k={k}, l={ell} give an empty chain by generation {n}")
    return lengths


def determinant_exponents(k: int, ell: int, n: int) -> tuple[int, int]:
    """Letter counts (k f_{n-1}, f_n) of w_n, so d_n = d_0^{e_0} d_1^{e_1}."""
    _check_rule(k, ell)
    prev, cur = (1, 0), (0, 1)
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, (ell * cur[0] + k * prev[0], ell * cur[1] + k * prev[1])
    return cur


def chain_transfer_direct(params: IsingParams, n: int) -> ScaledMatrix:
    """T_n from T_{m+1} = T_m^ℓ T_{m-1}^k in scaled arithmetic."""
    chain_lengths(params.k, params.ell, n)

    def start(K: float, h: float) -> ScaledMatrix:
        t = elementary_transfer(K, h)
        return (
            (ScaledScalar.of(t[0, 0]), ScaledScalar.of(t[0, 1])),
            (ScaledScalar.of(t[1, 0]), ScaledScalar.of(t[1, 1])),
        )

    prev, cur = start(params.K0, params.h0), start(params.K1, params.h1)
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, _mat_mul(_mat_pow(cur, params.ell), _mat_pow(prev, params.k))
    return cur


def word_transfer_product(params: IsingParams, word: Word) -> np.ndarray:
    """Letter-by-letter float product; for short words only."""
    mats = {g: elementary_transfer(*params.bond(g)) for g in ("a", "b")}
    result = np.eye(2)
    for gen, step in word.letters():
        if step < 0:
            raise NonPositiveLength(f"word {word} has inverse letters")
        result = result @ mats[gen]
    return result


def transfers_commute(params: IsingParams) -> bool:
    """T_0 T_1 = T_1 T_0 iff e^{2K0} sinh h0 = e^{2K1} sinh h1."""
    lhs = math.exp(2 * params.K0) * math.sinh(params.h0)
    rhs = math.exp(2 * params.K1) * math.sinh(params.h1)
    return math.isclose(lhs, rhs, rel_tol=1e-12, abs_tol=1e-12)


# ─────────────────────────────────────────────────────────────────────────────
# Trace-map free energy
# ─────────────────────────────────────────────────────────────────────────────


def _determinant_root(K: float) -> float:
    two_sinh = 2.0 * math.sinh(2.0 * K)
    if two_sinh <= 0.0:
        raise AntiferroNormalization(
            f"2 sinh 2K = {two_sinh:.6g} <= 0 for K = {K}; couplings must be positive"
        )
    return math.sqrt(two_sinh)


def initial_traces(params: IsingParams) -> tuple[float, float, float]:
    d0, d1 = _determinant_root(params.K0), _determinant_root(params.K1)
    k_sum = params.K0 + params.K1
    x0 = math.exp(params.K0) * math.cosh(params.h0) / d0
    y0 = math.exp(params.K1) * math.cosh(params.h1) / d1
    z0 = (math.exp(k_sum) * math.cosh(params.h0 + params.h1) + math.exp(-k_sum)) / (d0 * d1)
    return x0, y0, z0


class IsingGeneration(NamedTuple):
    n: int
    length: int
    x: ScaledScalar
    log_z: float
    free_energy: float


def free_energy_series(params: IsingParams, n: int) -> list[IsingGeneration]:
    """Generations 0 … n of one trace-map orbit."""
    if n < 0:
        raise NonPositiveLength(f"generation must be non-negative, got {n}")
    lengths = chain_lengths(params.k, params.ell, n)
    log_d0 = math.log(_determinant_root(params.K0))
    log_d1 = math.log(_determinant_root(params.K1))
    trace_map = closed_form_map(params.fib)

    point: Sequence[ScaledScalar] = tuple(ScaledScalar.of(v) for v in initial_traces(params))
    series: list[IsingGeneration] = []
    for m in range(n + 1):
        if m:
            point = trace_map(point)
        x = ScaledScalar.of(point[0])
        if x.sign() <= 0:
            raise TraceCollapse(m, f"x_{m} = {x} is not positive")
        e0, e1 = determinant_exponents(params.k, params.ell, m)
        log_z = _LOG2 + x.log() + e0 * log_d0 + e1 * log_d1
        series.append(IsingGeneration(m, lengths[m], x, log_z, -log_z / lengths[m]))
    return series


def free_energy(params: IsingParams, n: int) -> tuple[float, float, int]:
    """(F per site, log Z_n, N_n) at generation ``n``."""
    last = free_energy_series(params, n)[-1]
    return last.free_energy, last.log_z, last.length


def _largest_eigenvalue(K: float, h: float) -> float:
    return math.exp(K) * math.cosh(h) + math.sqrt(
        math.exp(2 * K) * math.sinh(h) ** 2 + math.exp(-2 * K)
    )


def commuting_free_energy(params: IsingParams) -> float:
    """Infinite-chain free energy when T_0 and T_1 commute.

    Only the letter frequencies matter then: F = -Σ v_i log λ_max(T_i).
    """
    freq_a, freq_b = (float(v) for v in perron_data(params.k, params.ell).v1)
    return -(
        freq_a * math.log(_largest_eigenvalue(params.K0, params.h0))
        + freq_b * math.log(_largest_eigenvalue(params.K1, params.h1))
    )

"""Concrete gap labeling for generalised Fibonacci chains.

The substitution a → b, b → b^ℓ a^k induces a rule on the two-letter words
``aa, ab, ba, bb``. Perron eigenvectors of the one- and two-letter counting
matrices give letter and pair frequencies in ℚ(λ₊), λ₊² = k + ℓλ₊. Gap IDOS
values of the limiting chain lie in the module

    {(μ̃ + ν̃λ₊) / (D·k^p)},  D = k(k+ℓ-1),

with μ̃ + ν̃ ≡ 0 and μ̃ + (k+ℓ)ν̃ ≡ 0 (mod D). For k = 1 (metallic means) a
label (μ, ν) maps to the IDOS value (λ₊-1)/ℓ · (μ + ν/λ₊).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Any, Final, Mapping, NamedTuple, Sequence

from trace_map_toolkit.core.errors import (
    ComplexEigenvalues,
    DegenerateD,
    FieldMismatch,
    InverseLettersUnsupported,
)
from trace_map_toolkit.core.wordcore import IntMatrix2, Substitution, substitution_matrix

__all__: Final = [
    "QuadExact",
    "FrequencyModule",
    "PairSubstitution",
    "PerronData",
    "PAIRS",
    "induced_two_letter",
    "m1",
    "m2",
    "characteristic_polynomial",
    "perron_data",
    "frequency_module",
    "module_contains",
    "module_representation",
    "module_shift",
    "satisfies_congruences",
    "label_to_idos",
    "idos_to_label",
]

_LOGGER = logging.getLogger(__name__)

PAIRS: Final = ("aa", "ab", "ba", "bb")

Rational = int | Fraction


# ─────────────────────────────────────────────────────────────────────────────
# Exact arithmetic in ℚ(λ₊)
# ─────────────────────────────────────────────────────────────────────────────


@total_ordering
class QuadExact:
    """``p + q·λ₊`` with rational ``p, q`` and λ₊ the larger root of t² = ℓt + k.

    When ℓ² + 4k is a perfect square λ₊ is an integer and values are kept
    with ``q = 0``.
    """

    __slots__ = ("_p", "_q", "_k", "_ell")

    def __init__(self, p: Rational, q: Rational, k: int, ell: int) -> None:
        disc = ell * ell + 4 * k
        if disc < 0:
            raise ComplexEigenvalues(f"ℓ² + 4k = {disc} < 0 for k={k}, l={ell}")
        p, q = Fraction(p), Fraction(q)
        root = math.isqrt(disc)
        if q and root * root == disc:
            p, q = p + q * ((ell + root) // 2), Fraction(0)
        self._p, self._q, self._k, self._ell = p, q, k, ell

    # ------------------------------------------------------------------
    @classmethod
    def lam(cls, k: int, ell: int) -> QuadExact:
        """λ₊ itself."""
        return cls(0, 1, k, ell)

    @classmethod
    def rational(cls, value: Rational, k: int, ell: int) -> QuadExact:
        return cls(value, 0, k, ell)

    @property
    def p(self) -> Fraction:
        return self._p

    @property
    def q(self) -> Fraction:
        return self._q

    @property
    def field(self) -> tuple[int, int]:
        return self._k, self._ell

    @property
    def discriminant(self) -> int:
        return self._ell * self._ell + 4 * self._k

    def is_rational(self) -> bool:
        return self._q == 0

    def is_integral(self) -> bool:
        return self._p.denominator == 1 and self._q.denominator == 1

    # ------------------------------------------------------------------
    def _coerce(self, other: Any) -> QuadExact:
        if isinstance(other, QuadExact):
            if other.field != self.field:
                raise FieldMismatch(
                    f"cannot combine ℚ(λ) for (k,l)={self.field} and {other.field}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExact(other, 0, self._k, self._ell)
        return NotImplemented

    def __add__(self, other: Any) -> QuadExact:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExact(self._p + o._p, self._q + o._q, self._k, self._ell)

    __radd__ = __add__

    def __neg__(self) -> QuadExact:
        return QuadExact(-self._p, -self._q, self._k, self._ell)

    def __sub__(self, other: Any) -> QuadExact:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> QuadExact:
        return (-self) + other

    def __mul__(self, other: Any) -> QuadExact:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        # λ² = k + ℓλ
        qq = self._q * o._q
        return QuadExact(
            self._p * o._p + self._k * qq,
            self._p * o._q + self._q * o._p + self._ell * qq,
            self._k,
            self._ell,
        )

    __rmul__ = __mul__

    def conjugate(self) -> QuadExact:
        """Image under λ₊ ↦ λ₋ = ℓ - λ₊."""
        return QuadExact(self._p + self._q * self._ell, -self._q, self._k, self._ell)

    def norm(self) -> Fraction:
        return self._p**2 + self._ell * self._p * self._q - self._k * self._q**2

    def inverse(self) -> QuadExact:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError(f"{self} is not invertible")
        c = self.conjugate()
        return QuadExact(c._p / n, c._q / n, self._k, self._ell)

    def __truediv__(self, other: Any) -> QuadExact:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> QuadExact:
        return self.inverse() * other

    def __pow__(self, n: int) -> QuadExact:
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadExact(1, 0, self._k, self._ell)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ------------------------------------------------------------------
    def sign(self) -> int:
        # 2·value = (2p + qℓ) + q·√Δ
        a = 2 * self._p + self._q * self._ell
        b = self._q
        if b == 0 or a * b >= 0:
            s = a if a != 0 else b
            return (s > 0) - (s < 0)
        # opposite signs: compare a² with b²Δ
        diff = a * a - b * b * self.discriminant
        return ((a > 0) - (a < 0)) if diff > 0 else ((b > 0) - (b < 0)) if diff < 0 else 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._q == 0 and self._p == other
        if not isinstance(other, QuadExact):
            return NotImplemented
        return (self._p, self._q, self.field) == (other._p, other._q, other.field)

    def __lt__(self, other: Any) -> bool:
        return (self - other).sign() < 0

    def __hash__(self) -> int:
        if self._q == 0:
            return hash(self._p)
        return hash((self._p, self._q, self._k, self._ell))

    def __float__(self) -> float:
        lam = 0.5 * (self._ell + math.sqrt(self.discriminant))
        return float(self._p) + float(self._q) * lam

    def radical_form(self) -> tuple[Fraction, Fraction]:
        """``(r, s)`` with value ``r + s·√Δ``."""
        return self._p + self._q * Fraction(self._ell, 2), self._q / 2

    def to_json(self) -> dict[str, Any]:
        r, s = self.radical_form()
        return {
            "p": str(self._p),
            "q": str(self._q),
            "sqrt_form": [str(r), str(s), self.discriminant],
            "value": float(self),
        }

    def __repr__(self) -> str:
        return f"QuadExact({self._p}, {self._q}, k={self._k}, l={self._ell})"

    def __str__(self) -> str:
        if self._q == 0:
            return str(self._p)
        return f"{self._p} + {self._q}*lambda" if self._q > 0 else f"{self._p} - {-self._q}*lambda"


# ─────────────────────────────────────────────────────────────────────────────
# Induced two-letter substitution and counting matrices
# ─────────────────────────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class PairSubstitution:
    """Substitution on the alphabet ``aa, ab, ba, bb``."""

    images: Mapping[str, tuple[str, ...]]

    def __call__(self, pairs: Sequence[str]) -> tuple[str, ...]:
        return tuple(p for pair in pairs for p in self.images[pair])


def induced_two_letter(rho: Substitution) -> PairSubstitution:
    """ϱ₂(cd) = the pairs of ϱ(c)ϱ(d) starting inside ϱ(c)."""
    if not rho.is_positive():
        raise InverseLettersUnsupported(
            f"{rho}: gap labeling needs non-empty images without inverse letters"
        )
    images: dict[str, tuple[str, ...]] = {}
    for pair in PAIRS:
        first = str(rho.image(pair[0]))
        joined = first + str(rho.image(pair[1]))
        images[pair] = tuple(joined[i : i + 2] for i in range(len(first)))
    return PairSubstitution(images)


def m1(rho: Substitution) -> IntMatrix2:
    """One-letter counting matrix, the transpose of R_ϱ."""
    return substitution_matrix(rho).transpose()


def m2(rho: Substitution) -> list[list[int]]:
    """Entry (i, j) counts pair i in ϱ₂(pair j)."""
    induced = induced_two_letter(rho)
    return [[induced.images[col].count(row) for col in PAIRS] for row in PAIRS]


def characteristic_polynomial(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients of det(t·1 - M), highest degree first (Faddeev–LeVerrier)."""
    n = len(matrix)
    m = [[Fraction(v) for v in row] for row in matrix]
    coeffs = [Fraction(1)]
    aux = [[Fraction(0)] * n for _ in range(n)]
    for step in range(1, n + 1):
        # aux ← M·aux + c_{step-1}·1
        prod = [[sum(m[i][t] * aux[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            prod[i][i] += coeffs[-1]
        aux = prod
        trace = sum(sum(m[i][t] * aux[t][i] for t in range(n)) for i in range(n))
        coeffs.append(-trace / step)
    return [int(c) for c in coeffs]


# ─────────────────────────────────────────────────────────────────────────────
# Perron data and the frequency module
# ─────────────────────────────────────────────────────────────────────────────


class PerronData(NamedTuple):
    lam: QuadExact
    v1: tuple[QuadExact, QuadExact]
    v2: tuple[QuadExact, QuadExact, QuadExact, QuadExact]


def _module_denominator(k: int, ell: int) -> int:
    d = k * (k + ell - 1)
    if d == 0:
        reason = "reducible" if k == 0 else "length preserving"
        raise DegenerateD(f"D = k(k+l-1) = 0 for k={k}, l={ell} ({reason} substitution)")
    return d


def perron_data(k: int, ell: int) -> PerronData:
    """λ₊ with statistically normalised letter (v1) and pair (v2) frequencies."""
    d = _module_denominator(k, ell)
    lam = QuadExact.lam(k, ell)
    v1 = ((k * (k + ell) - k * lam) / d, (-k + k * lam) / d)
    v2 = (
        ((k + ell) * (k - 1) - (k - 1) * lam) / d,
        ((k + ell) - lam) / d,
        ((k + ell) - lam) / d,
        (-(2 * k + ell) + (k + 1) * lam) / d,
    )
    return PerronData(lam, v1, v2)


@dataclass(frozen=True, slots=True)
class FrequencyModule:
    k: int
    ell: int
    d: int

    @property
    def congruences(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Coefficient pairs ``(c_μ, c_ν)`` with c_μ·μ̃ + c_ν·ν̃ ≡ 0 (mod D)."""
        return (1, 1), (1, self.k + self.ell)

    def contains(self, value: QuadExact | Rational, p: int | None = None) -> bool:
        return module_contains(self, value, p)

    def as_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "l": self.ell,
            "D": self.d,
            "congruences": [list(c) for c in self.congruences],
            "modulus": self.d,
        }


def frequency_module(k: int, ell: int) -> FrequencyModule:
    return FrequencyModule(k, ell, _module_denominator(k, ell))


def satisfies_congruences(mod: FrequencyModule, mu: int, nu: int) -> bool:
    return all((cm * mu + cn * nu) % mod.d == 0 for cm, cn in mod.congruences)


def module_shift(pair: tuple[int, int], k: int, ell: int) -> tuple[int, int]:
    """Numerator pair after multiplication by 1/λ₊ = (λ₊-ℓ)/k (p grows by one)."""
    mu, nu = pair
    return k * nu - ell * mu, mu


def _exponent_window(mod: FrequencyModule, scaled: Sequence[Fraction], p: int | None) -> range:
    """Values of p worth trying; empty when no power of k clears the denominators."""
    if p is not None:
        return range(p, p + 1)
    den = math.lcm(*(f.denominator for f in scaled))
    k = abs(mod.k)
    if k == 1:
        return range(0, 1) if den == 1 else range(0)
    p_min, power = 0, 1
    while power % den:
        p_min += 1
        power *= k
        if p_min > den.bit_length() + 1:
            return range(0)
    return range(p_min, p_min + abs(mod.d).bit_length() + 2)


def _solve_linear_congruence(a: int, b: int, m: int) -> tuple[int, int] | None:
    """Solutions of a·x ≡ b (mod m) as ``(x0, step)``."""
    g = math.gcd(a, m)
    if b % g:
        return None
    step = m // g
    if step == 1:
        return 0, 1
    inv = pow((a // g) % step, -1, step)
    return (b // g) * inv % step, step


def module_representation(
    mod: FrequencyModule, value: QuadExact | Rational, p: int | None = None
) -> tuple[int, int, int] | None:
    """``(μ̃, ν̃, p)`` with value = (μ̃ + ν̃λ₊)/(D·k^p) satisfying the congruences."""
    if not isinstance(value, QuadExact):
        value = QuadExact.rational(value, mod.k, mod.ell)
    if value.field != (mod.k, mod.ell):
        raise FieldMismatch(f"value from field {value.field} tested against module {mod}")
    disc = value.discriminant
    root = math.isqrt(disc)
    base = (mod.d * value.p, mod.d * value.q)
    for exp in _exponent_window(mod, base, p):
        scale = mod.k**exp
        mu_f, nu_f = base[0] * scale, base[1] * scale
        if mu_f.denominator != 1 or nu_f.denominator != 1:
            continue
        if root * root == disc:
            # λ₊ is an integer, so the representation is not unique
            found = _integer_root_solution(mod, int(mu_f), (mod.ell + root) // 2)
            if found is not None:
                return found[0], found[1], exp
            continue
        mu, nu = int(mu_f), int(nu_f)
        if satisfies_congruences(mod, mu, nu):
            return mu, nu, exp
    return None


def _integer_root_solution(mod: FrequencyModule, total: int, r: int) -> tuple[int, int] | None:
    """Solve μ̃ + ν̃·r = total under both congruences."""
    m = abs(mod.d)
    # μ̃ = total - ν̃r; both congruences become linear in ν̃
    first = _solve_linear_congruence((1 - r) % m, (-total) % m, m)
    second = _solve_linear_congruence((mod.k + mod.ell - r) % m, (-total) % m, m)
    if first is None or second is None:
        return None
    x0, step = first
    for t in range(m // step + 1):
        nu = x0 + t * step
        if (nu - second[0]) % second[1] == 0:
            return total - nu * r, nu
    return None


def module_contains(
    mod: FrequencyModule, value: QuadExact | Rational, p: int | None = None
) -> bool:
    """Membership of ``value`` in the frequency module (for a fixed ``p`` if given)."""
    return module_representation(mod, value, p) is not None


# ─────────────────────────────────────────────────────────────────────────────
# Labels for metallic means (k = 1)
# ─────────────────────────────────────────────────────────────────────────────


def label_to_idos(mu: int, nu: int, ell: int) -> QuadExact:
    """(λ₊-1)/ℓ · (μ + ν/λ₊) with 1/λ₊ = λ₊ - ℓ."""
    lam = QuadExact.lam(1, ell)
    return (lam - 1) * (mu + nu * (lam - ell)) / ell


def idos_to_label(value: QuadExact, ell: int) -> tuple[int, int] | None:
    """Inverse of :func:`label_to_idos`; ``None`` when value is not a label value."""
    if value.field != (1, ell):
        raise FieldMismatch(f"labels live in the k=1, l={ell} field, got {value.field}")
    scaled = value * ell
    if not scaled.is_integral():
        return None
    big_p, big_q = int(scaled.p), int(scaled.q)
    if (big_p + big_q) % ell:
        return None
    nu = (big_p + big_q) // ell
    mu = (nu - big_p) + ell * nu
    return mu, nu

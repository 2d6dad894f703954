"""Exact sparse polynomials in ℤ[x, y, z].

:class:`IntPoly3` maps exponent triples ``(i, j, k)`` to nonzero Python
integers, so arithmetic never overflows. Values are immutable and hashable.

Canonical text form orders terms by descending ``z`` degree, then descending
total degree, then descending ``x`` and ``y`` exponents::

    >>> str(fricke())            # doctest: +SKIP
    'z^2 - 2*x*y*z + x^2 + y^2 - 1'

``parse_poly(str(p)) == p`` for every polynomial.
"""
from __future__ import annotations

import re
from functools import lru_cache
from types import MappingProxyType
from typing import Any, Final, Iterator, Mapping, Sequence

from trace_map_toolkit.core.errors import NotMonicInZ, PolynomialSyntaxError

__all__: Final = [
    "IntPoly3",
    "VARIABLES",
    "X",
    "Y",
    "Z",
    "chebyshev_u",
    "divide_by_monic_in_z",
    "evaluate",
    "substitute",
    "parse_poly",
]

Monomial = tuple[int, int, int]

VARIABLES: Final = ("x", "y", "z")
_VAR_INDEX: Final = {name: i for i, name in enumerate(VARIABLES)}


class IntPoly3:
    """Sparse polynomial with integer coefficients in ``x``, ``y``, ``z``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None) -> None:
        self._terms: dict[Monomial, int] = (
            {m: int(c) for m, c in terms.items() if c} if terms else {}
        )
        self._hash: int | None = None

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------
    @classmethod
    def constant(cls, value: int) -> IntPoly3:
        return cls({(0, 0, 0): value})

    @classmethod
    def variable(cls, name: str) -> IntPoly3:
        try:
            idx = _VAR_INDEX[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}; expected one of {VARIABLES}") from None
        exps = [0, 0, 0]
        exps[idx] = 1
        return cls({tuple(exps): 1})  # type: ignore[dict-item]

    @classmethod
    def _promote(cls, value: Any) -> IntPoly3:
        if isinstance(value, IntPoly3):
            return value
        if isinstance(value, int):
            return cls.constant(value)
        return NotImplemented

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, int]:
        return MappingProxyType(self._terms)

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(m == (0, 0, 0) for m in self._terms)

    @property
    def constant_term(self) -> int:
        return self._terms.get((0, 0, 0), 0)

    def degree(self, var: str | None = None) -> int:
        """Total degree, or the degree in ``var``; the zero polynomial has degree -1."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(m) for m in self._terms)
        idx = _VAR_INDEX[var]
        return max(m[idx] for m in self._terms)

    # ------------------------------------------------------------------
    # Ring operations
    # ------------------------------------------------------------------
    def __add__(self, other: Any) -> IntPoly3:
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return IntPoly3(out)

    __radd__ = __add__

    def __neg__(self) -> IntPoly3:
        return IntPoly3({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Any) -> IntPoly3:
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> IntPoly3:
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other: Any) -> IntPoly3:
        other = self._promote(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Monomial, int] = {}
        for (i1, j1, k1), c1 in self._terms.items():
            for (i2, j2, k2), c2 in other._terms.items():
                key = (i1 + i2, j1 + j2, k1 + k2)
                out[key] = out.get(key, 0) + c1 * c2
        return IntPoly3(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> IntPoly3:
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = IntPoly3.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = IntPoly3.constant(other)
        if not isinstance(other, IntPoly3):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # ------------------------------------------------------------------
    # Evaluation
    # ------------------------------------------------------------------
    def eval(self, point: Sequence[Any]) -> Any:
        """Evaluate at ``(x, y, z)``.

        Works for any scalar type closed under ``+``, ``*`` and ``** 0``:
        ``Fraction`` (exact), ``float``, ``complex``, numpy arrays, scaled
        scalars and :class:`IntPoly3` itself (which is polynomial substitution).
        """
        x, y, z = point
        if not self._terms:
            return x * 0
        dx, dy, dz = (max(m[i] for m in self._terms) for i in range(3))
        px, py, pz = _powers(x, dx), _powers(y, dy), _powers(z, dz)
        total: Any = None
        for (i, j, k), c in self._terms.items():
            term = c * (px[i] * py[j] * pz[k])
            total = term if total is None else total + term
        return total

    __call__ = eval

    # ------------------------------------------------------------------
    # Text form
    # ------------------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(
            self._terms.items(),
            key=lambda item: (-item[0][2], -sum(item[0]), -item[0][0], -item[0][1]),
        )

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for n, (mono, coeff) in enumerate(self.sorted_terms()):
            body = _format_term(mono, abs(coeff))
            if n == 0:
                parts.append(f"-{body}" if coeff < 0 else body)
            else:
                parts.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"IntPoly3({str(self)!r})"


def _powers(value: Any, n: int) -> list[Any]:
    out = [value**0]
    for _ in range(n):
        out.append(out[-1] * value)
    return out


def _format_term(mono: Monomial, coeff: int) -> str:
    factors = [
        name if e == 1 else f"{name}^{e}" for name, e in zip(VARIABLES, mono) if e
    ]
    if not factors:
        return str(coeff)
    body = "*".join(factors)
    return body if coeff == 1 else f"{coeff}*{body}"


X: Final = IntPoly3.variable("x")
Y: Final = IntPoly3.variable("y")
Z: Final = IntPoly3.variable("z")


def evaluate(p: IntPoly3, point: Sequence[Any]) -> Any:
    return p.eval(point)


def substitute(p: IntPoly3, fx: IntPoly3, fy: IntPoly3, fz: IntPoly3) -> IntPoly3:
    """``p(fx, fy, fz)`` expanded exactly."""
    result = p.eval((fx, fy, fz))
    return result if isinstance(result, IntPoly3) else IntPoly3.constant(result)


# ─────────────────────────────────────────────────────────────────────────────
# Chebyshev polynomials of the second kind
# ─────────────────────────────────────────────────────────────────────────────


@lru_cache(maxsize=512)
def chebyshev_u(n: int, var: str = "x") -> IntPoly3:
    """U_n in the variable ``var`` for any integer ``n``.

    U_{-1} = 0, U_0 = 1, U_{n+1} = 2t U_n - U_{n-1}; running the recursion
    backwards gives U_{-(n+2)} = -U_n.
    """
    if n < -1:
        return -chebyshev_u(-n - 2, var)
    t2 = 2 * IntPoly3.variable(var)
    prev, cur = IntPoly3(), IntPoly3.constant(1)
    if n == -1:
        return prev
    for _ in range(n):
        prev, cur = cur, t2 * cur - prev
    return cur


# ─────────────────────────────────────────────────────────────────────────────
# Division by a polynomial monic in z
# ─────────────────────────────────────────────────────────────────────────────


def divide_by_monic_in_z(num: IntPoly3, den: IntPoly3) -> tuple[IntPoly3, IntPoly3]:
    """Return ``(q, r)`` with ``num = q*den + r`` and ``deg_z r < deg_z den``."""
    d = den.degree("z")
    leading = {(i, j): c for (i, j, k), c in den if k == d}
    if leading != {(0, 0): 1}:
        raise NotMonicInZ(f"z-leading coefficient of {den} is not 1")

    quotient: dict[Monomial, int] = {}
    rem = num
    while rem and (m := rem.degree("z")) >= d:
        step = IntPoly3({(i, j, k - d): c for (i, j, k), c in rem if k == m})
        for mono, c in step:
            quotient[mono] = quotient.get(mono, 0) + c
        rem = rem - step * den
    return IntPoly3(quotient), rem


# ─────────────────────────────────────────────────────────────────────────────
# Parser
# ─────────────────────────────────────────────────────────────────────────────

_TOKEN_RE: Final = re.compile(r"\s*(?:(\d+)|([xyz])|(\*\*|[-+*^()]))")


def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise PolynomialSyntaxError(f"unexpected character at {pos}: {text[pos:]!r}")
        tok = next(g for g in match.groups() if g is not None)
        tokens.append("^" if tok == "**" else tok)
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise PolynomialSyntaxError(f"unexpected end of input in {self.text!r}")
        self.pos += 1
        return tok

    def parse(self) -> IntPoly3:
        if not self.tokens:
            raise PolynomialSyntaxError("empty polynomial")
        result = self.expr()
        if self.peek() is not None:
            raise PolynomialSyntaxError(f"trailing input {self.peek()!r} in {self.text!r}")
        return result

    def expr(self) -> IntPoly3:
        result = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> IntPoly3:
        result = self.unary()
        while True:
            tok = self.peek()
            if tok == "*":
                self.take()
            elif tok is None or not (tok.isdigit() or tok in _VAR_INDEX or tok == "("):
                return result
            # implicit multiplication: "2xy", "x(y+1)"
            result = result * self.unary()

    def unary(self) -> IntPoly3:
        tok = self.peek()
        if tok in ("+", "-"):
            self.take()
            operand = self.unary()
            return -operand if tok == "-" else operand
        return self.power()

    def power(self) -> IntPoly3:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            exp = self.take()
            if not exp.isdigit():
                raise PolynomialSyntaxError(f"exponent must be a nonnegative integer, got {exp!r}")
            return base ** int(exp)
        return base

    def atom(self) -> IntPoly3:
        tok = self.take()
        if tok.isdigit():
            return IntPoly3.constant(int(tok))
        if tok in _VAR_INDEX:
            return IntPoly3.variable(tok)
        if tok == "(":
            inner = self.expr()
            if self.take() != ")":
                raise PolynomialSyntaxError(f"missing ')' in {self.text!r}")
            return inner
        raise PolynomialSyntaxError(f"unexpected token {tok!r} in {self.text!r}")


def parse_poly(text: str) -> IntPoly3:
    return _Parser(text).parse()

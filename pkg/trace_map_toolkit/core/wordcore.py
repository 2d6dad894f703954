"""Free group F₂ on the generators ``a`` and ``b``.

Words are stored as run-length blocks ``(generator, exponent)`` and are always
freely reduced. Substitutions (endomorphisms of F₂) are pairs of image words.

Text forms::

    word          "abAB"          (A = a⁻¹, B = b⁻¹, "e" = empty word)
    substitution  "a->b;b->ba"

The product of substitutions follows the convention ``ϱ₁ϱ₂ := ϱ₂ ∘ ϱ₁``:
``compose(ϱ₁, ϱ₂)`` applies ϱ₁'s rule first and then ϱ₂ to the result, which
makes :func:`substitution_matrix` a monoid homomorphism.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Final, Iterable, Iterator, Literal

from trace_map_toolkit.core.errors import RuleSyntaxError

__all__: Final = [
    "Word",
    "Substitution",
    "IntMatrix2",
    "IDENTITY",
    "reduce",
    "concat",
    "invert",
    "commutator",
    "apply",
    "compose",
    "power",
    "substitution_matrix",
    "generator_U",
    "generator_sigma",
    "generator_P",
    "gen_fibonacci",
    "parse_word",
    "parse_substitution",
    "format_substitution",
    "cyclically_reduce",
    "are_conjugate",
    "commutator_image_sign",
]


Generator = Literal["a", "b"]
Block = tuple[str, int]

GENERATORS: Final = ("a", "b")
_LETTER_TO_SIGNED: Final = {"a": ("a", 1), "b": ("b", 1), "A": ("a", -1), "B": ("b", -1)}
_EMPTY_WORD_TEXT: Final = "e"


# ─────────────────────────────────────────────────────────────────────────────
# Words
# ─────────────────────────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class Word:
    """Freely reduced element of F₂; build it through :func:`reduce`."""

    blocks: tuple[Block, ...] = ()

    # ---------------------------------------------------------------- builders
    @classmethod
    def identity(cls) -> Word:
        return cls()

    @classmethod
    def letter(cls, generator: str, exponent: int = 1) -> Word:
        return reduce([(generator, exponent)])

    @classmethod
    def parse(cls, text: str) -> Word:
        return parse_word(text)

    # ------------------------------------------------------------- group ops
    def __mul__(self, other: Word) -> Word:
        return concat(self, other)

    def __invert__(self) -> Word:
        return invert(self)

    def __pow__(self, n: int) -> Word:
        if n == 0:
            return Word()
        if n < 0:
            return invert(self) ** (-n)
        half = self ** (n // 2)
        squared = concat(half, half)
        return concat(squared, self) if n % 2 else squared

    # ------------------------------------------------------------- inspection
    def __len__(self) -> int:
        return sum(abs(exp) for _, exp in self.blocks)

    def is_identity(self) -> bool:
        return not self.blocks

    def letters(self) -> Iterator[tuple[str, int]]:
        """Yield ``(generator, ±1)`` one letter at a time."""
        for gen, exp in self.blocks:
            step = 1 if exp > 0 else -1
            for _ in range(abs(exp)):
                yield gen, step

    def count(self, generator: str) -> int:
        """Signed exponent sum of ``generator``."""
        return sum(exp for gen, exp in self.blocks if gen == generator)

    def has_inverse_letters(self) -> bool:
        return any(exp < 0 for _, exp in self.blocks)

    def __str__(self) -> str:
        if not self.blocks:
            return _EMPTY_WORD_TEXT
        return "".join(
            (gen if exp > 0 else gen.upper()) * abs(exp) for gen, exp in self.blocks
        )


def reduce(raw: Iterable[tuple[str, int]]) -> Word:
    """Freely reduce a sequence of ``(generator, exponent)`` pairs."""
    stack: list[Block] = []
    for gen, exp in raw:
        if gen not in GENERATORS:
            raise RuleSyntaxError(f"unknown generator {gen!r}")
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            merged = stack[-1][1] + exp
            stack.pop()
            if merged:
                stack.append((gen, merged))
        else:
            stack.append((gen, exp))
    return Word(tuple(stack))


def concat(u: Word, v: Word) -> Word:
    return reduce((*u.blocks, *v.blocks))


def invert(w: Word) -> Word:
    return Word(tuple((gen, -exp) for gen, exp in reversed(w.blocks)))


def commutator(u: Word, v: Word) -> Word:
    """K(u, v) = u v u⁻¹ v⁻¹."""
    return reduce((*u.blocks, *v.blocks, *invert(u).blocks, *invert(v).blocks))


def cyclically_reduce(w: Word) -> Word:
    """Strip ``c … c⁻¹`` wrappers and merge the first and last block."""
    blocks = list(w.blocks)
    while len(blocks) >= 2 and blocks[0][0] == blocks[-1][0]:
        gen = blocks[0][0]
        merged = blocks[0][1] + blocks[-1][1]
        blocks = blocks[1:-1]
        if merged:
            blocks.insert(0, (gen, merged))
    return Word(tuple(blocks))


def are_conjugate(u: Word, v: Word) -> bool:
    """Conjugacy in F₂: cyclic reductions agree up to rotation."""
    cu, cv = str(cyclically_reduce(u)), str(cyclically_reduce(v))
    if len(cu) != len(cv):
        return False
    return cu == cv or cv in cu + cu


def parse_word(text: str) -> Word:
    cleaned = "".join(text.split())
    if cleaned in ("", _EMPTY_WORD_TEXT):
        return Word()
    try:
        return reduce(_LETTER_TO_SIGNED[ch] for ch in cleaned)
    except KeyError as exc:
        raise RuleSyntaxError(f"invalid letter {exc.args[0]!r} in word {text!r}") from None


# ─────────────────────────────────────────────────────────────────────────────
# Substitutions
# ─────────────────────────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class Substitution:
    """Endomorphism of F₂ given by the images of ``a`` and ``b``."""

    image_a: Word
    image_b: Word

    def image(self, generator: str) -> Word:
        return self.image_a if generator == "a" else self.image_b

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def __mul__(self, other: Substitution) -> Substitution:
        return compose(self, other)

    def is_positive(self) -> bool:
        """True when both images are non-empty and free of inverse letters."""
        return all(
            not img.is_identity() and not img.has_inverse_letters()
            for img in (self.image_a, self.image_b)
        )

    @classmethod
    def parse(cls, text: str) -> Substitution:
        return parse_substitution(text)

    def __str__(self) -> str:
        return format_substitution(self)


IDENTITY: Final = Substitution(Word.letter("a"), Word.letter("b"))


def apply(rho: Substitution, w: Word) -> Word:
    """Homomorphic image ϱ(w)."""
    raw: list[Block] = []
    for gen, exp in w.blocks:
        raw.extend((rho.image(gen) ** exp).blocks)
    return reduce(raw)


def compose(rho1: Substitution, rho2: Substitution) -> Substitution:
    """ϱ₁ϱ₂: first ϱ₁'s rule, then ϱ₂ applied to the result."""
    return Substitution(apply(rho2, rho1.image_a), apply(rho2, rho1.image_b))


def power(rho: Substitution, n: int) -> Substitution:
    if n < 0:
        raise ValueError("substitutions form a monoid; negative powers are undefined")
    result = IDENTITY
    for _ in range(n):
        result = compose(result, rho)
    return result


def parse_substitution(text: str) -> Substitution:
    images: dict[str, Word] = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        lhs, sep, rhs = part.partition("->")
        lhs = lhs.strip()
        if not sep or lhs not in GENERATORS:
            raise RuleSyntaxError(f"expected 'a->…' or 'b->…', got {part!r}")
        if lhs in images:
            raise RuleSyntaxError(f"generator {lhs!r} defined twice in {text!r}")
        images[lhs] = parse_word(rhs)
    missing = [g for g in GENERATORS if g not in images]
    if missing:
        raise RuleSyntaxError(f"rule {text!r} lacks an image for {', '.join(missing)}")
    return Substitution(images["a"], images["b"])


def format_substitution(rho: Substitution) -> str:
    return f"a->{rho.image_a};b->{rho.image_b}"


# ─────────────────────────────────────────────────────────────────────────────
# Substitution matrices
# ─────────────────────────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class IntMatrix2:
    """2×2 integer matrix, row-major ``[[a, b], [c, d]]``."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> IntMatrix2:
        (a, b), (c, d) = (tuple(r) for r in rows)
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> IntMatrix2:
        return cls(1, 0, 0, 1)

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def is_unimodular(self) -> bool:
        """Membership in Gl(2, ℤ)."""
        return abs(self.det()) == 1

    def transpose(self) -> IntMatrix2:
        return IntMatrix2(self.a, self.c, self.b, self.d)

    def __matmul__(self, other: IntMatrix2) -> IntMatrix2:
        return IntMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )


def substitution_matrix(rho: Substitution) -> IntMatrix2:
    """Rows are the signed letter counts of ϱ(a) and ϱ(b)."""
    wa, wb = rho.image_a, rho.image_b
    return IntMatrix2(wa.count("a"), wa.count("b"), wb.count("a"), wb.count("b"))


def commutator_image_sign(rho: Substitution) -> int | None:
    """Return ±1 if ϱ(K(a,b)) is conjugate to K(a,b)^{±1}, else ``None``.

    For automorphisms the sign equals ``det R_ϱ``.
    """
    k = commutator(Word.letter("a"), Word.letter("b"))
    image = apply(rho, k)
    if are_conjugate(image, k):
        return 1
    if are_conjugate(image, invert(k)):
        return -1
    return None


# ─────────────────────────────────────────────────────────────────────────────
# Named substitutions
# ─────────────────────────────────────────────────────────────────────────────


def generator_U() -> Substitution:
    """a → ab, b → b."""
    return Substitution(Word.parse("ab"), Word.letter("b"))


def generator_sigma() -> Substitution:
    """a → a⁻¹, b → b."""
    return Substitution(Word.letter("a", -1), Word.letter("b"))


def generator_P() -> Substitution:
    """a → b, b → a."""
    return Substitution(Word.letter("b"), Word.letter("a"))


def gen_fibonacci(k: int, ell: int) -> Substitution:
    """Generalised Fibonacci rule a → b, b → b^ℓ a^k."""
    return Substitution(Word.letter("b"), reduce([("b", ell), ("a", k)]))

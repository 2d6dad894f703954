"""Tight-binding spectra of periodic approximants.

The discrete Schrödinger operator ``ψ_{j+1} + ψ_{j-1} + V_j ψ_j = E ψ_j`` with
potential ``V1`` on letter ``a`` and ``V2`` on letter ``b`` is solved on the
periodic approximant ``ϱ^{n-1}(b)`` of the rule a → b, b → b^ℓ a^k. At energy
``E`` the half-trace of the period transfer product is obtained by iterating
the closed-form trace map from ``(½(E-V1), ½(E-V2), ½(E-V1)(E-V2) - 1)``; the
spectrum is where that half-trace has magnitude at most 1.

Band edges come from a grid scan of ``|2x| - 2`` refined by bisection. The
Bloch eigenvalues at the two band-edge phases are used to seed the grid and to
count how many bands each detected interval holds, which gives the gap IDOS
values ``m/g_n`` exactly.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import repeat
from typing import Any, Final

import numpy as np
import scipy.linalg
import scipy.optimize

from trace_map_toolkit.core.errors import (
    InverseLettersUnsupported,
    NonPositiveLength,
    ResolutionTooCoarse,
)
from trace_map_toolkit.core.fibfamily import FibParams, closed_form_map
from trace_map_toolkit.core.wordcore import Word, apply, gen_fibonacci

__all__: Final = [
    "TightBindingChain",
    "Band",
    "Gap",
    "IdosStaircase",
    "transfer_matrix",
    "trace_coords",
    "fib_sequence",
    "fib_numbers",
    "approximant_length",
    "approximant_word",
    "halftrace_at",
    "transfer_product",
    "bloch_bands",
    "band_structure",
    "decompose_idos",
    "assign_labels",
]

_LOGGER = logging.getLogger(__name__)

DEFAULT_GRID_POINTS: Final = 10_000
DEFAULT_TOL: Final = 1e-10
_WINDOW_MARGIN: Final = 2.5
# gaps narrower than this many tolerances count as closed
_CLOSED_GAP_FACTOR: Final = 10.0

Scalar = Any


# ─────────────────────────────────────────────────────────────────────────────
# Chain and staircase
# ─────────────────────────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class TightBindingChain:
    """Potentials ``V1`` (letter a) and ``V2`` (letter b) on the generation-``n`` approximant."""

    v1: Scalar = 0
    v2: Scalar = 2
    k: int = 1
    ell: int = 2
    generation: int = 1

    def __post_init__(self) -> None:
        if self.k < 0 or self.ell < 0 or self.k + self.ell == 0:
            raise InverseLettersUnsupported(
                f"approximants need a positive rule, got k={self.k}, l={self.ell}"
            )
        if self.generation < 1:
            raise NonPositiveLength(f"generation must be at least 1, got {self.generation}")

    @property
    def params(self) -> FibParams:
        return FibParams(self.k, self.ell)

    @property
    def word(self) -> Word:
        return approximant_word(self.k, self.ell, self.generation)

    @property
    def length(self) -> int:
        return approximant_length(self.ell, self.generation, self.k)

    @property
    def invariant(self) -> Scalar:
        """Fricke character along the energy axis, ¼(V2 - V1)²."""
        return (self.v2 - self.v1) ** 2 / 4

    def potentials(self) -> np.ndarray:
        values = {"a": float(self.v1), "b": float(self.v2)}
        return np.array([values[gen] for gen, _ in self.word.letters()], dtype=float)

    def as_float(self) -> TightBindingChain:
        return replace(self, v1=float(self.v1), v2=float(self.v2))


@dataclass(frozen=True, slots=True)
class Band:
    e_low: float
    e_high: float
    count: int
    cumulative: int


@dataclass(frozen=True, slots=True)
class Gap:
    e_low: float
    e_high: float
    idos_num: int
    idos_den: int
    label: tuple[int, int] | None = None

    @property
    def closed(self) -> bool:
        return self.e_low == self.e_high

    @property
    def idos(self) -> Fraction:
        return Fraction(self.idos_num, self.idos_den)


@dataclass(frozen=True, slots=True)
class IdosStaircase:
    """Bands in energy order with the open gaps between them.

    ``closed_gaps`` holds places where two Bloch bands touch within tolerance;
    they are kept apart from ``gaps`` so an open-gap count stays meaningful.
    """

    length: int
    bands: tuple[Band, ...]
    gaps: tuple[Gap, ...]
    closed_gaps: tuple[Gap, ...] = field(default=())

    @property
    def band_count(self) -> int:
        return sum(b.count for b in self.bands)

    def rows(self) -> list[dict[str, Any]]:
        """Energy-ordered rows for the CSV writer."""
        rows: list[dict[str, Any]] = []
        for band in self.bands:
            rows.append(
                {
                    "E_low": band.e_low,
                    "E_high": band.e_high,
                    "type": "band",
                    "idos_num": band.cumulative,
                    "idos_den": self.length,
                    "mu": "",
                    "nu": "",
                }
            )
        for gap in (*self.gaps, *self.closed_gaps):
            mu, nu = gap.label if gap.label is not None else ("", "")
            rows.append(
                {
                    "E_low": gap.e_low,
                    "E_high": gap.e_high,
                    "type": "gap",
                    "idos_num": gap.idos_num,
                    "idos_den": gap.idos_den,
                    "mu": mu,
                    "nu": nu,
                }
            )
        rows.sort(key=lambda r: (r["E_low"], r["type"] == "band"))
        return rows


# ─────────────────────────────────────────────────────────────────────────────
# Transfer matrices and trace coordinates
# ─────────────────────────────────────────────────────────────────────────────


def transfer_matrix(energy: Scalar, potential: Scalar) -> np.ndarray:
    """[[E - V, -1], [1, 0]]; determinant 1."""
    return np.array([[energy - potential, -1], [1, 0]])


def trace_coords(energy: Scalar, v1: Scalar, v2: Scalar) -> tuple[Scalar, Scalar, Scalar]:
    x = (energy - v1) / 2
    y = (energy - v2) / 2
    z = (energy - v1) * (energy - v2) / 2 - 1
    return x, y, z


def fib_sequence(ell: int, n: int, k: int = 1) -> list[int]:
    """f_0 … f_n with f_0 = 0, f_1 = 1, f_{m+1} = ℓ f_m + k f_{m-1}."""
    if n < 0:
        raise NonPositiveLength(f"index must be non-negative, got {n}")
    seq = [0, 1]
    while len(seq) <= n:
        seq.append(ell * seq[-1] + k * seq[-2])
    return seq[: n + 1]


def fib_numbers(ell: int, n: int, k: int = 1) -> int:
    return fib_sequence(ell, n, k)[n]


def approximant_length(ell: int, n: int, k: int = 1) -> int:
    """g_n = f_n + k f_{n-1}: f_n letters b and k f_{n-1} letters a."""
    if n < 1:
        raise NonPositiveLength(f"generation must be at least 1, got {n}")
    seq = fib_sequence(ell, n, k)
    return seq[n] + k * seq[n - 1]


def approximant_word(k: int, ell: int, n: int) -> Word:
    """ϱ^{n-1}(b); generation 1 is the single letter b."""
    if n < 1:
        raise NonPositiveLength(f"generation must be at least 1, got {n}")
    rho = gen_fibonacci(k, ell)
    word = Word.letter("b")
    for _ in range(n - 1):
        word = apply(rho, word)
    return word


def halftrace_at(chain: TightBindingChain, energy: Scalar) -> Scalar:
    """½ tr of the period transfer product, via n-1 trace-map steps.

    Works for floats, numpy arrays and :class:`~fractions.Fraction` alike.
    """
    trace_map = closed_form_map(chain.params)
    point = trace_coords(energy, chain.v1, chain.v2)
    for _ in range(chain.generation - 1):
        point = trace_map(point)
    return point[1]


def transfer_product(word: Word, energy: Scalar, v1: Scalar, v2: Scalar) -> np.ndarray:
    """Explicit product over the letters of ``word``, later sites on the left."""
    mats = {"a": transfer_matrix(energy, v1), "b": transfer_matrix(energy, v2)}
    result = np.eye(2, dtype=np.result_type(mats["a"], mats["b"]))
    for gen, step in word.letters():
        if step < 0:
            raise InverseLettersUnsupported(f"word {word} has inverse letters")
        result = mats[gen] @ result
    return result


# ─────────────────────────────────────────────────────────────────────────────
# Bloch bands
# ─────────────────────────────────────────────────────────────────────────────


def _bloch_hamiltonian(potentials: np.ndarray, phase: float) -> np.ndarray:
    g = len(potentials)
    ham = np.diag(potentials.astype(complex))
    off = np.ones(g - 1, dtype=complex)
    ham += np.diag(off, 1) + np.diag(off, -1)
    ham[0, g - 1] += np.exp(-1j * phase)
    ham[g - 1, 0] += np.exp(1j * phase)
    return ham


def bloch_bands(chain: TightBindingChain) -> np.ndarray:
    """``(g, 2)`` array of Bloch band intervals from the eigenvalues at phases 0 and π."""
    potentials = chain.potentials()
    edges = np.concatenate(
        [scipy.linalg.eigvalsh(_bloch_hamiltonian(potentials, phase)) for phase in (0.0, math.pi)]
    )
    return np.sort(edges).reshape(-1, 2)


# ─────────────────────────────────────────────────────────────────────────────
# Band finding
# ─────────────────────────────────────────────────────────────────────────────


def _band_function_array(chain: TightBindingChain, energies: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        values = np.abs(2 * halftrace_at(chain, energies)) - 2
    return np.where(np.isfinite(values), values, np.inf)


def _band_function(chain: TightBindingChain, energy: float) -> float:
    return float(_band_function_array(chain, np.array([energy]))[0])


def _scan(chain: TightBindingChain, energies: np.ndarray, jobs: int) -> np.ndarray:
    if jobs <= 1 or len(energies) < 4 * jobs:
        return _band_function_array(chain, energies)
    chunks = np.array_split(energies, 4 * jobs)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_band_function_array, repeat(chain), chunks))
    return np.concatenate(parts)


def _refine(chain: TightBindingChain, outside: float, inside: float, tol: float) -> float:
    return float(
        scipy.optimize.bisect(lambda e: _band_function(chain, e), outside, inside, xtol=tol)
    )


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Inclusive index ranges of consecutive True entries."""
    padded = np.concatenate([[False], mask, [False]]).astype(np.int8)
    changes = np.flatnonzero(np.diff(padded))
    return [(int(s), int(e) - 1) for s, e in zip(changes[::2], changes[1::2])]


def _seed_points(bloch: np.ndarray, lo: float, hi: float, tol: float) -> np.ndarray:
    seeds = [bloch.mean(axis=1)]
    if len(bloch) > 1:
        widths = bloch[1:, 0] - bloch[:-1, 1]
        mids = (bloch[1:, 0] + bloch[:-1, 1]) / 2
        seeds.append(mids[widths > _CLOSED_GAP_FACTOR * tol])
    points = np.concatenate(seeds)
    return points[(points > lo) & (points < hi)]


def _detect_intervals(
    chain: TightBindingChain, grid: np.ndarray, values: np.ndarray, tol: float
) -> list[tuple[float, float]]:
    intervals: list[tuple[float, float]] = []
    last = len(grid) - 1
    for start, stop in _runs(values <= 0):
        if start == 0 or stop == last:
            _LOGGER.warning("spectrum reaches the edge of the energy window; edge clipped")
        if start == 0:
            e_low = float(grid[0])
        else:
            e_low = _refine(chain, grid[start - 1], grid[start], tol)
        if stop == last:
            e_high = float(grid[last])
        else:
            e_high = _refine(chain, grid[stop + 1], grid[stop], tol)
        if intervals and e_low - intervals[-1][1] <= _CLOSED_GAP_FACTOR * tol:
            intervals[-1] = (intervals[-1][0], e_high)
        else:
            intervals.append((e_low, e_high))
    return intervals


def band_structure(
    chain: TightBindingChain,
    energy_window: tuple[float, float] | None = None,
    resolution: int = DEFAULT_GRID_POINTS,
    tol: float = DEFAULT_TOL,
    *,
    jobs: int = 1,
    seed_with_bloch: bool = True,
) -> IdosStaircase:
    """Bands and gaps of the approximant, with gap IDOS values ``m/g_n``.

    Raises :class:`ResolutionTooCoarse` when the scan and the Bloch band count
    disagree, which happens when a band or gap is narrower than the grid.
    """
    chain = chain.as_float()
    g = chain.length
    if energy_window is None:
        lo = min(chain.v1, chain.v2) - _WINDOW_MARGIN
        hi = max(chain.v1, chain.v2) + _WINDOW_MARGIN
    else:
        lo, hi = map(float, energy_window)
    if resolution < 2:
        raise ResolutionTooCoarse(f"grid needs at least 2 points, got {resolution}")

    bloch = bloch_bands(chain)
    grid = np.linspace(lo, hi, resolution)
    if seed_with_bloch:
        grid = np.unique(np.concatenate([grid, _seed_points(bloch, lo, hi, tol)]))

    values = _scan(chain, grid, jobs)
    intervals = _detect_intervals(chain, grid, values, tol)
    _LOGGER.debug(
        "generation %d: %d spectral intervals for %d Bloch bands",
        chain.generation,
        len(intervals),
        g,
    )

    # assign every Bloch band to the interval holding its midpoint
    slack = max(_CLOSED_GAP_FACTOR * tol, 1e-9)
    owner: list[int] = []
    for mid in bloch.mean(axis=1):
        hits = [i for i, (a, b) in enumerate(intervals) if a - slack <= mid <= b + slack]
        if not hits:
            raise ResolutionTooCoarse(
                f"Bloch band at E={mid:.6g} missed by the scan; refine the grid"
            )
        owner.append(hits[0])
    counts = [owner.count(i) for i in range(len(intervals))]
    if any(c == 0 for c in counts):
        raise ResolutionTooCoarse("scan found a spectral interval without a Bloch band")

    bands: list[Band] = []
    gaps: list[Gap] = []
    closed: list[Gap] = []
    cumulative = 0
    for i, ((e_low, e_high), count) in enumerate(zip(intervals, counts)):
        if i:
            gaps.append(Gap(intervals[i - 1][1], e_low, cumulative, g))
        members = [j for j, o in enumerate(owner) if o == i]
        for inner, j in enumerate(members[:-1], start=1):
            width = bloch[j + 1, 0] - bloch[j, 1]
            if width > _CLOSED_GAP_FACTOR * tol:
                raise ResolutionTooCoarse(
                    f"gap of width {width:.3g} near E={bloch[j, 1]:.6g} not resolved; "
                    "refine the grid"
                )
            touch = float((bloch[j, 1] + bloch[j + 1, 0]) / 2)
            closed.append(Gap(touch, touch, cumulative + inner, g))
        cumulative += count
        bands.append(Band(e_low, e_high, count, cumulative))

    if closed and chain.v1 != chain.v2:
        _LOGGER.warning("%d closed gap(s) at generation %d", len(closed), chain.generation)
    return IdosStaircase(g, tuple(bands), tuple(gaps), tuple(closed))


# ─────────────────────────────────────────────────────────────────────────────
# Gap labels
# ─────────────────────────────────────────────────────────────────────────────


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return a, 1, 0
    g, s, t = _egcd(b, a % b)
    return g, t, s - (a // b) * t


def decompose_idos(m: int, f_n: int, f_prev: int) -> tuple[int, int]:
    """(μ, ν) with m = μ f_n + ν f_{n-1}, minimal |ν| then minimal |μ|."""
    if m == 0:
        return 0, 0
    g, s, t = _egcd(f_n, f_prev)
    if m % g:
        raise ValueError(f"{m} is not a multiple of gcd({f_n}, {f_prev})")
    mu0, nu0 = s * (m // g), t * (m // g)
    step_mu, step_nu = f_prev // g, f_n // g
    if step_nu == 0:
        return mu0, nu0
    # ν = ν0 - j·step_nu; the best j sits next to ν0/step_nu
    centre = nu0 // step_nu
    candidates = [(mu0 + j * step_mu, nu0 - j * step_nu) for j in (centre - 1, centre, centre + 1)]
    return min(candidates, key=lambda pair: (abs(pair[1]), abs(pair[0])))


def assign_labels(stair: IdosStaircase, ell: int, n: int, k: int = 1) -> IdosStaircase:
    """Label every gap ``m/g_n`` with ``(μ, ν)``, m = μ f_n + ν f_{n-1}.

    The decomposition holds for k = 1 only; other k raise ``ValueError``.
    """
    if k != 1:
        raise ValueError(f"gap labels need k = 1, got k = {k}")
    seq = fib_sequence(ell, n)
    f_n, f_prev = seq[n], seq[n - 1]

    def label(gap: Gap) -> Gap:
        return replace(gap, label=decompose_idos(gap.idos_num, f_n, f_prev))

    return replace(
        stair,
        gaps=tuple(label(g) for g in stair.gaps),
        closed_gaps=tuple(label(g) for g in stair.closed_gaps),
    )


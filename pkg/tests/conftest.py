# tests/conftest.py

import random
from typing import Callable

import numpy as np
import pytest

from trace_map_toolkit.core.wordcore import Substitution, Word, reduce


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture
def np_rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def random_word(rng: random.Random) -> Callable[..., Word]:
    """Random reduced word with up to ``max_len`` raw letters, inverses allowed."""

    def make(max_len: int = 12, inverses: bool = True) -> Word:
        length = rng.randint(0, max_len)
        exps = (1, -1) if inverses else (1,)
        return reduce((rng.choice("ab"), rng.choice(exps)) for _ in range(length))

    return make


@pytest.fixture
def random_substitution(random_word: Callable[..., Word]) -> Callable[..., Substitution]:
    def make(max_len: int = 4, inverses: bool = True) -> Substitution:
        return Substitution(random_word(max_len, inverses), random_word(max_len, inverses))

    return make


@pytest.fixture
def random_sl2(np_rng: np.random.Generator) -> Callable[[], np.ndarray]:
    """Random complex 2×2 matrix with determinant 1."""

    def make() -> np.ndarray:
        m = np_rng.normal(size=(2, 2)) + 1j * np_rng.normal(size=(2, 2))
        return m / np.sqrt(np.linalg.det(m))

    return make


@pytest.fixture(autouse=True)
def _isolated_settings(tmp_path, monkeypatch):
    """Keep tests away from the real per-user settings file and environment overrides."""
    monkeypatch.setenv("TMT_SETTINGS_PATH", str(tmp_path / "settings.json"))
    monkeypatch.delenv("TMT_LOG_LEVEL", raising=False)
    monkeypatch.delenv("TMT_JOBS", raising=False)

"""Per-user defaults for the command line.

The JSON file (``user_config_dir("Trace Map Toolkit")/settings.json``, or the
path in ``TMT_SETTINGS_PATH``) holds non-secret numeric defaults:

    • grid_points        – energy grid size for ``idos``
    • band_tol           – bisection tolerance for band edges
    • v1, v2             – default on-site potentials
    • jobs               – worker processes for grid scans
    • reunitarize_every  – matrix-orbit polar projection period
    • log_level, log_to_file, progress

Precedence: command-line flag > environment (``TMT_LOG_LEVEL``, ``TMT_JOBS``,
optionally from ``.env``) > JSON > built-in default.

    Settings.load()   → instance
    s.save()          → writes JSON atomically
"""
from __future__ import annotations

import json
import logging
import os
import tempfile
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Final

from typing_extensions import Self

from dotenv import load_dotenv
from platformdirs import user_config_dir

__all__: Final = ["Settings", "SETTINGS_ENV_VAR"]

_LOGGER = logging.getLogger(__name__)

_APP_NAME: Final = "Trace Map Toolkit"
_FILE_NAME: Final = "settings.json"
SETTINGS_ENV_VAR: Final = "TMT_SETTINGS_PATH"
_ENV_LOG_LEVEL: Final = "TMT_LOG_LEVEL"
_ENV_JOBS: Final = "TMT_JOBS"


@dataclass
class Settings:
    # ========= Spectra ========= #
    grid_points: int = 10_000
    band_tol: float = 1e-10
    v1: float = 0.0
    v2: float = 2.0

    # ========= Execution ========= #
    jobs: int = 1
    reunitarize_every: int = 50

    # ========= Output ========= #
    log_level: str = "INFO"
    log_to_file: bool = True
    progress: bool = True

    # --- internal (not serialised) --- #
    _path: Path | None = field(default=None, init=False, repr=False, compare=False)

    # ------------------------------------------------------------------#
    #  Persistence                                                       #
    # ------------------------------------------------------------------#
    @classmethod
    def _cfg_path(cls) -> Path:
        if custom := os.getenv(SETTINGS_ENV_VAR):
            return Path(custom).expanduser()
        return Path(user_config_dir(_APP_NAME)) / _FILE_NAME

    @classmethod
    def load(cls) -> Self:
        path = cls._cfg_path()
        try:
            data = json.loads(path.read_text("utf-8")) if path.exists() else {}
        except (json.JSONDecodeError, UnicodeDecodeError):
            _LOGGER.warning("settings file %s is corrupt; using defaults", path)
            data = {}
        if not isinstance(data, dict):
            _LOGGER.warning("settings file %s does not hold an object; using defaults", path)
            data = {}

        # drop keys that are not fields
        allowed = {f.name for f in fields(cls) if not f.name.startswith("_")}
        data = {k: v for k, v in data.items() if k in allowed}

        inst = cls(**data)
        inst._path = path
        inst._apply_env()
        return inst

    @staticmethod
    def load_dotenv(dotenv_path: str | Path | None = None) -> None:
        """Load variables from a .env file without overriding the environment."""
        load_dotenv(dotenv_path, override=False)

    def as_dict(self) -> dict[str, Any]:
        return asdict(
            self,
            dict_factory=lambda items: {k: v for k, v in items if not k.startswith("_")},
        )

    def save(self) -> None:
        if self._path is None:
            self._path = self._cfg_path()
        self._path.parent.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile(
            "w", dir=self._path.parent, delete=False, encoding="utf-8", suffix=".tmp"
        ) as tmp:
            json.dump(self.as_dict(), tmp, indent=2)
        Path(tmp.name).replace(self._path)

    # ------------------------------------------------------------------#
    #  Environment overrides                                             #
    # ------------------------------------------------------------------#
    def _apply_env(self) -> None:
        if level := os.getenv(_ENV_LOG_LEVEL):
            self.log_level = level.upper()
        if jobs := os.getenv(_ENV_JOBS):
            try:
                self.jobs = max(1, int(jobs))
            except ValueError:
                _LOGGER.warning("ignoring %s=%r (not an integer)", _ENV_JOBS, jobs)

    @property
    def path(self) -> Path | None:
        return self._path

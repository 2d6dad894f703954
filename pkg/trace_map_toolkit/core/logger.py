"""Logging setup shared by the command line and the library.

Call :func:`configure_logging` once, early in ``__main__.py``. It installs a
coloured console handler on *stderr* (stdout is reserved for command output)
and, unless disabled, a rotating file handler under the user's log directory
(``~/.local/state/Trace Map Toolkit/log/tmt.log`` on Linux,
``%LOCALAPPDATA%\\Trace Map Toolkit\\Logs\\tmt.log`` on Windows, etc.).

Log records are UTF-8, max 1 MiB per file, with 3 backup files. Calling
:func:`configure_logging` again replaces the handlers instead of stacking them.
"""
from __future__ import annotations

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Final

import coloredlogs
from platformdirs import user_log_dir

__all__: Final = ["configure_logging", "get_log_path", "get_logger"]

_APP_NAME: Final = "Trace Map Toolkit"
_LOG_FILE_NAME: Final = "tmt.log"
_MAX_BYTES: Final = 1 * 1024 * 1024  # 1 MiB
_BACKUP_COUNT: Final = 3

_FMT: Final = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
_DATEFMT: Final = "%Y-%m-%d %H:%M:%S"

# marks handlers we own so a second call can find and drop them
_HANDLER_TAG: Final = "_tmt_handler"


def get_log_path(custom_path: str | Path | None = None) -> Path:
    if custom_path is not None:
        return Path(custom_path).expanduser().resolve()
    log_dir = Path(user_log_dir(_APP_NAME))
    log_dir.mkdir(parents=True, exist_ok=True)
    return log_dir / _LOG_FILE_NAME


def _drop_own_handlers(root: logging.Logger) -> None:
    for handler in list(root.handlers):
        if getattr(handler, _HANDLER_TAG, False):
            root.removeHandler(handler)
            handler.close()


def configure_logging(
    level: str | int = "INFO",
    *,
    log_to_file: bool = True,
    log_path: str | Path | None = None,
) -> None:
    """Console (coloured, stderr) plus optional rotating file, one format for both."""
    root = logging.getLogger()
    numeric = level if isinstance(level, int) else logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        raise ValueError(f"unknown log level {level!r}")
    _drop_own_handlers(root)
    root.setLevel(numeric)

    # stderr
    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(
        coloredlogs.ColoredFormatter(fmt=_FMT, datefmt=_DATEFMT)
        if sys.stderr.isatty()
        else logging.Formatter(fmt=_FMT, datefmt=_DATEFMT)
    )
    setattr(console, _HANDLER_TAG, True)
    root.addHandler(console)

    if log_to_file:
        # rotating 1 MiB × 3
        file_handler = RotatingFileHandler(
            get_log_path(log_path),
            maxBytes=_MAX_BYTES,
            backupCount=_BACKUP_COUNT,
            encoding="utf-8",
        )
        file_handler.setFormatter(logging.Formatter(fmt=_FMT, datefmt=_DATEFMT))
        setattr(file_handler, _HANDLER_TAG, True)
        root.addHandler(file_handler)


def get_logger(name: str | None = None) -> logging.Logger:
    return logging.getLogger(name)

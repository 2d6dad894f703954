"""Command registry (core layer).

Subcommands are classes deriving from :class:`BaseCommand`. Built-in ones live
in :mod:`trace_map_toolkit.commands`; third-party packages can add more by
exposing an entry point in the group ``trace_map_toolkit.commands``.

The CLI asks :class:`CommandManager` for the available commands, lets each
one declare its flags, and calls :pycode:`command.run(args, settings)`.

Example *pyproject.toml* entry::

    [tool.poetry.plugins."trace_map_toolkit.commands"]
    my-scan = "my_package.scan:MyScanCommand"
"""
from __future__ import annotations

import argparse
import importlib
import importlib.metadata as importlib_metadata
import logging
import pkgutil
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Final, Literal, Mapping, MutableMapping, Sequence

from trace_map_toolkit.core.errors import UnknownSubcommand
from trace_map_toolkit.core.settings import Settings

__all__: Final = [
    "BaseCommand",
    "CommandMeta",
    "CommandResult",
    "CommandManager",
    "get_command_manager",
]

_LOGGER = logging.getLogger(__name__)
_ENTRYPOINT_GROUP: Final = "trace_map_toolkit.commands"

OutputFormat = Literal["json", "csv"]


@dataclass
class CommandMeta:
    """Name and help text, for ``--help`` and listings."""

    name: str
    description: str
    output_format: OutputFormat


@dataclass
class CommandResult:
    """What a command hands back to the CLI for writing.

    JSON commands fill ``payload``; CSV commands fill ``rows`` and ``headers``.
    """

    format: OutputFormat
    payload: dict[str, Any] = field(default_factory=dict)
    rows: Sequence[Mapping[str, Any]] = ()
    headers: Sequence[str] = ()


class BaseCommand(ABC):
    """Base class every subcommand inherits."""

    #: subcommand name as typed on the command line
    name: str = ""
    #: one-line help text
    description: str = "No description"
    output_format: OutputFormat = "json"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Declare the subcommand's flags (none by default)."""

    @abstractmethod
    def run(self, args: argparse.Namespace, settings: Settings) -> CommandResult:
        """Compute and return the result; may raise any ``TraceMapError``."""
        raise NotImplementedError

    def meta(self) -> CommandMeta:
        return CommandMeta(self.name, self.description, self.output_format)


class CommandManager:
    """Loads entry-point and built-in commands and provides access to them."""

    def __init__(self) -> None:
        self._commands: MutableMapping[str, BaseCommand] = {}
        self._load_entrypoints()
        self._load_builtin()

    # ------------------------------------------------------------------
    # Discovery
    # ------------------------------------------------------------------
    def _register(self, cls: type[BaseCommand], origin: str) -> None:
        instance = cls()
        if not instance.name:
            raise TypeError(f"command class {cls.__qualname__} has no name")
        if instance.name in self._commands:
            _LOGGER.debug("command '%s' from %s shadowed by an earlier one", instance.name, origin)
            return
        self._commands[instance.name] = instance
        _LOGGER.debug("command '%s' loaded from %s", instance.name, origin)

    def _load_entrypoints(self) -> None:
        for ep in importlib_metadata.entry_points(group=_ENTRYPOINT_GROUP):
            try:
                cls = ep.load()
                if not (isinstance(cls, type) and issubclass(cls, BaseCommand)):
                    raise TypeError("command class must inherit BaseCommand")
                self._register(cls, f"entry point {ep.name}")
            except Exception as exc:  # pragma: no cover
                _LOGGER.warning("Failed to load command '%s': %s", ep.name, exc)

    def _load_builtin(self) -> None:
        """Scan :mod:`trace_map_toolkit.commands` for BaseCommand subclasses."""
        import trace_map_toolkit.commands as _pkg

        for _, mod_name, _ in pkgutil.iter_modules(_pkg.__path__):
            full = f"{_pkg.__name__}.{mod_name}"
            module = importlib.import_module(full)
            for attr in vars(module).values():
                if (
                    isinstance(attr, type)
                    and issubclass(attr, BaseCommand)
                    and attr is not BaseCommand
                    and attr.__module__ == full
                ):
                    self._register(attr, full)

    # ------------------------------------------------------------------
    # Public API
    # ------------------------------------------------------------------
    @property
    def names(self) -> tuple[str, ...]:
        return tuple(sorted(self._commands))

    def get(self, name: str) -> BaseCommand:
        try:
            return self._commands[name]
        except KeyError:
            raise UnknownSubcommand(
                f"unknown subcommand {name!r}; choose from {', '.join(self.names)}"
            ) from None

    def metadata(self) -> Mapping[str, CommandMeta]:
        return {name: self._commands[name].meta() for name in self.names}


# global helper
_command_manager: CommandManager | None = None


def get_command_manager() -> CommandManager:
    global _command_manager  # noqa: PLW0603
    if _command_manager is None:
        _command_manager = CommandManager()
    return _command_manager

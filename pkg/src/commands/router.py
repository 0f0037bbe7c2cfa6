"""
Subcommand registration.

Each command module owns a CommandRouter; the command line includes every
router and dispatches on the subcommand name.
"""

from typing import Any, Callable, NamedTuple, Sequence

from src.service.models import CommandRequest, CommandResponse


class Flag(NamedTuple):
    """A convenience flag that fills one payload key."""

    name: str
    key: str
    type: Callable[[str], Any] = str
    append: bool = False
    help: str = ""


class Command(NamedTuple):
    name: str
    summary: str
    request_model: type[CommandRequest]
    handler: Callable[[Any], CommandResponse]
    flags: tuple[Flag, ...]


class CommandRouter:
    """Collects commands declared with the `command` decorator."""

    def __init__(self):
        self.commands: dict[str, Command] = {}

    def command(
        self,
        name: str,
        *,
        request_model: type[CommandRequest],
        summary: str,
        flags: Sequence[Flag] = (),
    ):
        def decorator(func: Callable[[Any], CommandResponse]):
            if name in self.commands:
                raise ValueError(f"command {name} is already registered")
            self.commands[name] = Command(name, summary, request_model, func, tuple(flags))
            return func

        return decorator

"""
Command line entry point for cover-arithmetic.

Every subcommand reads a JSON payload (inline, @file or - for stdin) or its
convenience flags, and writes one JSON (or text) document to stdout. Exit
codes: 0 on success, 1 on a domain error, 2 on malformed input.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from dotenv import load_dotenv
from pydantic import BaseModel

from src.commands import covers, lattices, radicals, torus
from src.commands.router import Command
from src.service.config import APP_VERSION, apply_overrides, configure_logging, get_settings
from src.service.exception_handlers import EXIT_OK, universal_error_handler
from src.service.exceptions import MalformedInputError
from src.service.models import SCHEMA_VERSION

logger = logging.getLogger(__name__)

ROUTERS = (lattices.router, radicals.router, torus.router, covers.router)

_BUDGETS = ("factor", "conductor", "denominator", "orbit")


def registered_commands() -> dict[str, Command]:
    commands: dict[str, Command] = {}
    for router in ROUTERS:
        commands |= router.commands
    return commands


def create_parser(commands: dict[str, Command]) -> argparse.ArgumentParser:
    """Create the argument parser with one subparser per registered command."""
    parser = argparse.ArgumentParser(
        prog="cover-arith", description=get_settings().app_description
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_VERSION}")
    parser.add_argument("--format", choices=["json", "text"], default="json")
    parser.add_argument("--log-level", default=None, help="overrides COVER_ARITH_LOG_LEVEL")
    for budget in _BUDGETS:
        parser.add_argument(
            f"--budget-{budget}",
            type=int,
            default=None,
            help=f"overrides COVER_ARITH_BUDGET_{budget.upper()}",
        )

    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in commands.values():
        sub = subparsers.add_parser(command.name, help=command.summary, description=command.summary)
        sub.add_argument("--payload", help="JSON payload, @file, or - for stdin")
        for flag in command.flags:
            sub.add_argument(
                flag.name,
                dest=f"flag_{flag.key}",
                type=flag.type,
                action="append" if flag.append else "store",
                help=flag.help,
            )
    return parser


def _read_payload(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    if source.startswith("@"):
        try:
            return Path(source[1:]).read_text()
        except OSError as e:
            raise MalformedInputError(f"cannot read payload file {source[1:]}: {e}") from e
    return source


def build_payload(args: argparse.Namespace, command: Command) -> dict:
    """The request payload from --payload, with convenience flags layered on top."""
    payload = {"schema_version": SCHEMA_VERSION}
    if args.payload is not None:
        payload = json.loads(_read_payload(args.payload))
        if not isinstance(payload, dict):
            raise MalformedInputError("payload must be a JSON object")
    for flag in command.flags:
        value = getattr(args, f"flag_{flag.key}")
        if value is not None:
            payload[flag.key] = value
    return payload


def render(model: BaseModel, output_format: str) -> str:
    """Byte-stable JSON, or one sorted `key: value` line per field."""
    data = model.model_dump(mode="json")
    if output_format == "text":
        return "\n".join(f"{k}: {json.dumps(v, sort_keys=True)}" for k, v in sorted(data.items()))
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def run(args: argparse.Namespace, commands: dict[str, Command]) -> tuple[int, BaseModel]:
    """Dispatch one parsed command line."""
    try:
        settings = apply_overrides(
            log_level=args.log_level, **{f"budget_{b}": getattr(args, f"budget_{b}") for b in _BUDGETS}
        )
        configure_logging(settings)
        command = commands[args.command]
        request = command.request_model.model_validate(build_payload(args, command))
        logger.debug("Running %s", command.name)
        response = command.handler(request)
        return EXIT_OK, response.model_copy(update={"budgets": settings.budgets()})
    except Exception as exc:
        return universal_error_handler(exc)


def main(argv: Sequence[str] | None = None) -> int:
    load_dotenv()
    commands = registered_commands()
    args = create_parser(commands).parse_args(argv)
    exit_code, result = run(args, commands)
    print(render(result, args.format))
    return exit_code


if __name__ == "__main__":
    sys.exit(main())

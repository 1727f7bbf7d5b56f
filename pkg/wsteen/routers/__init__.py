import argparse
import json
import os
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Tuple

from jinja2 import Environment, FileSystemLoader, StrictUndefined
from pydantic import BaseModel

from wsteen.models.service import EngineConfig, WsteenService

_service = None

TEMPLATE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "templates")
templates = Environment(
    loader=FileSystemLoader(TEMPLATE_DIR),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
    undefined=StrictUndefined,
)


def get_service() -> WsteenService:
    global _service
    if _service is None:
        _service = WsteenService()
    return _service


def reset_service(config: Optional[EngineConfig] = None) -> WsteenService:
    """Replace the singleton, e.g. after command-line flags changed the configuration."""
    global _service
    _service = WsteenService(config)
    return _service


@dataclass
class CommandResult:
    """What a command hands back to the entry point: a payload, its template and a verdict."""

    payload: Any
    template: str
    passed: bool = True

    def as_json(self) -> str:
        if isinstance(self.payload, BaseModel):
            return self.payload.model_dump_json(indent=2)
        return json.dumps(self.payload, indent=2, sort_keys=True, default=str)

    def as_text(self) -> str:
        data = self.payload.model_dump() if isinstance(self.payload, BaseModel) else self.payload
        return templates.get_template(self.template).render(**data)


Handler = Callable[[WsteenService, argparse.Namespace], CommandResult]


class CommandRouter:
    """One subcommand: its flags and the handler that serves it."""

    def __init__(self, name: str, help: str = ""):
        self.name = name
        self.help = help
        self.arguments: List[Tuple[Tuple[str, ...], dict]] = []
        self.handler: Optional[Handler] = None

    def argument(self, *flags: str, **kwargs) -> "CommandRouter":
        self.arguments.append((flags, kwargs))
        return self

    def command(self, fn: Handler) -> Handler:
        self.handler = fn
        return fn

    def install(self, subparsers, parents=()) -> argparse.ArgumentParser:
        parser = subparsers.add_parser(self.name, help=self.help, parents=list(parents))
        for flags, kwargs in self.arguments:
            parser.add_argument(*flags, **kwargs)
        parser.set_defaults(router=self)
        return parser

    def __call__(self, service: WsteenService, args: argparse.Namespace) -> CommandResult:
        if self.handler is None:
            raise RuntimeError(f"command {self.name} has no handler")
        return self.handler(service, args)

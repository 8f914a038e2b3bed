"""Command-line interface: model language, scenarios and commands."""

from .dsl import ParseError, format_model, parse_model
from .main import main, run_command
from .scenarios import scenario

__all__ = ["ParseError", "format_model", "main", "parse_model", "run_command", "scenario"]

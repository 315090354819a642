"""Command-line surface of the hypergraph store."""

from .app import build_parser, main
from .models import CliConfig, OutputFormat

__all__ = ['main', 'build_parser', 'CliConfig', 'OutputFormat']

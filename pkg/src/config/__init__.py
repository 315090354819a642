"""Config package for configuration management."""

from .config import Config, config
from .logging_setup import configure_logging

__all__ = ['Config', 'config', 'configure_logging']

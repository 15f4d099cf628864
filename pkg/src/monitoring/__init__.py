"""Logging for mesh runs."""

from .system_logger import SystemLogger, system_logger

__all__ = ['SystemLogger', 'system_logger']

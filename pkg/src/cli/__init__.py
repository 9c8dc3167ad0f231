"""
Command-line interface for the triple-well toolkit.
"""

from .commands import build_parser, main

__all__ = ["build_parser", "main"]

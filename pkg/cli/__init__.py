"""
Command-Line Front End
"""
from .app import build_parser, main, resolve_fan

__all__ = [
    'build_parser',
    'main',
    'resolve_fan'
]

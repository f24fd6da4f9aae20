"""Exact integer homological algebra: abelian groups, multi-Tor, Koszul
models of derived functors, and derived limits over finite categories."""

__version__ = "0.1.0"

from .fgab import AbHom, FgAbGroup, format_group, parse_group
from .zmat import IntMatrix

__all__ = ["AbHom", "FgAbGroup", "IntMatrix", "format_group", "parse_group", "__version__"]

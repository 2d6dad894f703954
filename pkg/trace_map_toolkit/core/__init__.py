"""
Public interface of the core layer: the math modules, shared by the CLI
commands and by library users.
"""
from __future__ import annotations

from .errors import TraceMapError                                   # noqa: F401
from .polyring import IntPoly3, chebyshev_u, parse_poly            # noqa: F401
from .settings import Settings                                      # noqa: F401
from .tracemap import TraceMap, classify, derive, fricke            # noqa: F401
from .wordcore import Substitution, Word, gen_fibonacci            # noqa: F401

__all__ = [
    "TraceMapError",
    "IntPoly3",
    "chebyshev_u",
    "parse_poly",
    "Settings",
    "TraceMap",
    "classify",
    "derive",
    "fricke",
    "Substitution",
    "Word",
    "gen_fibonacci",
]

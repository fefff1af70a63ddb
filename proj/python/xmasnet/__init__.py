"""Executable semantics for xMAS communication fabrics.

Thin wrapper around the C++ core: parse or generate a network, validate it,
evaluate its channel signals, simulate it, and check the routing obligations.
"""

from ._core import Network, ParseError

__all__ = ["Network", "ParseError"]
__version__ = "0.1.0"

"""Exact computations with rational points, etale maps and p-adic series."""

from .errors import DomainError, ParseError

__version__ = "0.1.0"

__all__ = ["DomainError", "ParseError", "__version__"]

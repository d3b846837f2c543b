"""Arithmetic kernel selection.

The compiled ``_speedups`` extension is used when it imports; otherwise, or
when ``BBA_PURE_PYTHON`` is set to a non-empty value, the pure-Python
``_purepy`` module is used.  Both expose the same functions.
"""

import os

from . import _purepy as pure

try:
    if os.environ.get("BBA_PURE_PYTHON"):
        raise ImportError("pure-Python kernels requested")
    from . import _speedups as compiled
except ImportError:
    compiled = None

BACKEND = "cython" if compiled is not None else "python"

# compiled field kernels use 64-bit arithmetic on the integer encoding
_COMPILED_FIELD_LIMIT = 2**31


def field_kernels(p, n):
    """Return the module whose field kernels can handle F_{p^n}."""
    if compiled is not None and n <= compiled.MAX_DEGREE and p**n < _COMPILED_FIELD_LIMIT:
        return compiled
    return pure


def perm_kernels():
    return compiled if compiled is not None else pure


__all__ = ["BACKEND", "compiled", "pure", "field_kernels", "perm_kernels"]

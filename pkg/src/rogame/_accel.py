"""Numba switch.

Set ``ROGAME_DISABLE_NUMBA=1`` to run the pure-numpy fallbacks, or when
numba is not importable. Checked once at import time.
"""
import os

_disabled = os.environ.get("ROGAME_DISABLE_NUMBA", "").strip().lower() not in (
    "",
    "0",
    "false",
    "no",
)

try:
    if _disabled:
        raise ImportError
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

    def njit(*args, **kw):
        if len(args) == 1 and callable(args[0]) and not kw:
            return args[0]
        return lambda f: f

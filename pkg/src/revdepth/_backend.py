"""Kernel backend selection.

Numba is used when importable unless ``REVDEPTH_DISABLE_NUMBA`` is set to a
truthy value, in which case every kernel runs its pure-numpy path.
"""
import os

_FLAG = os.environ.get("REVDEPTH_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit as _njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False
    _njit = None


def njit(func):
    """``numba.njit(cache=True)`` when enabled, otherwise ``None``."""
    if not HAVE_NUMBA:
        return None
    return _njit(cache=True, nogil=True)(func)


def backend_name() -> str:
    return "numba" if HAVE_NUMBA else "numpy"

"""Numba switch.

Set ``SCIDIV_DISABLE_NUMBA=1`` to force the pure-numpy kernels (useful for
debugging or on platforms without numba wheels).
"""

import os

_FLAG = os.environ.get("SCIDIV_DISABLE_NUMBA", "").strip().lower()
NUMBA_REQUESTED = _FLAG not in ("1", "true", "yes", "on")

try:
    from numba import njit as _numba_njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    _numba_njit = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_REQUESTED and NUMBA_AVAILABLE


def njit(func=None, **kwargs):
    """``numba.njit`` when numba is importable, identity otherwise.

    Kernels are always compiled when numba exists, so the benchmark can
    compare both paths regardless of ``SCIDIV_DISABLE_NUMBA``; the flag only
    controls which path the public dispatchers pick.
    """
    kwargs.setdefault("cache", True)
    if _numba_njit is None:
        if func is not None:
            return func
        return lambda f: f
    if func is not None:
        return _numba_njit(**kwargs)(func)
    return _numba_njit(**kwargs)

"""Optional numba acceleration.

Hot kernels are written once as plain Python loops and compiled with
``numba.njit`` when numba is importable. Setting ``LRDKIT_DISABLE_NUMBA=1``
(read at import time) forces the pure-numpy implementations instead.
"""

import os

_disabled = os.environ.get("LRDKIT_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _disabled:
        raise ImportError
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:
    _njit = None
    HAVE_NUMBA = False


def njit(func):
    """Compile ``func`` in nopython mode, or return it unchanged without numba."""
    if _njit is None:
        return func
    return _njit(cache=False, nogil=True)(func)


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"

"""JIT selection for the numeric kernels.

Set ``LANGDIV_DISABLE_NUMBA=1`` (or numba's own ``NUMBA_DISABLE_JIT=1``) before
importing :mod:`langdiv` to force the pure-numpy code paths.
"""

import os

_TRUTHY = {"1", "true", "yes", "on"}


def _flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in _TRUTHY


try:
    from numba import njit as _njit

    NUMBA_INSTALLED = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _njit = None
    NUMBA_INSTALLED = False

USE_NUMBA = NUMBA_INSTALLED and not (_flag("LANGDIV_DISABLE_NUMBA") or _flag("NUMBA_DISABLE_JIT"))


def optional_njit(*args, **kwargs):
    """``numba.njit`` when enabled, identity decorator otherwise."""

    def decorator(func):
        if NUMBA_INSTALLED:
            return _njit(*args, **kwargs)(func)
        return func

    return decorator

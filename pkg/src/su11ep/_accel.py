"""Numba switch.

Kernels in :mod:`su11ep._kernels` come in two flavours: scalar-loop sources
meant for ``numba.njit`` and vectorised numpy sources.  Setting
``SU11EP_DISABLE_NUMBA=1`` (or running without numba installed) selects the
numpy flavour.  The flag is read once, at import time.
"""
import os

ENV_FLAG = "SU11EP_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def _flag_set() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() not in ("", "0", "false", "no")


NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and not _flag_set()


def njit(fn):
    """Compile ``fn`` in nopython mode (lazily, cached, GIL released).

    Returns ``fn`` unchanged if numba is missing.
    """
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"

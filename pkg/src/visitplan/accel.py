"""Numba on/off switch for the hot kernels.

Set ``VISITPLAN_PURE=1`` (or ``NUMBA_DISABLE_JIT=1``) before import to run the
pure-Python/numpy path instead of the JIT-compiled one. Both paths share the
same source, so results are bit-identical either way.
"""

from __future__ import annotations

import os


def _env_disabled() -> bool:
    for var in ("VISITPLAN_PURE", "NUMBA_DISABLE_JIT"):
        value = os.environ.get(var, "")
        if value and value != "0":
            return True
    return False


try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False

JIT_ENABLED = HAS_NUMBA and not _env_disabled()


def maybe_jit(fn):
    """Compile ``fn`` with numba when enabled, else return it unchanged."""
    if JIT_ENABLED:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn

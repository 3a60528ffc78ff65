"""Kernel backend selection.

Hot numeric kernels exist in two implementations: numba ``@njit`` loops and
vectorized numpy. The env flag ``TAILTEST_NUMBA`` picks the backend at import
time (``0``/``off``/``false`` forces the numpy path); numba is also skipped
automatically when it cannot be imported.
"""

import os

_FLAG = os.environ.get("TAILTEST_NUMBA", "auto").strip().lower()

if _FLAG in ("0", "off", "false", "no"):
    USE_NUMBA = False
else:
    try:
        import numba  # noqa: F401

        USE_NUMBA = True
    except ImportError:
        USE_NUMBA = False

ACTIVE = "numba" if USE_NUMBA else "numpy"


def max_threads() -> int:
    """Worker cap from TAILTEST_THREADS (default 1, i.e. sequential)."""
    raw = os.environ.get("TAILTEST_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1

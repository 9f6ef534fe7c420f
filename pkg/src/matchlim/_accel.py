"""Optional numba acceleration for the hot numeric kernels.

Set MATCHLIM_NO_NUMBA=1 to run every kernel as plain Python/numpy.  The
fallback executes the exact same code path, so results are bit-identical;
only the speed differs.  See scripts/benchmark_kernels.py for a comparison.
"""

import os

NUMBA_DISABLED = os.environ.get("MATCHLIM_NO_NUMBA", "").strip() in {"1", "true", "yes"}

if not NUMBA_DISABLED:
    try:
        import numba
    except ImportError:  # pragma: no cover
        numba = None
        NUMBA_DISABLED = True


def maybe_njit(*args, **kwargs):
    """numba.njit when acceleration is enabled, identity decorator otherwise."""
    if NUMBA_DISABLED:
        if args and callable(args[0]):
            return args[0]
        return lambda func: func
    kwargs.setdefault("cache", True)
    if args and callable(args[0]):
        return numba.njit(cache=True)(args[0])
    return numba.njit(*args, **kwargs)

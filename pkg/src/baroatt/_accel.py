"""Numba acceleration shim.

Hot numeric kernels in this package are decorated with :func:`njit`. By
default that is numba's ``njit(cache=True)``; setting the environment
variable ``BAROATT_DISABLE_NUMBA=1`` (before import) swaps in an identity
decorator so the same source runs as plain numpy. The fallback path is
used for debugging and by ``benchmarks/bench_filter.py`` to compare the
two.
"""

import os

ENV_FLAG = "BAROATT_DISABLE_NUMBA"

NUMBA_ENABLED = os.environ.get(ENV_FLAG, "").lower() not in ("1", "true", "yes")

if NUMBA_ENABLED:
    try:
        import numba as _numba
    except ImportError:
        NUMBA_ENABLED = False

if NUMBA_ENABLED:

    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        if args and callable(args[0]):
            return _numba.njit(**kwargs)(args[0])
        return _numba.njit(*args, **kwargs)

else:

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap

"""Optional numba acceleration.

Hot loops (fixed-step integrators, tridiagonal solves) are written as plain
Python functions and wrapped with ``numba.njit`` when numba is importable.
Without numba the same functions run unchanged, just slower; results are
identical either way because the arithmetic is the same.
"""

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on bare installs
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(func):
            return func

        return wrap

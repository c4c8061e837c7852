"""Kernel backend selection.

The hot numerical kernels exist in two flavors: numba ``@njit`` compiled
loops and vectorized pure-numpy equivalents.  The active flavor is chosen
once at import time from the environment variable ``PFFRAC_BACKEND``:

* ``numba`` (default): JIT-compiled kernels, compiled lazily and cached
  on disk between processes.
* ``numpy``: pure-numpy fallback, no compilation step.

If numba is requested but not importable the numpy lane is used and a
warning is emitted.  ``benchmarks/bench_kernels.py`` compares both lanes.
"""

import os
import warnings

_requested = os.environ.get("PFFRAC_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ValueError(
        f"PFFRAC_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

NUMBA_ENABLED = False
if _requested == "numba":
    try:
        from numba import njit as _numba_njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a hard dependency
        warnings.warn("numba not importable, falling back to numpy kernels")

if NUMBA_ENABLED:

    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        return _numba_njit(*args, **kwargs)

else:

    def njit(*args, **kwargs):
        # Identity decorator: the same source runs as plain Python.
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


BACKEND = "numba" if NUMBA_ENABLED else "numpy"

"""Kernel namespace: re-exports the active lane chosen in ``backend``.

``batch`` points at the numba loops or the vectorized numpy fallback;
:mod:`pffrac.kernels.scalar` and :mod:`pffrac.kernels.pointops` hold the
shared single-point formulas (jitted under the numba lane, plain Python
otherwise).
"""

from ..backend import BACKEND, NUMBA_ENABLED

if NUMBA_ENABLED:
    from . import batch_nb as batch
else:  # pragma: no cover - exercised via PFFRAC_BACKEND=numpy runs
    from . import batch_np as batch

__all__ = ["batch", "BACKEND", "NUMBA_ENABLED"]

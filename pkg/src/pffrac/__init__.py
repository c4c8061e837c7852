"""Phase-field brittle fracture simulator.

Finite elements (P1 triangles, trilinear hexahedra) with an explicit,
viscously retarded Allen-Cahn phase-field evolution.  Crack growth can be
driven variationally (tension/compression energy splits of linearized or
finite elasticity) or by classical failure criteria (Rankine, Tresca,
compressive Rankine, Mohr-Coulomb, Beltrami).

Set PFFRAC_BACKEND=numpy to run the pure-numpy kernel lane instead of the
numba-compiled default.
"""

from .backend import BACKEND, NUMBA_ENABLED

__version__ = "0.1.0"

__all__ = ["BACKEND", "NUMBA_ENABLED", "__version__"]

"""Small dense tensor algebra on 3x3 arrays.

Symmetric tensors (strain, stress) and general tensors (deformation
gradient, first Piola-Kirchhoff stress) are plain ``(3, 3)`` float
ndarrays.  2D plane problems embed into 3x3 via :func:`embed_plane`
before any spectral operation, so the 3D splits are reused unchanged.

All functions are pure and thread-safe.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveJacobian
from .kernels import scalar as _k

I3 = np.eye(3)


def sym(A):
    """Symmetric part of A."""
    A = np.asarray(A, dtype=float)
    return 0.5 * (A + A.T)


def frob(A):
    """Frobenius norm."""
    return float(np.sqrt(np.sum(np.asarray(A) ** 2)))


def macaulay(x, sign="plus"):
    """Positive/negative part of a scalar; the two parts add up to x."""
    x = float(x)
    if sign == "plus":
        return _k.macaulay_plus(x)
    if sign == "minus":
        return _k.macaulay_minus(x)
    raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")


@dataclass(frozen=True)
class SpectralDecomp:
    """Eigenvalues (descending) and matching orthonormal eigenvectors.

    ``vectors[:, a]`` is the unit eigenvector for ``values[a]``; the input
    is recovered as ``sum_a values[a] * outer(n_a, n_a)``.
    """

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self):
        return (self.vectors * self.values) @ self.vectors.T


def eig_sym_sorted(A):
    """Eigendecomposition of a symmetric 3x3 tensor, descending order.

    Analytic characteristic-polynomial solve with a Jacobi fallback for
    near-degenerate spectra.
    """
    A = np.ascontiguousarray(A, dtype=float)
    vals, vecs = _k.eig_sym33(A)
    return SpectralDecomp(vals, vecs)


def split_strain_spectral(eps):
    """Macaulay split eps = eps+ + eps- with eps+ PSD and eps- NSD."""
    eps = np.ascontiguousarray(eps, dtype=float)
    return _k.spectral_split33(eps)


def vol_dev_parts(A):
    """Return (trace, deviator); A = (trace/3) I + deviator."""
    A = np.asarray(A, dtype=float)
    tr = float(np.trace(A))
    return tr, A - (tr / 3.0) * I3


def modified_invariants(F):
    """Isochoric invariants (I1bar, I2bar) and J = det F.

    I1bar = J^(-2/3) F:F and I2bar = J^(-4/3) cofF:cofF; both equal 3 for
    any pure rotation or dilation and are >= 3 in general.
    """
    F = np.ascontiguousarray(F, dtype=float)
    J = _k.det33(F)
    if J <= 0.0:
        raise NonPositiveJacobian(f"det F = {J:.6g} <= 0")
    cof = _k.cof33(F)
    i1 = J ** (-2.0 / 3.0) * _k.ddot33(F, F)
    i2 = J ** (-4.0 / 3.0) * _k.ddot33(cof, cof)
    return i1, i2, J


def embed_plane(eps2d, plane_mode, nu=None):
    """Embed a 2D strain [exx, eyy, exy] into a 3x3 tensor.

    Plane strain sets eps_33 = 0; plane stress sets
    eps_33 = -nu/(1-nu) (eps_11 + eps_22) so the out-of-plane normal
    stress vanishes.
    """
    exx, eyy, exy = (float(v) for v in eps2d)
    E = np.zeros((3, 3))
    E[0, 0] = exx
    E[1, 1] = eyy
    E[0, 1] = E[1, 0] = exy
    if plane_mode == "plane_strain":
        pass
    elif plane_mode == "plane_stress":
        if nu is None:
            raise ValueError("plane stress embedding needs the Poisson ratio")
        E[2, 2] = -nu / (1.0 - nu) * (exx + eyy)
    elif plane_mode == "full_3d":
        raise ValueError("embed_plane is for 2D plane modes only")
    else:
        raise ValueError(f"unknown plane mode {plane_mode!r}")
    return E

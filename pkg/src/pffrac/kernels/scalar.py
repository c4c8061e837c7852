"""Scalar 3x3 tensor kernels.

Every function here is nopython-compilable; under the numpy backend the
identical source runs as plain Python.  Batched element/quadrature loops
build on these (see ``batch_nb`` / ``batch_np``).
"""

import numpy as np

from ..backend import njit

# Jacobi fallback kicks in when the characteristic-polynomial discriminant
# drops below DISCRIMINANT_RTOL * |A|^6 (near-degenerate spectrum).
DISCRIMINANT_RTOL = 1e-12
_JACOBI_SWEEPS = 30


@njit
def macaulay_plus(x):
    return 0.5 * (x + abs(x))


@njit
def macaulay_minus(x):
    return 0.5 * (x - abs(x))


@njit
def det33(A):
    return (
        A[0, 0] * (A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1])
        - A[0, 1] * (A[1, 0] * A[2, 2] - A[1, 2] * A[2, 0])
        + A[0, 2] * (A[1, 0] * A[2, 1] - A[1, 1] * A[2, 0])
    )


@njit
def cof33(A):
    """Cofactor matrix, cof(A)[i,j] = d det(A) / d A[i,j]."""
    C = np.empty((3, 3))
    C[0, 0] = A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1]
    C[0, 1] = A[1, 2] * A[2, 0] - A[1, 0] * A[2, 2]
    C[0, 2] = A[1, 0] * A[2, 1] - A[1, 1] * A[2, 0]
    C[1, 0] = A[0, 2] * A[2, 1] - A[0, 1] * A[2, 2]
    C[1, 1] = A[0, 0] * A[2, 2] - A[0, 2] * A[2, 0]
    C[1, 2] = A[0, 1] * A[2, 0] - A[0, 0] * A[2, 1]
    C[2, 0] = A[0, 1] * A[1, 2] - A[0, 2] * A[1, 1]
    C[2, 1] = A[0, 2] * A[1, 0] - A[0, 0] * A[1, 2]
    C[2, 2] = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    return C


@njit
def ddot33(A, B):
    s = 0.0
    for i in range(3):
        for j in range(3):
            s += A[i, j] * B[i, j]
    return s


@njit
def _jacobi_sym33(A):
    """Cyclic Jacobi rotations; returns (eigenvalues, column eigenvectors)."""
    D = A.copy()
    V = np.eye(3)
    for _ in range(_JACOBI_SWEEPS):
        off = D[0, 1] ** 2 + D[0, 2] ** 2 + D[1, 2] ** 2
        if off <= 1e-32 * (D[0, 0] ** 2 + D[1, 1] ** 2 + D[2, 2] ** 2 + 1e-300):
            break
        for p in range(2):
            for q in range(p + 1, 3):
                if abs(D[p, q]) < 1e-300:
                    continue
                theta = 0.5 * (D[q, q] - D[p, p]) / D[p, q]
                t = 1.0 / (abs(theta) + np.sqrt(1.0 + theta * theta))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(3):
                    dkp = D[k, p]
                    dkq = D[k, q]
                    D[k, p] = c * dkp - s * dkq
                    D[k, q] = s * dkp + c * dkq
                for k in range(3):
                    dpk = D[p, k]
                    dqk = D[q, k]
                    D[p, k] = c * dpk - s * dqk
                    D[q, k] = s * dpk + c * dqk
                for k in range(3):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * vkq
                    V[k, q] = s * vkp + c * vkq
    vals = np.array([D[0, 0], D[1, 1], D[2, 2]])
    return vals, V


@njit
def _eigvec_cross(A, lam):
    """Eigenvector of symmetric A for isolated eigenvalue lam."""
    r0 = np.array([A[0, 0] - lam, A[0, 1], A[0, 2]])
    r1 = np.array([A[1, 0], A[1, 1] - lam, A[1, 2]])
    r2 = np.array([A[2, 0], A[2, 1], A[2, 2] - lam])
    c01 = np.cross(r0, r1)
    c02 = np.cross(r0, r2)
    c12 = np.cross(r1, r2)
    n01 = c01[0] ** 2 + c01[1] ** 2 + c01[2] ** 2
    n02 = c02[0] ** 2 + c02[1] ** 2 + c02[2] ** 2
    n12 = c12[0] ** 2 + c12[1] ** 2 + c12[2] ** 2
    best = c01
    nbest = n01
    if n02 > nbest:
        best = c02
        nbest = n02
    if n12 > nbest:
        best = c12
        nbest = n12
    return best, nbest


@njit
def eig_sym33(A):
    """Eigendecomposition of a symmetric 3x3 matrix.

    Returns eigenvalues sorted descending and the matching orthonormal
    eigenvectors as matrix columns.  Analytic (trigonometric) path with a
    Jacobi fallback for near-degenerate spectra.
    """
    scale = np.sqrt(ddot33(A, A))
    if scale < 1e-300:
        return np.zeros(3), np.eye(3)

    q = (A[0, 0] + A[1, 1] + A[2, 2]) / 3.0
    p1 = A[0, 1] ** 2 + A[0, 2] ** 2 + A[1, 2] ** 2
    p2 = (
        (A[0, 0] - q) ** 2 + (A[1, 1] - q) ** 2 + (A[2, 2] - q) ** 2 + 2.0 * p1
    )
    use_jacobi = False
    vals = np.zeros(3)
    if p2 <= 1e-28 * scale * scale:
        # Spherical tensor: any orthonormal basis works.
        return np.full(3, q), np.eye(3)

    p = np.sqrt(p2 / 6.0)
    B = (A - q * np.eye(3)) / p
    r = 0.5 * det33(B)
    if r <= -1.0:
        phi = np.pi / 3.0
    elif r >= 1.0:
        phi = 0.0
    else:
        phi = np.arccos(r) / 3.0
    lam0 = q + 2.0 * p * np.cos(phi)
    lam2 = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    lam1 = 3.0 * q - lam0 - lam2
    vals[0] = lam0
    vals[1] = lam1
    vals[2] = lam2

    # Discriminant of the characteristic cubic: product of squared gaps.
    disc = (
        (lam0 - lam1) ** 2 * (lam0 - lam2) ** 2 * (lam1 - lam2) ** 2
    )
    if disc < DISCRIMINANT_RTOL * scale ** 6:
        use_jacobi = True

    if not use_jacobi:
        V = np.empty((3, 3))
        v0, n0 = _eigvec_cross(A, lam0)
        v2, n2 = _eigvec_cross(A, lam2)
        if n0 < 1e-24 * scale ** 4 or n2 < 1e-24 * scale ** 4:
            use_jacobi = True
        else:
            v0 = v0 / np.sqrt(n0)
            v2 = v2 / np.sqrt(n2)
            # Middle eigenvector from orthogonality.
            v1 = np.cross(v2, v0)
            nv1 = np.sqrt(v1[0] ** 2 + v1[1] ** 2 + v1[2] ** 2)
            if nv1 < 1e-8:
                use_jacobi = True
            else:
                v1 = v1 / nv1
                for k in range(3):
                    V[k, 0] = v0[k]
                    V[k, 1] = v1[k]
                    V[k, 2] = v2[k]

    if use_jacobi:
        jvals, JV = _jacobi_sym33(A)
        order = np.argsort(-jvals)
        vals = jvals[order]
        V = np.empty((3, 3))
        for c in range(3):
            for k in range(3):
                V[k, c] = JV[k, order[c]]

    # Residual guard: the decomposition must reconstruct the input.
    res = 0.0
    for i in range(3):
        for j in range(3):
            rij = A[i, j]
            for a in range(3):
                rij -= vals[a] * V[i, a] * V[j, a]
            res += rij * rij
    if np.sqrt(res) > 1e-8 * scale:
        raise RuntimeError("symmetric 3x3 eigendecomposition failed to converge")
    return vals, V


@njit
def spectral_split33(A):
    """Macaulay split A = A+ + A- with A+ PSD and A- NSD."""
    vals, V = eig_sym33(A)
    Ap = np.zeros((3, 3))
    Am = np.zeros((3, 3))
    for a in range(3):
        lp = macaulay_plus(vals[a])
        lm = vals[a] - lp
        for i in range(3):
            for j in range(3):
                Ap[i, j] += lp * V[i, a] * V[j, a]
                Am[i, j] += lm * V[i, a] * V[j, a]
    return Ap, Am


@njit
def energy_projection_eigvals(vals, lam, mu):
    """Tensile eigenvalues of the stiffness-norm projection split.

    Projects the strain (given by its descending eigenvalues) onto the
    positive-semidefinite cone in the energy norm induced by the isotropic
    stiffness (lam, mu).  Returned d >= 0 satisfies, with e = vals - d,
    sigma(e) NSD and the orthogonality d : sigma(e) = 0, which makes the
    +/- energies add up to the total exactly.
    """
    d = np.zeros(3)
    # The active set is a leading block because vals is sorted descending.
    for k in range(4):
        if k == 0:
            c = 0.0
        else:
            s_out = 0.0
            for a in range(k, 3):
                s_out += vals[a]
            c = -lam * s_out / (2.0 * mu + lam * k)
        tre = c * k
        for a in range(k, 3):
            tre += vals[a]
        ok = True
        for a in range(k):
            if vals[a] - c <= 0.0:
                ok = False
        if ok:
            for a in range(k, 3):
                # sigma(e)_aa <= 0 required on the inactive set
                slack = 1e-13 * (abs(lam * tre) + 2.0 * mu * abs(vals[a]) + 1e-300)
                if lam * tre + 2.0 * mu * vals[a] > slack:
                    ok = False
        if ok:
            for a in range(k):
                d[a] = vals[a] - c
            return d
    # Unreachable for a convex projection; keep a deterministic fallback.
    for a in range(3):
        d[a] = macaulay_plus(vals[a])
    return d

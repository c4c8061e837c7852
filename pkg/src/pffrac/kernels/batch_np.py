"""Vectorized numpy lane of the batched kernels.

Mirrors the numba loops in ``batch_nb`` with pure-numpy array code; the
eigenproblems go through LAPACK (``np.linalg.eigh``).  Both lanes share
the contracts tested in ``tests/test_backend_parity.py``.
"""

import numpy as np

from . import pointops as po

_I3 = np.eye(3)


def eig_sym_batch(A):
    """Eigenvalues (descending) and eigenvectors of symmetric (n,3,3)."""
    vals, vecs = np.linalg.eigh(A)
    return vals[:, ::-1].copy(), vecs[:, :, ::-1].copy()


def _eigvalsh_desc(A):
    return np.linalg.eigvalsh(A)[:, ::-1]


def _macaulay_pm(x):
    ax = np.abs(x)
    return 0.5 * (x + ax), 0.5 * (x - ax)


def _spectral_pm(A):
    """Macaulay split of a batch of symmetric tensors."""
    vals, vecs = np.linalg.eigh(A)
    vp, vm = _macaulay_pm(vals)
    Ap = np.einsum("na,nia,nja->nij", vp, vecs, vecs)
    Am = np.einsum("na,nia,nja->nij", vm, vecs, vecs)
    return Ap, Am


def projection_plus_eigvals(vals, lam, mu):
    """Batch version of the stiffness-norm cone projection (descending vals)."""
    n = vals.shape[0]
    d = np.zeros_like(vals)
    chosen = np.zeros(n, dtype=np.bool_)
    for k in range(4):
        if k == 0:
            c = np.zeros(n)
        else:
            s_out = vals[:, k:].sum(axis=1)
            c = -lam * s_out / (2.0 * mu + lam * k)
        tre = k * c + vals[:, k:].sum(axis=1)
        ok = np.ones(n, dtype=np.bool_)
        for a in range(k):
            ok &= vals[:, a] - c > 0.0
        for a in range(k, 3):
            slack = 1e-13 * (np.abs(lam * tre) + 2.0 * mu * np.abs(vals[:, a]) + 1e-300)
            ok &= lam * tre + 2.0 * mu * vals[:, a] <= slack
        take = ok & ~chosen
        if np.any(take):
            for a in range(k):
                d[take, a] = vals[take, a] - c[take]
            chosen |= take
        if chosen.all():
            break
    if not chosen.all():
        rest = ~chosen
        d[rest] = np.maximum(vals[rest], 0.0)
    return d


def _trace(A):
    return A[:, 0, 0] + A[:, 1, 1] + A[:, 2, 2]


def _ddot(A, B):
    return np.einsum("nij,nij->n", A, B)


def lin_sigma_batch(eps, lam, mu):
    tr = _trace(eps)
    return lam * tr[:, None, None] * _I3 + 2.0 * mu * eps


def psi_plus_batch(eps, variant, lam, mu, K):
    """Tensile energy of the chosen split for a batch of strains."""
    tr = _trace(eps)
    if variant == po.DRIVE_GRIFFITH:
        return 0.5 * lam * tr ** 2 + mu * _ddot(eps, eps)
    if variant == po.DRIVE_SPECTRAL:
        vals = _eigvalsh_desc(eps)
        d = projection_plus_eigvals(vals, lam, mu)
        trd = d.sum(axis=1)
        return 0.5 * lam * trd ** 2 + mu * (d ** 2).sum(axis=1)
    if variant == po.DRIVE_LAMBDA_MU:
        vals = _eigvalsh_desc(eps)
        vp = np.maximum(vals, 0.0)
        trp, _ = _macaulay_pm(tr)
        return 0.5 * lam * trp ** 2 + mu * (vp ** 2).sum(axis=1)
    if variant == po.DRIVE_KG:
        dev = eps - (tr / 3.0)[:, None, None] * _I3
        dvals = _eigvalsh_desc(dev)
        dvp = np.maximum(dvals, 0.0)
        trp, _ = _macaulay_pm(tr)
        return 0.5 * K * trp ** 2 + mu * (dvp ** 2).sum(axis=1)
    raise ValueError("not an energy-split variant")


def stress_batch(eps, z, stress_mode, lam, mu, K, eps_res):
    """Point stress under the configured degradation model.

    stress_mode: 0 = fully degraded g(z) C eps, 1 = K-G split, 2 = lambda-mu
    split (only the tensile part is degraded for the split modes).
    """
    g = (1.0 - z) ** 2 + eps_res
    if stress_mode == 0:
        return g[:, None, None] * lin_sigma_batch(eps, lam, mu)
    tr = _trace(eps)
    trp, trm = _macaulay_pm(tr)
    if stress_mode == 1:
        dev = eps - (tr / 3.0)[:, None, None] * _I3
        devp, devm = _spectral_pm(dev)
        sp = K * trp[:, None, None] * _I3 + 2.0 * mu * devp
        sm = K * trm[:, None, None] * _I3 + 2.0 * mu * devm
    elif stress_mode == 2:
        ep, em = _spectral_pm(eps)
        sp = lam * trp[:, None, None] * _I3 + 2.0 * mu * ep
        sm = lam * trm[:, None, None] * _I3 + 2.0 * mu * em
    else:
        raise ValueError(f"unknown stress mode {stress_mode}")
    return g[:, None, None] * sp + sm


def drive_batch(eps, z, variant, lam, mu, K, params):
    """Crack drive per point; failure criteria use the effective
    (undegraded) stress so localization feeds back into the drive."""
    if variant in (
        po.DRIVE_GRIFFITH,
        po.DRIVE_SPECTRAL,
        po.DRIVE_LAMBDA_MU,
        po.DRIVE_KG,
    ):
        psi = psi_plus_batch(eps, variant, lam, mu, K)
        return 2.0 * (1.0 - z) * params[6] * psi

    if variant == po.DRIVE_BELTRAMI:
        ev = _eigvalsh_desc(eps)[:, 0]
        return np.maximum(ev / params[4] - 1.0, 0.0)

    sig = lin_sigma_batch(eps, lam, mu)
    if variant == po.DRIVE_TRESCA_DEV:
        tr = _trace(sig)
        dev = sig - (tr / 3.0)[:, None, None] * _I3
        tau = np.sqrt(0.375 * _ddot(dev, dev))
        return np.maximum(tau / params[1] - 1.0, 0.0)

    sv = _eigvalsh_desc(sig)
    if variant == po.DRIVE_RANKINE:
        return np.maximum(sv[:, 0] / params[0] - 1.0, 0.0)
    if variant == po.DRIVE_TRESCA:
        return np.maximum((sv[:, 0] - sv[:, 2]) / params[0] - 1.0, 0.0)
    if variant == po.DRIVE_COMPRESSIVE_RANKINE:
        sm = sv.sum(axis=1) / 3.0
        y = np.maximum(sv[:, 0] / params[0] - 1.0, 0.0)
        return np.where(sm > 0.0, y, 0.0)
    if variant == po.DRIVE_MOHR_COULOMB:
        return np.maximum(sv[:, 0] / params[2] - sv[:, 2] / params[3] - 1.0, 0.0)
    raise ValueError(f"unknown driving-force variant id {variant}")


# ---------------------------------------------------------------------------
# hyperelastic batches
# ---------------------------------------------------------------------------

def _det_batch(F):
    return np.linalg.det(F)


def _cof_batch(F):
    J = _det_batch(F)
    return J[:, None, None] * np.transpose(np.linalg.inv(F), (0, 2, 1))


def piola_invariant_batch(F, z, mu, k, K, eps_res):
    g = (1.0 - z) ** 2 + eps_res
    J = _det_batch(F)
    a = _ddot(F, F)
    cof = _cof_batch(F)
    b = _ddot(cof, cof)
    j23 = J ** (-2.0 / 3.0)
    j43 = J ** (-4.0 / 3.0)
    i1 = j23 * a
    i2 = j43 * b
    jp, jm = _macaulay_pm(J - 1.0)

    g1 = np.where(i1 > 3.0, g, 1.0)
    g2 = np.where(i2 > 3.0, g, 1.0)
    w1 = 0.5 * mu * g1
    w2 = 0.75 * mu * k * np.sqrt(i2) * g2
    wU = g * K * jp + K * jm

    C = np.einsum("nki,nkj->nij", F, F)
    trC = _trace(C)

    alpha_I = w1 * j23 + w2 * j43 * trC
    alpha_C = -w2 * j43
    alpha_Ci = -w1 * j23 * a / 3.0 - w2 * j43 * 2.0 * b / 3.0 + 0.5 * J * wU
    FinvT = np.transpose(np.linalg.inv(F), (0, 2, 1))
    FC = np.einsum("nij,njk->nik", F, C)
    return 2.0 * (
        alpha_I[:, None, None] * F
        + alpha_C[:, None, None] * FC
        + alpha_Ci[:, None, None] * FinvT
    )


def psi_invariant_batch(F, z, mu, k, K, eps_res):
    g = (1.0 - z) ** 2 + eps_res
    J = _det_batch(F)
    a = _ddot(F, F)
    cof = _cof_batch(F)
    b = _ddot(cof, cof)
    i1 = J ** (-2.0 / 3.0) * a
    i2 = J ** (-4.0 / 3.0) * b
    i1p, i1m = _macaulay_pm(i1 - 3.0)
    i2p, i2m = _macaulay_pm(i2 - 3.0)
    jp, jm = _macaulay_pm(J - 1.0)

    def psi0(d1, d2):
        i2v = np.maximum(3.0 + d2, 0.0)
        return 0.5 * mu * (d1 + k * (i2v ** 1.5 - po.SQRT27))

    U = lambda x: 0.5 * K * x ** 2  # noqa: E731 - local shorthand
    return g * U(jp) + U(jm) + g * psi0(i1p, i2p) + psi0(i1m, i2m)


def _stretch_principal(F, z):
    U, s, Vt = np.linalg.svd(F)
    lp = 1.0 + np.maximum(s - 1.0, 0.0)
    le = lp ** (1.0 - z[:, None])
    return U, s, Vt, lp, le


def psi_stretch_batch(F, z, mu, k, K):
    _, _, _, _, le = _stretch_principal(F, z)
    Jh = le.prod(axis=1)
    q1 = (le ** 2).sum(axis=1)
    q2 = (le[:, 0] * le[:, 1]) ** 2 + (le[:, 1] * le[:, 2]) ** 2 + (le[:, 0] * le[:, 2]) ** 2
    i1 = Jh ** (-2.0 / 3.0) * q1
    i2 = Jh ** (-4.0 / 3.0) * q2
    i2c = np.maximum(i2, 0.0)
    return 0.5 * K * (Jh - 1.0) ** 2 + 0.5 * mu * ((i1 - 3.0) + k * (i2c ** 1.5 - po.SQRT27))


def piola_stretch_batch(F, z, mu, k, K):
    U, s, Vt, lp, le = _stretch_principal(F, z)
    Jh = le.prod(axis=1)
    q1 = (le ** 2).sum(axis=1)
    q2 = (le[:, 0] * le[:, 1]) ** 2 + (le[:, 1] * le[:, 2]) ** 2 + (le[:, 0] * le[:, 2]) ** 2
    i1 = Jh ** (-2.0 / 3.0) * q1
    i2 = Jh ** (-4.0 / 3.0) * q2
    dpsi_di2 = 0.75 * mu * k * np.sqrt(np.maximum(i2, 0.0))
    dU_dJ = K * (Jh - 1.0)

    P = np.zeros_like(F)
    for a in range(3):
        o = (a + 1) % 3
        p = (a + 2) % 3
        di1 = 2.0 * Jh ** (-2.0 / 3.0) * le[:, a] - (2.0 / 3.0) * i1 / le[:, a]
        di2 = (
            Jh ** (-4.0 / 3.0) * 2.0 * le[:, a] * (le[:, o] ** 2 + le[:, p] ** 2)
            - (4.0 / 3.0) * i2 / le[:, a]
        )
        dpsi_dle = dU_dJ * Jh / le[:, a] + 0.5 * mu * di1 + dpsi_di2 * di2
        dle_dl = np.where(s[:, a] > 1.0, (1.0 - z) * lp[:, a] ** (-z), 0.0)
        coeff = dpsi_dle * dle_dl
        P += coeff[:, None, None] * np.einsum("ni,nj->nij", U[:, :, a], Vt[:, a, :])
    return P


def drive_batch_finite(F, z, variant, method_id, mu, k, K, eps_res, params):
    """Crack-driving force per point for the finite-strain path."""
    if variant == po.DRIVE_GRIFFITH:
        if method_id == 0:
            # variational derivative of the invariant-split energy
            J = _det_batch(F)
            a = _ddot(F, F)
            cof = _cof_batch(F)
            b = _ddot(cof, cof)
            i1 = J ** (-2.0 / 3.0) * a
            i2 = J ** (-4.0 / 3.0) * b
            jp, _ = _macaulay_pm(J - 1.0)
            psi_p = 0.5 * K * jp ** 2 + 0.5 * mu * (
                np.maximum(i1 - 3.0, 0.0)
                + k * (np.maximum(3.0 + np.maximum(i2 - 3.0, 0.0), 0.0) ** 1.5 - po.SQRT27)
            )
            return 2.0 * (1.0 - z) * params[6] * psi_p
        # stretch method: exact chain rule through lambda^e
        _, s, _, lp, le = _stretch_principal(F, z)
        Jh = le.prod(axis=1)
        q1 = (le ** 2).sum(axis=1)
        q2 = (le[:, 0] * le[:, 1]) ** 2 + (le[:, 1] * le[:, 2]) ** 2 + (le[:, 0] * le[:, 2]) ** 2
        i1 = Jh ** (-2.0 / 3.0) * q1
        i2 = Jh ** (-4.0 / 3.0) * q2
        dpsi_di2 = 0.75 * mu * k * np.sqrt(np.maximum(i2, 0.0))
        dU_dJ = K * (Jh - 1.0)
        y = np.zeros(F.shape[0])
        for a in range(3):
            o = (a + 1) % 3
            p = (a + 2) % 3
            di1 = 2.0 * Jh ** (-2.0 / 3.0) * le[:, a] - (2.0 / 3.0) * i1 / le[:, a]
            di2 = (
                Jh ** (-4.0 / 3.0) * 2.0 * le[:, a] * (le[:, o] ** 2 + le[:, p] ** 2)
                - (4.0 / 3.0) * i2 / le[:, a]
            )
            dpsi_dle = dU_dJ * Jh / le[:, a] + 0.5 * mu * di1 + dpsi_di2 * di2
            dle_dz = -np.log(lp[:, a]) * le[:, a]
            y += dpsi_dle * dle_dz
        return params[6] * np.maximum(-y, 0.0)

    if variant == po.DRIVE_BELTRAMI_STRETCH:
        s = np.linalg.svd(F, compute_uv=False)
        return np.maximum(s[:, 0] / params[5] - 1.0, 0.0)

    # effective stress of the intact material
    if method_id == 0:
        P = piola_invariant_batch(F, np.zeros_like(z), mu, k, K, 0.0)
    else:
        P = piola_stretch_batch(F, np.zeros_like(z), mu, k, K)
    J = _det_batch(F)
    sig = np.einsum("nij,nkj->nik", P, F) / J[:, None, None]
    sig = 0.5 * (sig + np.transpose(sig, (0, 2, 1)))
    sv = _eigvalsh_desc(sig)
    if variant == po.DRIVE_RANKINE:
        return np.maximum(sv[:, 0] / params[0] - 1.0, 0.0)
    if variant == po.DRIVE_TRESCA:
        return np.maximum((sv[:, 0] - sv[:, 2]) / params[0] - 1.0, 0.0)
    if variant == po.DRIVE_TRESCA_DEV:
        tr = _trace(sig)
        dev = sig - (tr / 3.0)[:, None, None] * _I3
        tau = np.sqrt(0.375 * _ddot(dev, dev))
        return np.maximum(tau / params[1] - 1.0, 0.0)
    if variant == po.DRIVE_COMPRESSIVE_RANKINE:
        sm = sv.sum(axis=1) / 3.0
        y = np.maximum(sv[:, 0] / params[0] - 1.0, 0.0)
        return np.where(sm > 0.0, y, 0.0)
    if variant == po.DRIVE_MOHR_COULOMB:
        return np.maximum(sv[:, 0] / params[2] - sv[:, 2] / params[3] - 1.0, 0.0)
    raise ValueError(f"unsupported finite-strain variant id {variant}")

"""Pointwise constitutive and crack-driving kernels.

Operate on 3x3 tensors at a single material point; nopython-compilable.
The driving-force variants are dispatched on integer ids so batched
quadrature loops stay jittable.
"""

import numpy as np

from ..backend import njit
from .scalar import (
    cof33,
    ddot33,
    det33,
    eig_sym33,
    energy_projection_eigvals,
    macaulay_minus,
    macaulay_plus,
    spectral_split33,
)

# Driving-force variant ids (order mirrors the config vocabulary).
DRIVE_GRIFFITH = 0
DRIVE_SPECTRAL = 1
DRIVE_LAMBDA_MU = 2
DRIVE_KG = 3
DRIVE_RANKINE = 4
DRIVE_TRESCA = 5
DRIVE_TRESCA_DEV = 6
DRIVE_COMPRESSIVE_RANKINE = 7
DRIVE_MOHR_COULOMB = 8
DRIVE_BELTRAMI = 9
DRIVE_BELTRAMI_STRETCH = 10

SQRT27 = 3.0 * np.sqrt(3.0)


# ---------------------------------------------------------------------------
# linear elasticity
# ---------------------------------------------------------------------------

@njit
def lin_psi(eps, lam, mu):
    tr = eps[0, 0] + eps[1, 1] + eps[2, 2]
    return 0.5 * lam * tr * tr + mu * ddot33(eps, eps)


@njit
def lin_sigma(eps, lam, mu):
    tr = eps[0, 0] + eps[1, 1] + eps[2, 2]
    sig = 2.0 * mu * eps.copy()
    for i in range(3):
        sig[i, i] += lam * tr
    return sig


@njit
def psi_pm_spectral(eps, lam, mu):
    """Stiffness-norm projection split; the two parts add up exactly."""
    vals, _ = eig_sym33(eps)
    d = energy_projection_eigvals(vals, lam, mu)
    e0 = vals[0] - d[0]
    e1 = vals[1] - d[1]
    e2 = vals[2] - d[2]
    trd = d[0] + d[1] + d[2]
    tre = e0 + e1 + e2
    psi_p = 0.5 * lam * trd * trd + mu * (d[0] ** 2 + d[1] ** 2 + d[2] ** 2)
    psi_m = 0.5 * lam * tre * tre + mu * (e0 ** 2 + e1 ** 2 + e2 ** 2)
    return psi_p, psi_m


@njit
def psi_pm_kg(eps, K, mu):
    tr = eps[0, 0] + eps[1, 1] + eps[2, 2]
    dev = eps.copy()
    for i in range(3):
        dev[i, i] -= tr / 3.0
    devp, devm = spectral_split33(dev)
    psi_p = 0.5 * K * macaulay_plus(tr) ** 2 + mu * ddot33(devp, devp)
    psi_m = 0.5 * K * macaulay_minus(tr) ** 2 + mu * ddot33(devm, devm)
    return psi_p, psi_m


@njit
def psi_pm_lambda_mu(eps, lam, mu):
    tr = eps[0, 0] + eps[1, 1] + eps[2, 2]
    ep, em = spectral_split33(eps)
    psi_p = 0.5 * lam * macaulay_plus(tr) ** 2 + mu * ddot33(ep, ep)
    psi_m = 0.5 * lam * macaulay_minus(tr) ** 2 + mu * ddot33(em, em)
    return psi_p, psi_m


@njit
def sigma_pm_kg(eps, K, mu):
    tr = eps[0, 0] + eps[1, 1] + eps[2, 2]
    dev = eps.copy()
    for i in range(3):
        dev[i, i] -= tr / 3.0
    devp, devm = spectral_split33(dev)
    sp = 2.0 * mu * devp
    sm = 2.0 * mu * devm
    for i in range(3):
        sp[i, i] += K * macaulay_plus(tr)
        sm[i, i] += K * macaulay_minus(tr)
    return sp, sm


@njit
def sigma_pm_lambda_mu(eps, lam, mu):
    tr = eps[0, 0] + eps[1, 1] + eps[2, 2]
    ep, em = spectral_split33(eps)
    sp = 2.0 * mu * ep
    sm = 2.0 * mu * em
    for i in range(3):
        sp[i, i] += lam * macaulay_plus(tr)
        sm[i, i] += lam * macaulay_minus(tr)
    return sp, sm


# ---------------------------------------------------------------------------
# hyperelasticity (polyconvex Mooney-Rivlin / Neo-Hooke + quadratic U)
# ---------------------------------------------------------------------------

@njit
def vol_U(J, K):
    return 0.5 * K * (J - 1.0) ** 2


@njit
def iso_psi0_raw(i1, i2, mu, k):
    """Isochoric energy without admissibility checks.

    Negative-branch invariants can fall below 3; i2 < 0 is clamped to keep
    the 3/2 power real (callers log the event).
    """
    i2c = i2 if i2 > 0.0 else 0.0
    return 0.5 * mu * ((i1 - 3.0) + k * (i2c ** 1.5 - SQRT27))


@njit
def invariant_split_vals(F):
    """Plus/minus isochoric invariants and Jacobian parts.

    Returns (i1p, i1m, i2p, i2m, jp, jm, J); J <= 0 is signalled by the
    caller checking J before use.
    """
    J = det33(F)
    a = ddot33(F, F)
    cof = cof33(F)
    b = ddot33(cof, cof)
    j23 = J ** (-2.0 / 3.0)
    j43 = J ** (-4.0 / 3.0)
    i1p = 3.0 + j23 * macaulay_plus(a - 3.0)
    i1m = 3.0 + j23 * macaulay_minus(a - 3.0)
    i2p = 3.0 + j43 * macaulay_plus(b - 3.0)
    i2m = 3.0 + j43 * macaulay_minus(b - 3.0)
    jp = 1.0 + macaulay_plus(J - 1.0)
    jm = 1.0 + macaulay_minus(J - 1.0)
    return i1p, i1m, i2p, i2m, jp, jm, J


@njit
def invariant_split_reg_vals(F):
    """Reference-consistent split: brackets on the invariant deviations.

    I1b and I2b never drop below 3, so their minus branches stay at the
    reference value; the tension/compression asymmetry is carried by the
    Jacobian split.  Unlike the split with the bracket inside the
    J-weighted term, this variant is stress-free at F = I.
    """
    J = det33(F)
    a = ddot33(F, F)
    cof = cof33(F)
    b = ddot33(cof, cof)
    i1 = J ** (-2.0 / 3.0) * a
    i2 = J ** (-4.0 / 3.0) * b
    i1p = 3.0 + macaulay_plus(i1 - 3.0)
    i1m = 3.0 + macaulay_minus(i1 - 3.0)
    i2p = 3.0 + macaulay_plus(i2 - 3.0)
    i2m = 3.0 + macaulay_minus(i2 - 3.0)
    jp = 1.0 + macaulay_plus(J - 1.0)
    jm = 1.0 + macaulay_minus(J - 1.0)
    return i1p, i1m, i2p, i2m, jp, jm, J


@njit
def hyper_psi_invariant(F, z, mu, k, K, eps_res):
    """Degraded energy of the additive invariant split, g0 = g1 = g."""
    g = (1.0 - z) ** 2 + eps_res
    i1p, i1m, i2p, i2m, jp, jm, _ = invariant_split_reg_vals(F)
    return (
        g * vol_U(jp, K)
        + vol_U(jm, K)
        + g * iso_psi0_raw(i1p, i2p, mu, k)
        + iso_psi0_raw(i1m, i2m, mu, k)
    )


@njit
def inv33(A):
    c = cof33(A)
    d = det33(A)
    return c.T / d


@njit
def hyper_piola_invariant(F, z, mu, k, K, eps_res):
    """Analytic first Piola-Kirchhoff stress of the invariant split.

    Chain rule through (tr C, tr cof C, det C); P = 2 F dPsi/dC.
    """
    g = (1.0 - z) ** 2 + eps_res
    J = det33(F)
    a = ddot33(F, F)
    cof = cof33(F)
    b = ddot33(cof, cof)
    j23 = J ** (-2.0 / 3.0)
    j43 = J ** (-4.0 / 3.0)
    i1 = j23 * a
    i2 = j43 * b

    # active degradation weights of the isochoric branches
    g1 = g if i1 > 3.0 else 1.0
    g2 = g if i2 > 3.0 else 1.0
    w1 = 0.5 * mu * g1
    w2 = 0.75 * mu * k * np.sqrt(i2) * g2
    wU = g * K * macaulay_plus(J - 1.0) + K * macaulay_minus(J - 1.0)

    C = F.T @ F
    trC = C[0, 0] + C[1, 1] + C[2, 2]

    alpha_I = w1 * j23 + w2 * j43 * trC
    alpha_C = -w2 * j43
    alpha_Ci = (
        -w1 * j23 * a / 3.0
        - w2 * j43 * 2.0 * b / 3.0
        + 0.5 * J * wU
    )

    FinvT = inv33(F).T
    return 2.0 * (alpha_I * F + alpha_C * (F @ C) + alpha_Ci * FinvT)


@njit
def stretch_split_vals(s, z):
    """Per-axis split of principal stretches s (singular values of F)."""
    lp = np.empty(3)
    lm = np.empty(3)
    le = np.empty(3)
    li = np.empty(3)
    for a in range(3):
        lp[a] = 1.0 + macaulay_plus(s[a] - 1.0)
        lm[a] = 1.0 + macaulay_minus(s[a] - 1.0)
        le[a] = lp[a] ** (1.0 - z)
        li[a] = lp[a] ** z * lm[a]
    return lp, lm, le, li


@njit
def _psi_of_principal(le, mu, k, K):
    Jh = le[0] * le[1] * le[2]
    q1 = le[0] ** 2 + le[1] ** 2 + le[2] ** 2
    q2 = (le[0] * le[1]) ** 2 + (le[1] * le[2]) ** 2 + (le[0] * le[2]) ** 2
    i1 = Jh ** (-2.0 / 3.0) * q1
    i2 = Jh ** (-4.0 / 3.0) * q2
    return vol_U(Jh, K) + iso_psi0_raw(i1, i2, mu, k)


@njit
def hyper_psi_stretch(F, z, mu, k, K):
    """Energy of the multiplicative stretch split: full model at lambda^e."""
    _, s, _ = np.linalg.svd(F)
    _, _, le, _ = stretch_split_vals(s, z)
    return _psi_of_principal(le, mu, k, K)


@njit
def hyper_piola_stretch(F, z, mu, k, K):
    """Analytic Piola stress of the stretch split via the SVD of F."""
    U, s, Vt = np.linalg.svd(F)
    lp, _, le, _ = stretch_split_vals(s, z)

    Jh = le[0] * le[1] * le[2]
    q1 = le[0] ** 2 + le[1] ** 2 + le[2] ** 2
    q2 = (le[0] * le[1]) ** 2 + (le[1] * le[2]) ** 2 + (le[0] * le[2]) ** 2
    i1 = Jh ** (-2.0 / 3.0) * q1
    i2 = Jh ** (-4.0 / 3.0) * q2
    dpsi_di1 = 0.5 * mu
    dpsi_di2 = 0.75 * mu * k * np.sqrt(i2 if i2 > 0.0 else 0.0)
    dU_dJ = K * (Jh - 1.0)

    P = np.zeros((3, 3))
    for a in range(3):
        if s[a] <= 1.0:
            continue  # compressive/neutral stretch carries no tensile stress
        o = (a + 1) % 3
        p = (a + 2) % 3
        di1 = 2.0 * Jh ** (-2.0 / 3.0) * le[a] - (2.0 / 3.0) * i1 / le[a]
        di2 = (
            Jh ** (-4.0 / 3.0) * 2.0 * le[a] * (le[o] ** 2 + le[p] ** 2)
            - (4.0 / 3.0) * i2 / le[a]
        )
        dpsi_dle = dU_dJ * Jh / le[a] + dpsi_di1 * di1 + dpsi_di2 * di2
        dle_dl = (1.0 - z) * lp[a] ** (-z)
        coeff = dpsi_dle * dle_dl
        for i in range(3):
            for j in range(3):
                P[i, j] += coeff * U[i, a] * Vt[a, j]
    return P


@njit
def cauchy_from_piola(F, P):
    J = det33(F)
    return (P @ F.T) / J


@njit
def hyper_psi_plus_invariant(F, mu, k, K):
    """Undegraded tensile energy of the invariant split."""
    i1p, _, i2p, _, jp, _, _ = invariant_split_reg_vals(F)
    return vol_U(jp, K) + iso_psi0_raw(i1p, i2p, mu, k)


@njit
def hyper_psi_full(F, mu, k, K):
    J = det33(F)
    a = ddot33(F, F)
    cof = cof33(F)
    b = ddot33(cof, cof)
    i1 = J ** (-2.0 / 3.0) * a
    i2 = J ** (-4.0 / 3.0) * b
    return vol_U(J, K) + iso_psi0_raw(i1, i2, mu, k)


@njit
def stretch_variational_Y(F, z, mu, k, K):
    """Magnitude of -dPsi/dz for the multiplicative stretch split.

    Exact chain rule through lambda^e_a = (lambda^+_a)^(1-z); nonnegative
    under tension and zero at z = 1 where lambda^e = 1.
    """
    _, s, _ = np.linalg.svd(F)
    lp, _, le, _ = stretch_split_vals(s, z)
    Jh = le[0] * le[1] * le[2]
    q1 = le[0] ** 2 + le[1] ** 2 + le[2] ** 2
    q2 = (le[0] * le[1]) ** 2 + (le[1] * le[2]) ** 2 + (le[0] * le[2]) ** 2
    i1 = Jh ** (-2.0 / 3.0) * q1
    i2 = Jh ** (-4.0 / 3.0) * q2
    dpsi_di2 = 0.75 * mu * k * np.sqrt(i2 if i2 > 0.0 else 0.0)
    dU_dJ = K * (Jh - 1.0)
    y = 0.0
    for a in range(3):
        o = (a + 1) % 3
        p = (a + 2) % 3
        di1 = 2.0 * Jh ** (-2.0 / 3.0) * le[a] - (2.0 / 3.0) * i1 / le[a]
        di2 = (
            Jh ** (-4.0 / 3.0) * 2.0 * le[a] * (le[o] ** 2 + le[p] ** 2)
            - (4.0 / 3.0) * i2 / le[a]
        )
        dpsi_dle = dU_dJ * Jh / le[a] + 0.5 * mu * di1 + dpsi_di2 * di2
        y += dpsi_dle * (-np.log(lp[a])) * le[a]
    return macaulay_plus(-y)


# ---------------------------------------------------------------------------
# crack-driving forces (Table-style registry)
# ---------------------------------------------------------------------------

@njit
def principal_stresses(sig):
    vals, _ = eig_sym33(sig)
    return vals


@njit
def drive_value(variant, eps, sig, z, lam, mu, K, params):
    """Dimensionless effective crack-driving force at one point.

    ``params`` packs [sigma_c, tau_c, Rmt, Rmc, eps_c, lam_c, lc_over_Gc].
    Variational variants scale the tensile energy by 2 (1 - z) lc / Gc;
    the ad-hoc criteria are threshold ratios and need no scaling.
    """
    if variant == DRIVE_GRIFFITH:
        psi = lin_psi(eps, lam, mu)
        return 2.0 * (1.0 - z) * params[6] * psi
    if variant == DRIVE_SPECTRAL:
        pp, _ = psi_pm_spectral(eps, lam, mu)
        return 2.0 * (1.0 - z) * params[6] * pp
    if variant == DRIVE_LAMBDA_MU:
        pp, _ = psi_pm_lambda_mu(eps, lam, mu)
        return 2.0 * (1.0 - z) * params[6] * pp
    if variant == DRIVE_KG:
        pp, _ = psi_pm_kg(eps, K, mu)
        return 2.0 * (1.0 - z) * params[6] * pp
    if variant == DRIVE_RANKINE:
        sv = principal_stresses(sig)
        return macaulay_plus(sv[0] / params[0] - 1.0)
    if variant == DRIVE_TRESCA:
        sv = principal_stresses(sig)
        return macaulay_plus((sv[0] - sv[2]) / params[0] - 1.0)
    if variant == DRIVE_TRESCA_DEV:
        tr = sig[0, 0] + sig[1, 1] + sig[2, 2]
        dev = sig.copy()
        for i in range(3):
            dev[i, i] -= tr / 3.0
        tau = np.sqrt(0.375 * ddot33(dev, dev))
        return macaulay_plus(tau / params[1] - 1.0)
    if variant == DRIVE_COMPRESSIVE_RANKINE:
        sv = principal_stresses(sig)
        sm = (sv[0] + sv[1] + sv[2]) / 3.0
        if sm > 0.0:
            return macaulay_plus(sv[0] / params[0] - 1.0)
        return 0.0
    if variant == DRIVE_MOHR_COULOMB:
        sv = principal_stresses(sig)
        return macaulay_plus(sv[0] / params[2] - sv[2] / params[3] - 1.0)
    if variant == DRIVE_BELTRAMI:
        ev, _ = eig_sym33(eps)
        return macaulay_plus(ev[0] / params[4] - 1.0)
    if variant == DRIVE_BELTRAMI_STRETCH:
        # eps slot carries C = F^T F here; principal stretch = sqrt(eig).
        cv, _ = eig_sym33(eps)
        lam_max = np.sqrt(cv[0] if cv[0] > 0.0 else 0.0)
        return macaulay_plus(lam_max / params[5] - 1.0)
    return 0.0

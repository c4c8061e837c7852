"""Numba lane of the batched kernels: jitted loops over the scalar ops."""

import numpy as np

from ..backend import njit
from . import pointops as po
from .scalar import eig_sym33, macaulay_minus, macaulay_plus


@njit
def eig_sym_batch(A):
    n = A.shape[0]
    vals = np.empty((n, 3))
    vecs = np.empty((n, 3, 3))
    for i in range(n):
        v, V = eig_sym33(A[i])
        vals[i] = v
        vecs[i] = V
    return vals, vecs


@njit
def psi_plus_batch(eps, variant, lam, mu, K):
    n = eps.shape[0]
    out = np.empty(n)
    for i in range(n):
        if variant == po.DRIVE_GRIFFITH:
            out[i] = po.lin_psi(eps[i], lam, mu)
        elif variant == po.DRIVE_SPECTRAL:
            pp, _ = po.psi_pm_spectral(eps[i], lam, mu)
            out[i] = pp
        elif variant == po.DRIVE_LAMBDA_MU:
            pp, _ = po.psi_pm_lambda_mu(eps[i], lam, mu)
            out[i] = pp
        elif variant == po.DRIVE_KG:
            pp, _ = po.psi_pm_kg(eps[i], K, mu)
            out[i] = pp
        else:
            out[i] = np.nan
    return out


@njit
def _point_stress(eps, g, stress_mode, lam, mu, K):
    if stress_mode == 0:
        return g * po.lin_sigma(eps, lam, mu)
    if stress_mode == 1:
        sp, sm = po.sigma_pm_kg(eps, K, mu)
    else:
        sp, sm = po.sigma_pm_lambda_mu(eps, lam, mu)
    return g * sp + sm


@njit
def stress_batch(eps, z, stress_mode, lam, mu, K, eps_res):
    n = eps.shape[0]
    out = np.empty((n, 3, 3))
    for i in range(n):
        g = (1.0 - z[i]) ** 2 + eps_res
        out[i] = _point_stress(eps[i], g, stress_mode, lam, mu, K)
    return out


@njit
def drive_batch(eps, z, variant, lam, mu, K, params):
    """Crack drive per point; failure criteria use the effective
    (undegraded) stress so localization feeds back into the drive."""
    n = eps.shape[0]
    out = np.empty(n)
    energy_like = (
        variant == po.DRIVE_GRIFFITH
        or variant == po.DRIVE_SPECTRAL
        or variant == po.DRIVE_LAMBDA_MU
        or variant == po.DRIVE_KG
    )
    for i in range(n):
        if energy_like or variant == po.DRIVE_BELTRAMI:
            out[i] = po.drive_value(
                variant, eps[i], eps[i], z[i], lam, mu, K, params
            )
        else:
            sig = po.lin_sigma(eps[i], lam, mu)
            out[i] = po.drive_value(
                variant, eps[i], sig, z[i], lam, mu, K, params
            )
    return out


# ---------------------------------------------------------------------------
# hyperelastic batches
# ---------------------------------------------------------------------------

@njit
def piola_invariant_batch(F, z, mu, k, K, eps_res):
    n = F.shape[0]
    out = np.empty((n, 3, 3))
    for i in range(n):
        out[i] = po.hyper_piola_invariant(F[i], z[i], mu, k, K, eps_res)
    return out


@njit
def psi_invariant_batch(F, z, mu, k, K, eps_res):
    n = F.shape[0]
    out = np.empty(n)
    for i in range(n):
        out[i] = po.hyper_psi_invariant(F[i], z[i], mu, k, K, eps_res)
    return out


@njit
def piola_stretch_batch(F, z, mu, k, K):
    n = F.shape[0]
    out = np.empty((n, 3, 3))
    for i in range(n):
        out[i] = po.hyper_piola_stretch(F[i], z[i], mu, k, K)
    return out


@njit
def psi_stretch_batch(F, z, mu, k, K):
    n = F.shape[0]
    out = np.empty(n)
    for i in range(n):
        out[i] = po.hyper_psi_stretch(F[i], z[i], mu, k, K)
    return out


@njit
def drive_batch_finite(F, z, variant, method_id, mu, k, K, eps_res, params):
    n = F.shape[0]
    out = np.empty(n)
    for i in range(n):
        if variant == po.DRIVE_GRIFFITH:
            if method_id == 0:
                psi_p = po.hyper_psi_plus_invariant(F[i], mu, k, K)
                out[i] = 2.0 * (1.0 - z[i]) * params[6] * psi_p
            else:
                out[i] = params[6] * po.stretch_variational_Y(
                    F[i], z[i], mu, k, K
                )
        elif variant == po.DRIVE_BELTRAMI_STRETCH:
            C = F[i].T @ F[i]
            out[i] = po.drive_value(
                variant, C, C, z[i], 0.0, mu, K, params
            )
        else:
            # effective stress of the intact material
            if method_id == 0:
                P = po.hyper_piola_invariant(F[i], 0.0, mu, k, K, 0.0)
            else:
                P = po.hyper_piola_stretch(F[i], 0.0, mu, k, K)
            sig = po.cauchy_from_piola(F[i], P)
            sig = 0.5 * (sig + sig.T)
            out[i] = po.drive_value(
                variant, sig, sig, z[i], 0.0, mu, K, params
            )
    return out

"""Linear-elastic energies, stresses, energy splits and degradation.

Strains and stresses are 3x3 ndarrays (units MPa for stress and energy
density).  2D plane states must be embedded with
:func:`pffrac.tensors.embed_plane` before calling into this module.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonPositiveParameter, OutOfRangeZ
from .kernels import pointops as _po
from .tensors import I3

SPLIT_METHODS = ("spectral", "KG", "lambda_mu")


@dataclass(frozen=True)
class LinearElasticParams:
    """Isotropic linear elasticity, N-mm-MPa units.

    lam, mu and K are derived from (E, nu) on construction.
    """

    E: float
    nu: float
    plane_mode: str = "full_3d"
    lam: float = field(init=False)
    mu: float = field(init=False)
    K: float = field(init=False)

    def __post_init__(self):
        if self.E <= 0.0:
            raise NonPositiveParameter(f"E must be positive, got {self.E}")
        if not -1.0 < self.nu < 0.5:
            raise ValueError(f"nu must lie in (-1, 0.5), got {self.nu}")
        if self.plane_mode not in ("plane_stress", "plane_strain", "full_3d"):
            raise ValueError(f"unknown plane mode {self.plane_mode!r}")
        lam = self.E * self.nu / ((1.0 + self.nu) * (1.0 - 2.0 * self.nu))
        mu = self.E / (2.0 * (1.0 + self.nu))
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "K", lam + 2.0 * mu / 3.0)


@dataclass(frozen=True)
class DegradationParams:
    """Residual stiffness fraction of the quadratic degradation function."""

    eps_res: float = 1e-5

    def __post_init__(self):
        if not 0.0 < self.eps_res <= 1e-2:
            raise ValueError(
                f"eps_res must lie in (0, 1e-2], got {self.eps_res}"
            )


def degradation(z, p=DegradationParams()):
    """Quadratic degradation g(z) = (1-z)^2 + eps_res and its derivative."""
    if not 0.0 <= z <= 1.0:
        raise OutOfRangeZ(f"z = {z} outside [0, 1]")
    g = (1.0 - z) ** 2 + p.eps_res
    gp = -2.0 * (1.0 - z)
    return g, gp


def energy_and_stress(eps, p):
    """Strain energy density and conjugate stress of the intact material."""
    eps = np.ascontiguousarray(eps, dtype=float)
    psi = _po.lin_psi(eps, p.lam, p.mu)
    sig = _po.lin_sigma(eps, p.lam, p.mu)
    return psi, sig


def positive_negative_energy(eps, method, p):
    """Tensile/compressive energy pair of the chosen split.

    * ``spectral``: projection onto the PSD cone in the stiffness norm;
      the parts add up to the total energy exactly.
    * ``KG``: bulk/shear split with the Macaulay trace and the positive
      part of the deviatoric strain.
    * ``lambda_mu``: Lame split with the Macaulay trace and the positive
      part of the strain.
    """
    eps = np.ascontiguousarray(eps, dtype=float)
    if method == "spectral":
        return _po.psi_pm_spectral(eps, p.lam, p.mu)
    if method == "KG":
        return _po.psi_pm_kg(eps, p.K, p.mu)
    if method == "lambda_mu":
        return _po.psi_pm_lambda_mu(eps, p.lam, p.mu)
    raise ValueError(f"unknown split method {method!r}")


def split_stresses(eps, method, p):
    """Tensile/compressive stress pair (KG or lambda_mu splits)."""
    eps = np.ascontiguousarray(eps, dtype=float)
    if method == "KG":
        return _po.sigma_pm_kg(eps, p.K, p.mu)
    if method == "lambda_mu":
        return _po.sigma_pm_lambda_mu(eps, p.lam, p.mu)
    raise ValueError(f"split stresses need method 'KG' or 'lambda_mu', got {method!r}")


def degraded_stress(eps, z, method, p, deg=DegradationParams()):
    """Stress with the tensile part degraded: g(z) sigma+ + sigma-."""
    g, _ = degradation(z, deg)
    sp, sm = split_stresses(eps, method, p)
    return g * sp + sm


def critical_stress(E, Gc, lc):
    """Critical homogeneous stress of the 1D phase-field solution.

    sigma_c = sqrt(E Gc / (3 lc)) with Gc in N/mm and lc in mm.
    """
    for name, v in (("E", E), ("Gc", Gc), ("lc", lc)):
        if v <= 0.0:
            raise NonPositiveParameter(f"{name} must be positive, got {v}")
    return math.sqrt(E * Gc / (3.0 * lc))


def hookean_matrix_2d(p):
    """2D constitutive matrix for [exx, eyy, gamma_xy] (engineering shear)."""
    lam, mu = p.lam, p.mu
    if p.plane_mode == "plane_strain":
        lam_eff = lam
    elif p.plane_mode == "plane_stress":
        lam_eff = 2.0 * lam * mu / (lam + 2.0 * mu)
    else:
        raise ValueError("2D constitutive matrix needs a plane mode")
    return np.array(
        [
            [lam_eff + 2.0 * mu, lam_eff, 0.0],
            [lam_eff, lam_eff + 2.0 * mu, 0.0],
            [0.0, 0.0, mu],
        ]
    )


def hookean_matrix_3d(p):
    """6x6 constitutive matrix for [exx, eyy, ezz, g_xy, g_yz, g_xz]."""
    lam, mu = p.lam, p.mu
    C = np.zeros((6, 6))
    C[:3, :3] = lam
    C[np.arange(3), np.arange(3)] += 2.0 * mu
    C[np.arange(3, 6), np.arange(3, 6)] = mu
    return C


__all__ = [
    "LinearElasticParams",
    "DegradationParams",
    "SPLIT_METHODS",
    "degradation",
    "energy_and_stress",
    "positive_negative_energy",
    "split_stresses",
    "degraded_stress",
    "critical_stress",
    "hookean_matrix_2d",
    "hookean_matrix_3d",
    "I3",
]

"""Registry of effective crack-driving forces.

Two families share one entry point:

* variational forces: 2 (1 - z) (lc / Gc) Psi0+, with Psi0+ the tensile
  energy of the configured split (or the full energy for the Griffith
  variant).  They act as soon as any tensile energy exists.
* failure-criterion forces (Rankine, Tresca, compressive Rankine,
  Mohr-Coulomb, Beltrami): dimensionless threshold ratios that stay at
  exactly zero below their threshold.

All evaluations are pure functions of the local state and are safe to
call concurrently.
"""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .kernels import pointops as _po
from .linear_elastic import LinearElasticParams

VARIANTS = {
    "griffith": _po.DRIVE_GRIFFITH,
    "spectral_split": _po.DRIVE_SPECTRAL,
    "lambda_mu_split": _po.DRIVE_LAMBDA_MU,
    "KG_split": _po.DRIVE_KG,
    "rankine": _po.DRIVE_RANKINE,
    "tresca": _po.DRIVE_TRESCA,
    "tresca_deviatoric": _po.DRIVE_TRESCA_DEV,
    "compressive_rankine": _po.DRIVE_COMPRESSIVE_RANKINE,
    "mohr_coulomb": _po.DRIVE_MOHR_COULOMB,
    "beltrami": _po.DRIVE_BELTRAMI,
    "beltrami_stretch": _po.DRIVE_BELTRAMI_STRETCH,
}

ENERGY_VARIANTS = ("griffith", "spectral_split", "lambda_mu_split", "KG_split")
STRESS_VARIANTS = (
    "rankine",
    "tresca",
    "tresca_deviatoric",
    "compressive_rankine",
    "mohr_coulomb",
)

_REQUIRED_THRESHOLDS = {
    "rankine": ("sigma_c",),
    "tresca": ("sigma_c",),
    "tresca_deviatoric": ("tau_c",),
    "compressive_rankine": ("sigma_c",),
    "mohr_coulomb": ("R_m_t", "R_m_c"),
    "beltrami": ("eps_c",),
    "beltrami_stretch": ("lam_c",),
}


@dataclass(frozen=True)
class DrivingForceSpec:
    """One Table-entry crack drive plus its thresholds and normalization."""

    variant: str
    l_c: float = 1.0
    G_c: float = 1.0
    sigma_c: Optional[float] = None
    tau_c: Optional[float] = None
    R_m_t: Optional[float] = None
    R_m_c: Optional[float] = None
    m: Optional[float] = None
    eps_c: Optional[float] = None
    lam_c: Optional[float] = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown driving-force variant {self.variant!r}")
        if self.l_c <= 0.0 or self.G_c <= 0.0:
            raise ValueError("l_c and G_c must be positive")
        if self.m is not None and self.R_m_t is not None and self.R_m_c is not None:
            if abs(self.m - self.R_m_c / self.R_m_t) > 1e-10 * abs(self.m):
                raise ValueError(
                    f"inconsistent m={self.m} vs R_m_c/R_m_t={self.R_m_c / self.R_m_t}"
                )
        for name in _REQUIRED_THRESHOLDS.get(self.variant, ()):
            v = getattr(self, name)
            if v is None or v <= 0.0:
                raise ValueError(
                    f"variant {self.variant!r} needs positive threshold {name}"
                )

    def resolved(self):
        """Fill m from the resistances (or vice versa) where possible."""
        spec = self
        if spec.variant == "mohr_coulomb":
            if spec.m is None:
                spec = replace(spec, m=spec.R_m_c / spec.R_m_t)
        return spec

    def params_vector(self):
        """Threshold packing consumed by the jitted kernels."""
        return np.array(
            [
                self.sigma_c if self.sigma_c is not None else np.nan,
                self.tau_c if self.tau_c is not None else np.nan,
                self.R_m_t if self.R_m_t is not None else np.nan,
                self.R_m_c if self.R_m_c is not None else np.nan,
                self.eps_c if self.eps_c is not None else np.nan,
                self.lam_c if self.lam_c is not None else np.nan,
                self.l_c / self.G_c,
            ]
        )

    @property
    def variant_id(self):
        return VARIANTS[self.variant]


@dataclass(frozen=True)
class PointState:
    """Local state handed to a driving force.

    ``eps`` and ``sigma`` are 3x3 tensors consistent with the active
    constitutive law at assembly time; ``F`` is needed only for the
    finite-strain Beltrami variant.
    """

    eps: np.ndarray
    sigma: np.ndarray
    z: float = 0.0
    F: Optional[np.ndarray] = None


def evaluate(state, spec, material=None):
    """Effective crack-driving force Ybar^e >= 0 at one material point.

    Energy variants need ``material`` (LinearElasticParams) to evaluate
    the split energies from the strain.
    """
    spec = spec.resolved()
    vid = spec.variant_id
    z = float(state.z)
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z = {z} outside [0, 1]")
    params = spec.params_vector()
    if spec.variant in ENERGY_VARIANTS:
        if material is None:
            raise ValueError("energy-based drive needs the elastic parameters")
        eps = np.ascontiguousarray(state.eps, dtype=float)
        return _po.drive_value(
            vid, eps, eps, z, material.lam, material.mu, material.K, params
        )
    if spec.variant == "beltrami":
        eps = np.ascontiguousarray(state.eps, dtype=float)
        return _po.drive_value(vid, eps, eps, z, 0.0, 0.0, 0.0, params)
    if spec.variant == "beltrami_stretch":
        if state.F is None:
            raise ValueError("beltrami_stretch needs the deformation gradient")
        F = np.ascontiguousarray(state.F, dtype=float)
        C = F.T @ F
        return _po.drive_value(vid, C, C, z, 0.0, 0.0, 0.0, params)
    sig = np.ascontiguousarray(state.sigma, dtype=float)
    return _po.drive_value(vid, sig, sig, z, 0.0, 0.0, 0.0, params)


def mohr_coulomb_effective_stress(sigma_I, sigma_III, m):
    """sigma_eff = m sigma_I - sigma_III; with sigma_c = R_m_c the ratio
    form reproduces the two-resistance form identically."""
    return m * sigma_I - sigma_III


def default_eps_c(sigma_c, E):
    """Beltrami threshold calibrated for uniaxial-stress equivalence."""
    return sigma_c / E


def default_lam_c(sigma_c, E):
    return 1.0 + sigma_c / E


__all__ = [
    "DrivingForceSpec",
    "PointState",
    "evaluate",
    "VARIANTS",
    "ENERGY_VARIANTS",
    "STRESS_VARIANTS",
    "mohr_coulomb_effective_stress",
    "default_eps_c",
    "default_lam_c",
    "LinearElasticParams",
]

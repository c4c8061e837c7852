"""Hyperelastic energies, tension-compression splits and Piola stresses.

The stored energy is the polyconvex Mooney-Rivlin form

    Psi = U(J) + mu/2 [ (I1b - 3) + k (I2b^(3/2) - 3 sqrt(3)) ]

with U(J) = K/2 (J - 1)^2; k = 0 recovers the Neo-Hookean model.  Two
damage splits are provided: the additive split of the isochoric
invariants and the Jacobian, and the multiplicative split of the
principal stretches.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInvariant, NonPositiveJacobian
from .kernels import pointops as _po
from .kernels.scalar import det33
from .linear_elastic import DegradationParams

log = logging.getLogger(__name__)

FINITE_SPLITS = ("invariant_split", "stretch_split")


@dataclass(frozen=True)
class HyperelasticParams:
    """Shear modulus mu (MPa), second-shear ratio k = mu2/mu, bulk K (MPa)."""

    mu: float
    K: float
    k: float = 0.0

    def __post_init__(self):
        if self.mu <= 0.0 or self.K <= 0.0 or self.k < 0.0:
            raise ValueError(
                f"need mu > 0, K > 0, k >= 0; got mu={self.mu}, K={self.K}, k={self.k}"
            )

    @property
    def model(self):
        return "neo_hooke" if self.k == 0.0 else "mooney_rivlin_polyconvex"

    @classmethod
    def from_linear(cls, E, nu, k=0.0):
        mu = E / (2.0 * (1.0 + nu))
        K = E / (3.0 * (1.0 - 2.0 * nu))
        return cls(mu=mu, K=K, k=k)


@dataclass(frozen=True)
class SplitState:
    """Plus/minus invariants of the additive split (complementary pairs)."""

    i1_plus: float
    i1_minus: float
    i2_plus: float
    i2_minus: float
    j_plus: float
    j_minus: float
    J: float


@dataclass(frozen=True)
class StretchState:
    """Per-axis stretch split; lambda_e drives the crack, lambda_i does not."""

    stretches: np.ndarray
    lam_plus: np.ndarray
    lam_minus: np.ndarray
    lam_elastic: np.ndarray
    lam_inelastic: np.ndarray


def _check_J(F):
    J = det33(np.ascontiguousarray(F, dtype=float))
    if J <= 0.0:
        raise NonPositiveJacobian(f"det F = {J:.6g} <= 0")
    return J


def volumetric_energy(J, p):
    """Quadratic volumetric energy U(J) = K/2 (J-1)^2."""
    if J <= 0.0:
        raise NonPositiveJacobian(f"J = {J:.6g} <= 0")
    return _po.vol_U(J, p.K)


def isochoric_energy(i1, i2, p):
    """Isochoric energy of the admissible range (i1, i2 >= 3)."""
    slack = 1e-9
    if i1 < 3.0 - slack or i2 < 3.0 - slack:
        raise InvalidInvariant(
            f"isochoric invariants below reference: I1b={i1}, I2b={i2}"
        )
    return _po.iso_psi0_raw(i1, i2, p.mu, p.k)


def isochoric_energy_signed(i1, i2, p):
    """Isochoric energy for split branches where invariants may dip below 3.

    A negative i2 (extreme compression) is clamped to zero to keep the 3/2
    power real; the event is logged.
    """
    if i2 < 0.0:
        log.warning("clamping negative split invariant I2bar=%.4g to 0", i2)
    return _po.iso_psi0_raw(i1, i2, p.mu, p.k)


def invariant_split(F):
    """Additive tension/compression split of (I1b, I2b, J)."""
    _check_J(F)
    F = np.ascontiguousarray(F, dtype=float)
    i1p, i1m, i2p, i2m, jp, jm, J = _po.invariant_split_vals(F)
    return SplitState(i1p, i1m, i2p, i2m, jp, jm, J)


def stretch_split(F, z):
    """Multiplicative split of the principal stretches (singular values)."""
    _check_J(F)
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z = {z} outside [0, 1]")
    F = np.ascontiguousarray(F, dtype=float)
    s = np.linalg.svd(F, compute_uv=False)
    lp, lm, le, li = _po.stretch_split_vals(s, z)
    return StretchState(s, lp, lm, le, li)


def degraded_energy(F, z, method, p, deg=DegradationParams()):
    """Damaged strain energy density for the chosen split method.

    The invariant split applies the tension/compression brackets to the
    deviations (I1b - 3, I2b - 3, J - 1), which keeps the reference
    configuration stress-free and the undegraded energy additive.
    """
    _check_J(F)
    F = np.ascontiguousarray(F, dtype=float)
    if method == "invariant_split":
        return _po.hyper_psi_invariant(F, z, p.mu, p.k, p.K, deg.eps_res)
    if method == "stretch_split":
        return _po.hyper_psi_stretch(F, z, p.mu, p.k, p.K)
    raise ValueError(f"unknown finite split method {method!r}")


def piola_stress(F, z, method, p, deg=DegradationParams()):
    """Analytic first Piola-Kirchhoff stress dPsi/dF of the damaged energy."""
    _check_J(F)
    F = np.ascontiguousarray(F, dtype=float)
    if method == "invariant_split":
        return _po.hyper_piola_invariant(F, z, p.mu, p.k, p.K, deg.eps_res)
    if method == "stretch_split":
        return _po.hyper_piola_stretch(F, z, p.mu, p.k, p.K)
    raise ValueError(f"unknown finite split method {method!r}")


def undamaged_energy(F, p):
    """Energy of the intact material (no split, no degradation)."""
    _check_J(F)
    return _po.hyper_psi_full(np.ascontiguousarray(F, dtype=float), p.mu, p.k, p.K)

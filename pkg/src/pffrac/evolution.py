"""Normalized Allen-Cahn evolution of the phase field.

The evolution tau zdot = < Ybar^e + lc delta(gamma) >_+ is integrated
with an explicit, mass-lumped, clamped nodal update.  Sub-cycling keeps
the explicit diffusion term stable; irreversibility and boundedness are
enforced by the positive-part bracket plus clamping to [z_n, 1].
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad

# Safety factor of the explicit sub-step bound (ours, not physical).
CFL_SAFETY = 0.4


@dataclass(frozen=True)
class EvolutionParams:
    """Regularization length, fracture energy and retardation time."""

    l_c: float
    G_c: float
    dt: float
    c_rule: float = 1.0
    tau: Optional[float] = None
    M: Optional[float] = None

    def __post_init__(self):
        if min(self.l_c, self.G_c, self.dt, self.c_rule) <= 0.0:
            raise ValueError("l_c, G_c, dt and c_rule must be positive")
        if self.tau is not None and self.M is not None:
            expect = self.l_c / (self.M * self.G_c)
            if abs(self.tau - expect) > 1e-10 * abs(expect):
                raise ValueError(
                    f"tau={self.tau} inconsistent with l_c/(M G_c)={expect}"
                )

    @property
    def tau_eff(self):
        if self.tau is not None:
            return self.tau
        if self.M is not None:
            return self.l_c / (self.M * self.G_c)
        return self.c_rule * self.dt


def mobility_rule(dt, c_rule, l_c, G_c):
    """Retardation time and mobility tied to the load-step size.

    tau = c dt keeps the phase field evolving within one time step; the
    companion mobility follows the printed rule M = 2 lc / (c dt Gc).
    """
    if min(dt, c_rule, l_c, G_c) <= 0.0:
        raise ValueError("all arguments must be positive")
    tau = c_rule * dt
    M = 2.0 * l_c / (c_rule * dt * G_c)
    return M, tau


def surface_density(z, grad_z, l_c):
    """Crack surface density gamma = z^2/(2 lc) + (lc/2) |grad z|^2."""
    if l_c <= 0.0:
        raise ValueError("l_c must be positive")
    z = np.asarray(z, dtype=float)
    g = np.asarray(grad_z, dtype=float)
    if g.ndim > z.ndim:
        grad_sq = np.sum(g * g, axis=-1)
    else:
        grad_sq = g * g
    out = z * z / (2.0 * l_c) + 0.5 * l_c * grad_sq
    return float(out) if out.ndim == 0 else out


@dataclass
class PhaseFieldOps:
    """Assembled scalar-field operators of one mesh.

    mass/stiff are consistent CSR matrices; lumped holds the row sums of
    the mass matrix.  fixed_idx/fixed_val pin Dirichlet phase values.
    """

    mass: "object"
    stiff: "object"
    lumped: np.ndarray
    h_min: float
    dim: int
    fixed_idx: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    fixed_val: np.ndarray = field(default_factory=lambda: np.empty(0))


def resistance_term(z, ops, l_c):
    """Weak-form crack resistance, r = -(M z + lc^2 K z).

    The nodal vector of lc * delta(gamma) with the derived sign
    z - lc^2 Laplace(z): nonpositive work against further growth.
    """
    z = np.asarray(z, dtype=float)
    if z.shape[0] != ops.lumped.shape[0]:
        raise ValueError("phase-field vector does not match the mesh operators")
    return -(ops.mass @ z + l_c * l_c * (ops.stiff @ z))


def stable_substep(params, ops):
    """Explicit sub-step bound for the diffusion part of the update."""
    tau = params.tau_eff
    bound = CFL_SAFETY * tau * ops.h_min ** 2 / (2.0 * ops.dim * params.l_c ** 2)
    return min(bound, 0.5 * tau, params.dt)


def step_phase_field(z_n, drive_nodal, params, ops):
    """One clamped explicit update over the load step dt.

    Nodewise z <- clamp(z + (dt_sub/tau) <drive + resistance>_+ / m, z, 1),
    sub-cycled when the stability bound requires it.  The drive vector is
    frozen over the step; the resistance is refreshed every sub-step.
    """
    z = np.asarray(z_n, dtype=float).copy()
    drive = np.asarray(drive_nodal, dtype=float)
    if drive.shape != z.shape:
        raise ValueError("drive vector does not match the phase field")
    tau = params.tau_eff
    dt_sub = stable_substep(params, ops)
    n_sub = max(1, math.ceil(params.dt / dt_sub))
    dt_sub = params.dt / n_sub
    if ops.fixed_idx.size:
        z[ops.fixed_idx] = ops.fixed_val
    for _ in range(n_sub):
        rate = drive + resistance_term(z, ops, params.l_c)
        np.maximum(rate, 0.0, out=rate)
        if not rate.any():
            break
        z_new = z + (dt_sub / tau) * rate / ops.lumped
        np.minimum(z_new, 1.0, out=z_new)
        np.maximum(z_new, z, out=z_new)
        z = z_new
        if ops.fixed_idx.size:
            z[ops.fixed_idx] = ops.fixed_val
    return z


def analytic_profile_and_volume(l_c, half_length=1.0):
    """1D steady crack profile and its diffusive volume measure.

    The profile is z(x) = exp(-|x| / lc); the volume is the quadrature of
    the decaying profile over the specimen half-width (the published
    growing-exponential formula diverges and is read as a sign slip).
    """
    if l_c <= 0.0 or half_length <= 0.0:
        raise ValueError("l_c and half_length must be positive")

    def profile(x):
        return np.exp(-np.abs(x) / l_c)

    V, _ = quad(profile, 0.0, half_length)
    return profile, V


def profile_l2_error(x, z, l_c):
    """Relative L2 distance of nodal z to the analytic exp(-|x|/lc)."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    ref = np.exp(-np.abs(x) / l_c)
    num = np.trapezoid((z - ref) ** 2, x)
    den = np.trapezoid(ref ** 2, x)
    return math.sqrt(num / den)

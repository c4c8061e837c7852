"""Equilibrium solves and the staggered displacement / phase-field loop.

The displacement problem is solved at frozen phase field:

* linear elasticity with the fully degraded stiffness g(z) C: one sparse
  solve, with the factorization reused while z is unchanged;
* linear elasticity with a tension/compression split stress (K-G or
  lambda-mu): Picard iteration on the piecewise-linear stress;
* finite elasticity (invariant or stretch split): Newton with
  backtracking line search, element tangents by differencing the
  analytic Piola stress.

The phase field then advances one clamped explicit step driven by the
configured crack-driving force evaluated at the converged displacements.
"""

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import driving as drv
from .evolution import EvolutionParams, step_phase_field
from .hyperelastic import HyperelasticParams
from .kernels import batch as kb
from .linear_elastic import (
    DegradationParams,
    LinearElasticParams,
    hookean_matrix_2d,
    hookean_matrix_3d,
)

STRESS_MODELS = {"degrade_all": 0, "kg_split": 1, "lambda_mu_split": 2}


@dataclass
class SolveReport:
    converged: bool
    iterations: int
    residual: float
    wall_time: float
    reason: str = ""


@dataclass
class BoundarySchedule:
    """Dirichlet program of one scenario.

    disp_sets: (node_ids, component, scale) triples; the constrained value
    is scale * ubar.  load_sets mark where the reaction force is summed.
    phase_sets pin nodal phase values (e.g. z = 0 at a support).
    """

    disp_sets: list
    du: float
    load_sets: list = field(default_factory=list)
    phase_sets: list = field(default_factory=list)

    def dirichlet(self, ubar, dim):
        dofs, vals = [], []
        for nodes, comp, scale in self.disp_sets:
            dofs.append(np.asarray(nodes, dtype=np.int64) * dim + comp)
            vals.append(np.full(len(nodes), scale * ubar))
        dofs = np.concatenate(dofs)
        vals = np.concatenate(vals)
        order = np.argsort(dofs, kind="stable")
        dofs, vals = dofs[order], vals[order]
        if np.any(np.diff(dofs) == 0):
            dup = dofs[:-1][np.diff(dofs) == 0]
            raise ValueError(f"overlapping Dirichlet dofs: {dup[:5]}")
        return dofs, vals

    def reaction_dofs(self, dim):
        out = []
        for nodes, comp, sign in self.load_sets:
            out.append((np.asarray(nodes, dtype=np.int64) * dim + comp, sign))
        return out


@dataclass
class MaterialModel:
    """Constitutive configuration of a run."""

    kind: str  # "linear" | "finite"
    linear: Optional[LinearElasticParams] = None
    hyper: Optional[HyperelasticParams] = None
    finite_split: str = "invariant_split"
    stress_model: str = "degrade_all"
    deg: DegradationParams = field(default_factory=DegradationParams)

    def __post_init__(self):
        if self.kind == "linear" and self.linear is None:
            raise ValueError("linear material needs LinearElasticParams")
        if self.kind == "finite" and self.hyper is None:
            raise ValueError("finite material needs HyperelasticParams")
        if self.stress_model not in STRESS_MODELS:
            raise ValueError(f"unknown stress model {self.stress_model!r}")


class DisplacementSolver:
    """Displacement equilibrium on one discretization."""

    def __init__(self, disc, material, linear_solver="direct", cg_tol=1e-10):
        self.disc = disc
        self.material = material
        self.linear_solver = linear_solver
        self.cg_tol = cg_tol
        self._lu = None
        self._lu_z = None
        self._K = None
        if material.kind == "linear":
            p = material.linear
            C = hookean_matrix_2d(p) if disc.dim == 2 else hookean_matrix_3d(p)
            self._k0 = disc.stiffness_blocks(C)

    # -- assembly -------------------------------------------------------------

    def _g_qp(self, z):
        g = (1.0 - self.disc.z_at_qp(z)) ** 2 + self.material.deg.eps_res
        return g

    def assemble_degraded_K(self, z):
        disc = self.disc
        g = self._g_qp(z)
        if disc.kind == "tri3":
            blocks = g[:, None, None] * self._k0
        else:
            gq = g.reshape(disc.mesh.n_elems, 8)
            blocks = np.einsum("nq,nqab->nab", gq, self._k0)
        return disc.assemble_vector_K(blocks)

    def _stress_qp_vec(self, u, z):
        """Split-model stress at quadrature points, engineering ordering."""
        disc = self.disc
        p = self.material.linear
        mode = STRESS_MODELS[self.material.stress_model]
        eps_t = disc.strain_tensors(u, p.plane_mode if disc.dim == 2 else None, p.nu)
        zq = disc.z_at_qp(z)
        sig = kb.stress_batch(
            np.ascontiguousarray(eps_t), zq, mode, p.lam, p.mu, p.K,
            self.material.deg.eps_res,
        )
        if disc.dim == 2:
            return np.column_stack([sig[:, 0, 0], sig[:, 1, 1], sig[:, 0, 1]])
        return np.column_stack(
            [sig[:, 0, 0], sig[:, 1, 1], sig[:, 2, 2],
             sig[:, 0, 1], sig[:, 1, 2], sig[:, 0, 2]]
        )

    def internal_force_linear(self, u, z):
        disc = self.disc
        if self.material.stress_model == "degrade_all":
            return self.assemble_degraded_K(z) @ u
        svec = self._stress_qp_vec(u, z)
        return self._scatter_stress(svec)

    def _scatter_stress(self, svec):
        disc = self.disc
        f = np.zeros(disc.n_dofs)
        if disc.kind == "tri3":
            fe = np.einsum("nji,nj,n->ni", disc.B, svec, disc.area)
        else:
            sq = svec.reshape(disc.mesh.n_elems, 8, 6)
            fe = np.einsum("nqji,nqj,nq->ni", disc._hex_Bq, sq, disc.wdet)
        np.add.at(f, disc.elem_dofs.ravel(), fe.ravel())
        return f

    def _split_tangent_blocks(self, u, z):
        """Per-qp secant stiffness of the split stress by differencing."""
        disc = self.disc
        p = self.material.linear
        mode = STRESS_MODELS[self.material.stress_model]
        ncomp = 3 if disc.dim == 2 else 6
        eps = disc.strain_qp(u)
        zq = disc.z_at_qp(z)
        # secant step well below the strain scale: the stress is
        # piecewise linear, so in-branch differencing is exact
        scale = 1e-6 * max(float(np.abs(eps).max()), 1e-10)
        Ct = np.empty((eps.shape[0], ncomp, ncomp))

        def stress_of(eps_comp):
            if disc.dim == 2:
                tens = np.zeros((eps_comp.shape[0], 3, 3))
                tens[:, 0, 0] = eps_comp[:, 0]
                tens[:, 1, 1] = eps_comp[:, 1]
                tens[:, 0, 1] = tens[:, 1, 0] = 0.5 * eps_comp[:, 2]
                if p.plane_mode == "plane_stress":
                    tens[:, 2, 2] = -p.nu / (1 - p.nu) * (eps_comp[:, 0] + eps_comp[:, 1])
            else:
                tens = np.zeros((eps_comp.shape[0], 3, 3))
                tens[:, 0, 0] = eps_comp[:, 0]
                tens[:, 1, 1] = eps_comp[:, 1]
                tens[:, 2, 2] = eps_comp[:, 2]
                tens[:, 0, 1] = tens[:, 1, 0] = 0.5 * eps_comp[:, 3]
                tens[:, 1, 2] = tens[:, 2, 1] = 0.5 * eps_comp[:, 4]
                tens[:, 0, 2] = tens[:, 2, 0] = 0.5 * eps_comp[:, 5]
            sig = kb.stress_batch(
                np.ascontiguousarray(tens), zq, mode, p.lam, p.mu, p.K,
                self.material.deg.eps_res,
            )
            if disc.dim == 2:
                return np.column_stack([sig[:, 0, 0], sig[:, 1, 1], sig[:, 0, 1]])
            return np.column_stack(
                [sig[:, 0, 0], sig[:, 1, 1], sig[:, 2, 2],
                 sig[:, 0, 1], sig[:, 1, 2], sig[:, 0, 2]]
            )

        for c in range(ncomp):
            ep = eps.copy()
            em = eps.copy()
            ep[:, c] += scale
            em[:, c] -= scale
            Ct[:, :, c] = (stress_of(ep) - stress_of(em)) / (2.0 * scale)
        Ct = 0.5 * (Ct + np.transpose(Ct, (0, 2, 1)))
        if disc.kind == "tri3":
            return np.einsum("nji,njk,nkl,n->nil", disc.B, Ct, disc.B, disc.area)
        Cq = Ct.reshape(disc.mesh.n_elems, 8, ncomp, ncomp)
        return np.einsum("nqji,nqjk,nqkl,nq->nil", disc._hex_Bq, Cq, disc._hex_Bq, disc.wdet)

    # -- linear solves ----------------------------------------------------------

    def _solve_system(self, K, bc_dofs, bc_vals, free):
        rhs = -(K[:, bc_dofs] @ bc_vals)
        Kff = K[free][:, free]
        b = rhs[free]
        if self.linear_solver == "cg":
            d = Kff.diagonal()
            Minv = sp.diags(1.0 / np.where(d > 0, d, 1.0))
            x, info = spla.cg(Kff, b, rtol=self.cg_tol, atol=0.0, M=Minv,
                              maxiter=20 * Kff.shape[0])
            if info != 0:
                raise RuntimeError(f"CG failed to converge (info={info})")
            return x, None
        lu = spla.splu(Kff.tocsc())
        return lu.solve(b), lu

    def solve(self, z, bc_dofs, bc_vals, u0=None):
        """Displacement at frozen phase field; returns (u, SolveReport)."""
        t0 = time.perf_counter()
        disc = self.disc
        free = np.setdiff1d(
            np.arange(disc.n_dofs, dtype=np.int64), bc_dofs, assume_unique=False
        )
        if self.material.kind == "finite":
            return self._solve_newton(z, bc_dofs, bc_vals, free, u0, t0)
        if self.material.stress_model != "degrade_all":
            return self._solve_picard(z, bc_dofs, bc_vals, free, u0, t0)

        reuse = (
            self._lu is not None
            and self._lu_z is not None
            and self.linear_solver == "direct"
            and np.array_equal(self._lu_z, z)
        )
        if reuse:
            K = self._K
            rhs = -(K[:, bc_dofs] @ bc_vals)
            uf = self._lu.solve(rhs[free])
        else:
            K = self.assemble_degraded_K(z)
            uf, lu = self._solve_system(K, bc_dofs, bc_vals, free)
            self._K = K
            if lu is not None:
                self._lu = lu
                self._lu_z = z.copy()
        u = np.zeros(disc.n_dofs)
        u[bc_dofs] = bc_vals
        u[free] = uf
        r = K @ u
        res = float(np.linalg.norm(r[free]))
        ref = float(np.linalg.norm(r[bc_dofs]))
        ok = res <= 1e-8 * max(ref, 1.0)
        rep = SolveReport(ok, 1, res, time.perf_counter() - t0,
                          "" if ok else "linear residual above tolerance")
        return u, rep

    def _solve_picard(self, z, bc_dofs, bc_vals, free, u0, t0):
        disc = self.disc
        u = np.zeros(disc.n_dofs) if u0 is None else u0.copy()
        u[bc_dofs] = bc_vals
        res = np.inf
        ref = 1.0
        for it in range(1, 13):
            blocks = self._split_tangent_blocks(u, z)
            K = disc.assemble_vector_K(blocks)
            uf, _ = self._solve_system(K, bc_dofs, bc_vals, free)
            u_new = np.zeros(disc.n_dofs)
            u_new[bc_dofs] = bc_vals
            u_new[free] = uf
            f = self.internal_force_linear(u_new, z)
            res = float(np.linalg.norm(f[free]))
            ref = max(float(np.linalg.norm(f[bc_dofs])), 1.0)
            u = u_new
            if res <= 1e-8 * ref:
                return u, SolveReport(True, it, res, time.perf_counter() - t0)
        return u, SolveReport(False, 12, res, time.perf_counter() - t0,
                              "Picard iteration stalled")

    # -- finite strain ----------------------------------------------------------

    def _piola_batch(self, F, zq):
        m = self.material
        h = m.hyper
        if m.finite_split == "invariant_split":
            return kb.piola_invariant_batch(F, zq, h.mu, h.k, h.K, m.deg.eps_res)
        return kb.piola_stretch_batch(F, zq, h.mu, h.k, h.K)

    def _fint_from_ue(self, ue, zq):
        """Element internal forces from element displacements (ne, nde)."""
        disc = self.disc
        if disc.kind == "tri3":
            un = ue.reshape(-1, 3, 2)
            grads = np.transpose(disc.Gscal, (0, 2, 1))
            H = np.einsum("nak,nai->nik", grads, un)
            F = np.tile(np.eye(3), (un.shape[0], 1, 1))
            F[:, :2, :2] += H
            if np.linalg.det(F).min() <= 0.0:
                return None
            P = self._piola_batch(F, zq)
            fe = np.einsum("nij,naj,n->nai", P[:, :2, :2], grads, disc.area)
            return fe.reshape(ue.shape[0], -1)
        un = ue.reshape(-1, 8, 3)
        H = np.einsum("nqak,nai->nqik", disc.gradN, un)
        F = (np.eye(3) + H).reshape(-1, 3, 3)
        if np.linalg.det(F).min() <= 0.0:
            return None
        P = self._piola_batch(np.ascontiguousarray(F), zq)
        Pq = P.reshape(-1, 8, 3, 3)
        fe = np.einsum("nqij,nqaj,nq->nai", Pq, disc.gradN, disc.wdet)
        return fe.reshape(ue.shape[0], -1)

    def internal_force_finite(self, u, z):
        disc = self.disc
        zq = disc.z_at_qp(z)
        fe = self._fint_from_ue(disc.elem_disp(u), zq)
        if fe is None:
            return None
        f = np.zeros(disc.n_dofs)
        np.add.at(f, disc.elem_dofs.ravel(), fe.ravel())
        return f

    def _tangent_blocks_finite(self, u, z):
        disc = self.disc
        zq = disc.z_at_qp(z)
        ue = disc.elem_disp(u)
        nde = ue.shape[1]
        h = 1e-6 * disc.char_len
        blocks = np.empty((ue.shape[0], nde, nde))
        for c in range(nde):
            up = ue.copy()
            um = ue.copy()
            up[:, c] += h
            um[:, c] -= h
            fp = self._fint_from_ue(up, zq)
            fm = self._fint_from_ue(um, zq)
            if fp is None or fm is None:
                return None
            blocks[:, :, c] = (fp - fm) / (2.0 * h)[:, None]
        return blocks

    def _solve_newton(self, z, bc_dofs, bc_vals, free, u0, t0):
        disc = self.disc
        u = np.zeros(disc.n_dofs) if u0 is None else u0.copy()
        if (
            self.material.finite_split == "stretch_split"
            and float(np.abs(u[free]).max(initial=0.0)) == 0.0
        ):
            # break the lambda = 1 kink degeneracy: bias the start into the
            # stress-free contracted branch
            coords = disc.mesh.coords
            center = coords.mean(axis=0)
            scale = 1e-5
            for comp in range(disc.dim - 1):
                u[comp::disc.dim] = -scale * (coords[:, comp] - center[comp])
        u[bc_dofs] = bc_vals
        f = self.internal_force_finite(u, z)
        if f is None:
            # fall back to an admissible start
            u = np.zeros(disc.n_dofs)
            u[bc_dofs] = bc_vals
            f = self.internal_force_finite(u, z)
            if f is None:
                return u, SolveReport(False, 0, np.inf, time.perf_counter() - t0,
                                      "non-positive Jacobian at start")
        res = float(np.linalg.norm(f[free]))
        # stretch split: compressive modes carry no stiffness, so the
        # tangent can be singular; escalate a Levenberg shift when needed
        regs = (0.0, 1e-8, 1e-5, 1e-2)
        max_iter = 30
        if self.material.finite_split == "stretch_split" and self.material.kind == "finite":
            regs = (1e-8, 1e-5, 1e-2, 1.0)
            max_iter = 100  # kink chatter makes convergence linear
        ident = sp.identity(free.size, format="csr")
        for it in range(1, max_iter + 1):
            ref = max(float(np.linalg.norm(f[bc_dofs])), 1.0)
            if res <= 1e-8 * ref:
                return u, SolveReport(True, it - 1, res, time.perf_counter() - t0)
            blocks = self._tangent_blocks_finite(u, z)
            if blocks is None:
                return u, SolveReport(False, it, res, time.perf_counter() - t0,
                                      "non-positive Jacobian in tangent")
            K = disc.assemble_vector_K(blocks)
            Kff = K[free][:, free]
            dmax = float(np.abs(Kff.diagonal()).max()) or 1.0
            accepted = False
            for reg in regs:
                try:
                    lu = spla.splu((Kff + (reg * dmax) * ident).tocsc())
                    du = lu.solve(-f[free])
                except RuntimeError:
                    continue
                if not np.all(np.isfinite(du)):
                    continue
                alpha = 1.0
                for _ in range(10):
                    u_try = u.copy()
                    u_try[free] += alpha * du
                    f_try = self.internal_force_finite(u_try, z)
                    if f_try is not None:
                        res_try = float(np.linalg.norm(f_try[free]))
                        if res_try < res or res_try <= 1e-8 * ref:
                            u, f, res = u_try, f_try, res_try
                            accepted = True
                            break
                    alpha *= 0.5
                if accepted:
                    break
            if not accepted:
                return u, SolveReport(False, it, res, time.perf_counter() - t0,
                                      "line search failed (NewtonDiverged)")
        return u, SolveReport(False, max_iter, res, time.perf_counter() - t0,
                              "Newton iteration limit (NewtonDiverged)")

    # -- reactions ---------------------------------------------------------------

    def internal_force(self, u, z):
        if self.material.kind == "finite":
            f = self.internal_force_finite(u, z)
            if f is None:
                raise RuntimeError("non-positive Jacobian in reaction evaluation")
            return f
        return self.internal_force_linear(u, z)


def reaction_force(solver, u, z, schedule):
    """Signed reaction along the loading direction, plus the balance check.

    Returns (F, balance) where balance is the relative magnitude of the
    sum of all constrained-dof forces along the load sets (zero when the
    opposite faces balance).
    """
    f = solver.internal_force(u, z)
    dim = solver.disc.dim
    total = 0.0
    gross = 0.0
    net = 0.0
    for dofs, sign in schedule.reaction_dofs(dim):
        s = float(np.sum(f[dofs]))
        total += sign * s
        net += s
        gross += abs(s)
    balance = abs(net) / gross if gross > 0 else 0.0
    n_sets = max(len(schedule.load_sets), 1)
    return total / n_sets, balance


# -- driving force evaluation ----------------------------------------------------


def drive_nodal_vector(disc, solver, u, z, spec):
    """Project the pointwise crack drive to the weak-form nodal vector."""
    m = solver.material
    zq = disc.z_at_qp(z)
    params = spec.params_vector()
    if m.kind == "linear":
        p = m.linear
        eps_t = disc.strain_tensors(
            u, p.plane_mode if disc.dim == 2 else None, p.nu
        )
        y = kb.drive_batch(
            np.ascontiguousarray(eps_t), zq, spec.variant_id,
            p.lam, p.mu, p.K, params,
        )
    else:
        h = m.hyper
        F = disc.deformation_gradients(u)
        method_id = 0 if m.finite_split == "invariant_split" else 1
        y = kb.drive_batch_finite(
            np.ascontiguousarray(F), zq, spec.variant_id, method_id,
            h.mu, h.k, h.K, m.deg.eps_res, params,
        )
    return disc.project_qp_to_nodes(y)


# -- staggered loop ----------------------------------------------------------------


@dataclass
class StepRecord:
    step: int
    ubar: float
    force: float
    max_z: float
    iterations: int
    seconds: float
    balance: float = 0.0


@dataclass
class SimulationState:
    u: np.ndarray
    z: np.ndarray
    ubar: float = 0.0
    step: int = 0


def staggered_step(state, solver, schedule, spec, evo: EvolutionParams):
    """One load increment: displacement solve, drive, phase update, record."""
    t0 = time.perf_counter()
    disc = solver.disc
    state.ubar += schedule.du
    state.step += 1
    bc_dofs, bc_vals = schedule.dirichlet(state.ubar, disc.dim)
    u, rep = solver.solve(state.z, bc_dofs, bc_vals, u0=state.u)
    state.u = u
    if not rep.converged:
        rec = StepRecord(state.step, state.ubar, np.nan, float(state.z.max()),
                         rep.iterations, time.perf_counter() - t0)
        return rec, rep
    force, balance = reaction_force(solver, u, state.z, schedule)
    drive = drive_nodal_vector(disc, solver, u, state.z, spec)
    state.z = step_phase_field(state.z, drive, evo, disc.phase_ops)
    rec = StepRecord(state.step, state.ubar, force, float(state.z.max()),
                     rep.iterations, time.perf_counter() - t0, balance)
    return rec, rep

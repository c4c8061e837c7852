"""Element geometry, quadrature and global operator assembly.

One :class:`Discretization` per mesh caches the strain-displacement data,
the sparse pattern of the stiffness, the scalar-field (phase) operators
and the quadrature-to-node projection.  Displacement DOFs are node-major:
``dof = node * dim + component``.
"""

import numpy as np
import scipy.sparse as sp

from .evolution import PhaseFieldOps

_GP = 1.0 / np.sqrt(3.0)
_HEX_XI = np.array(
    [
        (-_GP, -_GP, -_GP),
        (_GP, -_GP, -_GP),
        (_GP, _GP, -_GP),
        (-_GP, _GP, -_GP),
        (-_GP, -_GP, _GP),
        (_GP, -_GP, _GP),
        (_GP, _GP, _GP),
        (-_GP, _GP, _GP),
    ]
)
_HEX_NODES_XI = np.array(
    [
        (-1, -1, -1),
        (1, -1, -1),
        (1, 1, -1),
        (-1, 1, -1),
        (-1, -1, 1),
        (1, -1, 1),
        (1, 1, 1),
        (-1, 1, 1),
    ],
    dtype=float,
)


def hex_shape(xi):
    """Trilinear shape values (8,) and reference gradients (8, 3)."""
    vals = np.empty(8)
    grads = np.empty((8, 3))
    for a in range(8):
        xa, ya, za = _HEX_NODES_XI[a]
        fx, fy, fz = 1 + xa * xi[0], 1 + ya * xi[1], 1 + za * xi[2]
        vals[a] = fx * fy * fz / 8.0
        grads[a] = (xa * fy * fz / 8.0, fx * ya * fz / 8.0, fx * fy * za / 8.0)
    return vals, grads


class Discretization:
    """Per-mesh cached FEM data for tri3, hex8 or line2 elements."""

    def __init__(self, mesh):
        self.mesh = mesh
        self.kind = mesh.kind
        self.dim = {"line2": 1, "tri3": 2, "hex8": 3}[mesh.kind]
        self.n_nodes = mesh.n_nodes
        self.n_dofs = self.n_nodes * self.dim
        if mesh.kind == "tri3":
            self._setup_tri3()
        elif mesh.kind == "hex8":
            self._setup_hex8()
        elif mesh.kind == "line2":
            self._setup_line2()
        else:
            raise ValueError(f"unsupported element kind {mesh.kind}")
        self._setup_pattern()
        self._setup_phase_ops()

    # -- geometry ----------------------------------------------------------

    def _setup_tri3(self):
        mesh = self.mesh
        p0 = mesh.coords[mesh.elems[:, 0]]
        p1 = mesh.coords[mesh.elems[:, 1]]
        p2 = mesh.coords[mesh.elems[:, 2]]
        b = np.stack(
            [p1[:, 1] - p2[:, 1], p2[:, 1] - p0[:, 1], p0[:, 1] - p1[:, 1]], axis=1
        )
        c = np.stack(
            [p2[:, 0] - p1[:, 0], p0[:, 0] - p2[:, 0], p1[:, 0] - p0[:, 0]], axis=1
        )
        area = 0.5 * (
            (p1[:, 0] - p0[:, 0]) * (p2[:, 1] - p0[:, 1])
            - (p2[:, 0] - p0[:, 0]) * (p1[:, 1] - p0[:, 1])
        )
        ne = mesh.n_elems
        self.area = area
        self.n_qp = ne  # one point per element
        # B: [exx, eyy, gxy] = B @ u_e, u_e = (u0x,u0y,u1x,...)
        B = np.zeros((ne, 3, 6))
        inv2A = 1.0 / (2.0 * area)
        for a in range(3):
            B[:, 0, 2 * a] = b[:, a] * inv2A
            B[:, 1, 2 * a + 1] = c[:, a] * inv2A
            B[:, 2, 2 * a] = c[:, a] * inv2A
            B[:, 2, 2 * a + 1] = b[:, a] * inv2A
        self.B = B
        # scalar-field gradient operator (2, 3) per element
        G = np.zeros((ne, 2, 3))
        G[:, 0, :] = b * inv2A[:, None]
        G[:, 1, :] = c * inv2A[:, None]
        self.Gscal = G
        self.qp_weights = area.copy()
        self.qp_elem = np.arange(ne, dtype=np.int64)
        lmin = np.sqrt(
            np.minimum.reduce(
                [
                    np.sum((p1 - p0) ** 2, axis=1),
                    np.sum((p2 - p1) ** 2, axis=1),
                    np.sum((p0 - p2) ** 2, axis=1),
                ]
            )
        )
        self.char_len = lmin

    def _setup_hex8(self):
        mesh = self.mesh
        ne = mesh.n_elems
        nq = 8
        self.n_qp = ne * nq
        X = mesh.coords[mesh.elems]  # (ne, 8, 3)
        gradN = np.empty((ne, nq, 8, 3))
        wdet = np.empty((ne, nq))
        Nvals = np.empty((nq, 8))
        for q in range(nq):
            vals, dref = hex_shape(_HEX_XI[q])
            Nvals[q] = vals
            J = np.einsum("nai,aj->nij", X, dref)  # dx/dxi
            detJ = np.linalg.det(J)
            if np.any(detJ <= 0.0):
                raise ValueError("non-positive Jacobian in hex mesh")
            Jinv = np.linalg.inv(J)
            gradN[:, q] = np.einsum("ak,nkj->naj", dref, Jinv)
            wdet[:, q] = detJ
        self.gradN = gradN
        self.wdet = wdet
        self.Nvals = Nvals
        self.qp_weights = wdet.ravel()
        self.qp_elem = np.repeat(np.arange(ne, dtype=np.int64), nq)
        edges = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4),
                 (0, 4), (1, 5), (2, 6), (3, 7)]
        el = np.stack([np.sum((X[:, a] - X[:, b]) ** 2, axis=1) for a, b in edges])
        self.char_len = np.sqrt(el.min(axis=0))

    def _setup_line2(self):
        mesh = self.mesh
        x0 = mesh.coords[mesh.elems[:, 0], 0]
        x1 = mesh.coords[mesh.elems[:, 1], 0]
        self.length = np.abs(x1 - x0)
        self.n_qp = mesh.n_elems
        self.qp_weights = self.length.copy()
        self.qp_elem = np.arange(mesh.n_elems, dtype=np.int64)
        self.char_len = self.length

    # -- sparse patterns ----------------------------------------------------

    def _setup_pattern(self):
        mesh = self.mesh
        nn = mesh.elems.shape[1]
        dim = self.dim
        nde = nn * dim
        dofs = (mesh.elems[:, :, None] * dim + np.arange(dim)).reshape(-1, nde)
        self.elem_dofs = dofs
        self.rows = np.repeat(dofs, nde, axis=1).ravel()
        self.cols = np.tile(dofs, (1, nde)).ravel()
        self.srows = np.repeat(mesh.elems, nn, axis=1).ravel()
        self.scols = np.tile(mesh.elems, (1, nn)).ravel()

    def assemble_vector_K(self, kblocks):
        """CSR stiffness from per-element dense blocks (ne, nde, nde)."""
        K = sp.coo_matrix(
            (kblocks.ravel(), (self.rows, self.cols)),
            shape=(self.n_dofs, self.n_dofs),
        )
        return K.tocsr()

    def _assemble_scalar(self, blocks):
        A = sp.coo_matrix(
            (blocks.ravel(), (self.srows, self.scols)),
            shape=(self.n_nodes, self.n_nodes),
        )
        return A.tocsr()

    # -- phase-field operators ----------------------------------------------

    def _setup_phase_ops(self):
        mesh = self.mesh
        if self.kind == "tri3":
            A = self.area
            Mloc = (np.ones((3, 3)) + np.eye(3)) / 12.0
            mblocks = A[:, None, None] * Mloc
            kblocks = np.einsum(
                "nka,nkb,n->nab", self.Gscal, self.Gscal, A
            )
            svals = np.repeat(A[:, None] / 3.0, 3, axis=1).ravel()
            srows = mesh.elems.ravel()
            scols = np.repeat(np.arange(mesh.n_elems), 3)
        elif self.kind == "hex8":
            nq = 8
            mblocks = np.einsum(
                "qa,qb,nq->nab", self.Nvals, self.Nvals, self.wdet
            )
            kblocks = np.einsum(
                "nqak,nqbk,nq->nab", self.gradN, self.gradN, self.wdet
            )
            svals = np.einsum("qa,nq->nqa", self.Nvals, self.wdet)
            srows = np.repeat(mesh.elems[:, None, :], nq, axis=1).ravel()
            scols = np.repeat(np.arange(self.n_qp), 8)
            svals = svals.ravel()
        elif self.kind == "line2":
            h = self.length
            Mloc = np.array([[2.0, 1.0], [1.0, 2.0]]) / 6.0
            Kloc = np.array([[1.0, -1.0], [-1.0, 1.0]])
            mblocks = h[:, None, None] * Mloc
            kblocks = Kloc[None] / h[:, None, None]
            svals = np.repeat(h[:, None] / 2.0, 2, axis=1).ravel()
            srows = mesh.elems.ravel()
            scols = np.repeat(np.arange(mesh.n_elems), 2)
        mass = self._assemble_scalar(mblocks)
        stiff = self._assemble_scalar(kblocks)
        S = sp.coo_matrix(
            (svals, (srows, scols)), shape=(self.n_nodes, self.n_qp)
        ).tocsr()
        self.qp_to_nodes = S
        lumped = np.asarray(mass.sum(axis=1)).ravel()
        self.phase_ops = PhaseFieldOps(
            mass=mass,
            stiff=stiff,
            lumped=lumped,
            h_min=float(self.char_len.min()),
            dim=self.dim,
        )

    def project_qp_to_nodes(self, y_qp):
        """Weak-form nodal vector of a quadrature-point field."""
        return self.qp_to_nodes @ np.asarray(y_qp, dtype=float)

    def z_at_qp(self, z):
        """Interpolate nodal z at the quadrature points."""
        z = np.asarray(z, dtype=float)
        if self.kind == "tri3":
            return z[self.mesh.elems].mean(axis=1)
        if self.kind == "hex8":
            ze = z[self.mesh.elems]  # (ne, 8)
            return np.einsum("qa,na->nq", self.Nvals, ze).ravel()
        return z[self.mesh.elems].mean(axis=1)

    # -- kinematics ----------------------------------------------------------

    def elem_disp(self, u):
        return u[self.elem_dofs]

    def strain_qp(self, u):
        """Small-strain components per quadrature point.

        tri3: (ne, 3) rows [exx, eyy, gxy]; hex8: (ne*8, 6) rows
        [exx, eyy, ezz, gxy, gyz, gxz] (engineering shears).
        """
        ue = self.elem_disp(u)
        if self.kind == "tri3":
            return np.einsum("nij,nj->ni", self.B, ue)
        if self.kind == "hex8":
            un = ue.reshape(-1, 8, 3)
            H = np.einsum("nqak,nai->nqik", self.gradN, un)  # du_i/dx_k
            eps = np.empty((un.shape[0], 8, 6))
            eps[:, :, 0] = H[:, :, 0, 0]
            eps[:, :, 1] = H[:, :, 1, 1]
            eps[:, :, 2] = H[:, :, 2, 2]
            eps[:, :, 3] = H[:, :, 0, 1] + H[:, :, 1, 0]
            eps[:, :, 4] = H[:, :, 1, 2] + H[:, :, 2, 1]
            eps[:, :, 5] = H[:, :, 0, 2] + H[:, :, 2, 0]
            return eps.reshape(-1, 6)
        raise ValueError("strain_qp needs tri3 or hex8")

    def strain_tensors(self, u, plane_mode=None, nu=None):
        """Quadrature strains embedded as (n_qp, 3, 3) tensors."""
        eps = self.strain_qp(u)
        n = eps.shape[0]
        out = np.zeros((n, 3, 3))
        if self.kind == "tri3":
            out[:, 0, 0] = eps[:, 0]
            out[:, 1, 1] = eps[:, 1]
            out[:, 0, 1] = out[:, 1, 0] = 0.5 * eps[:, 2]
            if plane_mode == "plane_stress":
                out[:, 2, 2] = -nu / (1.0 - nu) * (eps[:, 0] + eps[:, 1])
            elif plane_mode != "plane_strain":
                raise ValueError("2D strains need a plane mode")
        else:
            out[:, 0, 0] = eps[:, 0]
            out[:, 1, 1] = eps[:, 1]
            out[:, 2, 2] = eps[:, 2]
            out[:, 0, 1] = out[:, 1, 0] = 0.5 * eps[:, 3]
            out[:, 1, 2] = out[:, 2, 1] = 0.5 * eps[:, 4]
            out[:, 0, 2] = out[:, 2, 0] = 0.5 * eps[:, 5]
        return out

    def deformation_gradients(self, u):
        """F = I + grad u per quadrature point, embedded 3x3.

        2D meshes use a plane-strain embedding (F33 = 1).
        """
        ue = self.elem_disp(u)
        if self.kind == "tri3":
            un = ue.reshape(-1, 3, 2)
            grads = np.transpose(self.Gscal, (0, 2, 1))  # (ne, 3nodes, 2)
            H = np.einsum("nak,nai->nik", grads, un)
            F = np.tile(np.eye(3), (un.shape[0], 1, 1))
            F[:, :2, :2] += H
            return F
        un = ue.reshape(-1, 8, 3)
        H = np.einsum("nqak,nai->nqik", self.gradN, un)
        F = np.tile(np.eye(3), (un.shape[0] * 8, 1, 1))
        F += H.reshape(-1, 3, 3)
        return F

    # -- linear stiffness blocks ---------------------------------------------

    def stiffness_blocks(self, C):
        """Undegraded per-element (or per-qp) stiffness contributions.

        tri3: returns (ne, 6, 6) = A B^T C B.  hex8: returns
        (ne, 8, 24, 24) per-quadrature-point blocks so degradation can act
        per point.
        """
        if self.kind == "tri3":
            return np.einsum("nji,jk,nkl,n->nil", self.B, C, self.B, self.area)
        if self.kind == "hex8":
            ne = self.mesh.n_elems
            Bq = np.zeros((ne, 8, 6, 24))
            g = self.gradN
            for a in range(8):
                Bq[:, :, 0, 3 * a + 0] = g[:, :, a, 0]
                Bq[:, :, 1, 3 * a + 1] = g[:, :, a, 1]
                Bq[:, :, 2, 3 * a + 2] = g[:, :, a, 2]
                Bq[:, :, 3, 3 * a + 0] = g[:, :, a, 1]
                Bq[:, :, 3, 3 * a + 1] = g[:, :, a, 0]
                Bq[:, :, 4, 3 * a + 1] = g[:, :, a, 2]
                Bq[:, :, 4, 3 * a + 2] = g[:, :, a, 1]
                Bq[:, :, 5, 3 * a + 0] = g[:, :, a, 2]
                Bq[:, :, 5, 3 * a + 2] = g[:, :, a, 0]
            self._hex_Bq = Bq
            return np.einsum(
                "nqji,jk,nqkl,nq->nqil", Bq, C, Bq, self.wdet
            )

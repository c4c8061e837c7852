"""Structured mesh generators.

* crisscross plate (4 triangles per grid cell) with an optional embedded
  slit realized by duplicating the seam nodes,
* square-core ("O-grid") disc for the diametral compression test,
* structured hexahedral box,
* 1D bar for the analytic profile checks.

Meshes carry node sets keyed by name; elements are consistently oriented
(positive area/Jacobian).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSlit

_TOL = 1e-9


@dataclass
class Mesh:
    """Nodes, connectivity and tagged node sets of one discretization."""

    kind: str  # "line2" | "tri3" | "hex8"
    coords: np.ndarray  # (n_nodes, dim)
    elems: np.ndarray  # (n_elems, nodes_per_elem) int64
    node_sets: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.coords.shape[1]

    @property
    def n_nodes(self):
        return self.coords.shape[0]

    @property
    def n_elems(self):
        return self.elems.shape[0]

    @property
    def h_min(self):
        return self.info["h_min"]

    def nodes_where(self, predicate):
        """Node ids whose coordinates satisfy the vectorized predicate."""
        mask = predicate(self.coords)
        return np.flatnonzero(mask).astype(np.int64)


def _tri_quality(coords, elems):
    """Signed areas and minimum altitudes of tri3 elements."""
    p0 = coords[elems[:, 0]]
    p1 = coords[elems[:, 1]]
    p2 = coords[elems[:, 2]]
    e01 = p1 - p0
    e02 = p2 - p0
    area2 = e01[:, 0] * e02[:, 1] - e01[:, 1] * e02[:, 0]
    lmax = np.sqrt(
        np.maximum.reduce(
            [
                np.sum((p1 - p0) ** 2, axis=1),
                np.sum((p2 - p1) ** 2, axis=1),
                np.sum((p0 - p2) ** 2, axis=1),
            ]
        )
    )
    return 0.5 * area2, np.abs(area2) / lmax


def _orient_tris(coords, elems):
    areas, _ = _tri_quality(coords, elems)
    flip = areas < 0.0
    elems[flip, 1], elems[flip, 2] = elems[flip, 2], elems[flip, 1].copy()
    return elems


def generate_structured_plate(nx, ny, size, slit_half_length=None):
    """Crisscross triangulation of a rectangle with an optional edge slit.

    The slit runs horizontally at mid height from the left edge to
    x = slit_half_length along existing mesh lines; the seam nodes are
    duplicated so the two crack faces are topologically distinct while
    geometrically coincident.  The node at the slit tip stays shared.
    """
    if nx < 2 or ny < 2:
        raise ValueError("need nx, ny >= 2")
    sx, sy = (size, size) if np.isscalar(size) else size
    dx, dy = sx / nx, sy / ny

    xs = np.linspace(0.0, sx, nx + 1)
    ys = np.linspace(0.0, sy, ny + 1)
    gx, gy = np.meshgrid(xs, ys)
    corners = np.column_stack([gx.ravel(), gy.ravel()])
    n_corner = corners.shape[0]

    cx, cy = np.meshgrid(xs[:-1] + dx / 2, ys[:-1] + dy / 2)
    centers = np.column_stack([cx.ravel(), cy.ravel()])
    coords = np.vstack([corners, centers])

    def cid(i, j):
        return j * (nx + 1) + i

    def mid(i, j):
        return n_corner + j * nx + i

    dup_of = {}
    if slit_half_length is not None:
        if ny % 2 != 0:
            raise InvalidSlit("slit needs an even number of cell rows")
        jmid = ny // 2
        i_tip = slit_half_length / dx
        if abs(i_tip - round(i_tip)) > 1e-9 or not 0 < round(i_tip) <= nx:
            raise InvalidSlit(
                f"slit length {slit_half_length} not aligned with the mesh lines"
            )
        i_tip = int(round(i_tip))
        new_nodes = []
        for i in range(i_tip):
            dup_of[cid(i, jmid)] = coords.shape[0] + len(new_nodes)
            new_nodes.append(coords[cid(i, jmid)])
        coords = np.vstack([coords, np.asarray(new_nodes)])

    elems = np.empty((4 * nx * ny, 3), dtype=np.int64)
    e = 0
    for j in range(ny):
        for i in range(nx):
            c00, c10 = cid(i, j), cid(i + 1, j)
            c11, c01 = cid(i + 1, j + 1), cid(i, j + 1)
            if dup_of and j >= ny // 2:
                # cells above the seam reference the duplicated face
                c00 = dup_of.get(c00, c00)
                c10 = dup_of.get(c10, c10)
            m = mid(i, j)
            elems[e] = (c00, c10, m)
            elems[e + 1] = (c10, c11, m)
            elems[e + 2] = (c11, c01, m)
            elems[e + 3] = (c01, c00, m)
            e += 4

    elems = _orient_tris(coords, elems)
    areas, alts = _tri_quality(coords, elems)
    assert np.all(areas > 0.0)

    tol = _TOL * max(sx, sy)
    sets = {
        "bottom": np.flatnonzero(np.abs(coords[:, 1]) < tol).astype(np.int64),
        "top": np.flatnonzero(np.abs(coords[:, 1] - sy) < tol).astype(np.int64),
        "left": np.flatnonzero(np.abs(coords[:, 0]) < tol).astype(np.int64),
        "right": np.flatnonzero(np.abs(coords[:, 0] - sx) < tol).astype(np.int64),
    }
    info = {
        "h_min": float(alts.min()),
        "cell": (dx, dy),
        "size": (sx, sy),
    }
    if slit_half_length is not None:
        info["slit_tip"] = (slit_half_length, sy / 2.0)
        info["n_duplicated"] = len(dup_of)
    return Mesh("tri3", coords, elems, sets, info)


def plate_h_estimate(nx, ny, size):
    """Minimum triangle altitude of the crisscross plate (half cell size)."""
    sx, sy = (size, size) if np.isscalar(size) else size
    dx, dy = sx / nx, sy / ny
    # altitude of the cell triangles: half the cell extent normal to the base
    return 0.5 * min(dx, dy)


def generate_disc_ogrid(radius, m_core=24, n_rings=12, core_frac=0.5):
    """Square-core disc triangulation ("O-grid").

    A crisscross core square is surrounded by rings blending the square
    boundary into the circle along nodal rays.  m_core must be even so a
    node sits exactly at each pole of the rim.
    """
    if m_core % 2 != 0:
        raise ValueError("m_core must be even (pole nodes on the rim)")
    if not 0.2 <= core_frac <= 0.65:
        raise ValueError("core_frac outside the sensible range")
    s = core_frac * radius
    m = m_core

    core = generate_structured_plate(m, m, (2.0 * s, 2.0 * s))
    coords = core.coords - s  # center the square at the origin
    elems = [core.elems.copy()]
    tol = _TOL * radius

    on_edge = (
        (np.abs(coords[:, 0] - s) < tol)
        | (np.abs(coords[:, 0] + s) < tol)
        | (np.abs(coords[:, 1] - s) < tol)
        | (np.abs(coords[:, 1] + s) < tol)
    )
    edge_ids = np.flatnonzero(on_edge)
    ang = np.arctan2(coords[edge_ids, 1], coords[edge_ids, 0])
    order = np.argsort(ang)
    ring0 = edge_ids[order]
    nt = ring0.shape[0]
    assert nt == 4 * m

    rim_pts = []
    for b in ring0:
        phi = math.atan2(coords[b, 1], coords[b, 0])
        rim_pts.append((radius * math.cos(phi), radius * math.sin(phi)))
    rim_pts = np.asarray(rim_pts)

    prev_ring = ring0
    all_coords = [coords]
    next_id = coords.shape[0]
    for k in range(1, n_rings + 1):
        t = k / n_rings
        ring_xy = (1.0 - t) * coords[ring0] + t * rim_pts
        ring_ids = np.arange(next_id, next_id + nt, dtype=np.int64)
        next_id += nt
        all_coords.append(ring_xy)
        quad_tris = np.empty((2 * nt, 3), dtype=np.int64)
        for i in range(nt):
            a = prev_ring[i]
            b = prev_ring[(i + 1) % nt]
            c = ring_ids[i]
            d = ring_ids[(i + 1) % nt]
            if i % 2 == 0:
                quad_tris[2 * i] = (a, b, d)
                quad_tris[2 * i + 1] = (a, d, c)
            else:
                quad_tris[2 * i] = (a, b, c)
                quad_tris[2 * i + 1] = (b, d, c)
        elems.append(quad_tris)
        prev_ring = ring_ids

    coords = np.vstack(all_coords)
    elems = np.vstack(elems)
    elems = _orient_tris(coords, elems)
    areas, alts = _tri_quality(coords, elems)
    assert np.all(areas > 0.0)

    r = np.sqrt(np.sum(coords ** 2, axis=1))
    rim = np.flatnonzero(np.abs(r - radius) < 1e-6 * radius).astype(np.int64)
    sets = {"rim": rim}
    info = {"h_min": float(alts.min()), "radius": radius}
    return Mesh("tri3", coords, elems, sets, info)


def disc_h_estimate(radius, m_core=24, n_rings=12, core_frac=0.5):
    s = core_frac * radius
    h_core = 0.5 * (2.0 * s / m_core)
    h_ring = (radius - s * math.sqrt(2.0)) / n_rings
    return min(h_core, h_ring)


def generate_box_hex(nx, ny, nz, lx, ly, lz):
    """Structured trilinear hexahedral box [0,lx]x[0,ly]x[0,lz]."""
    xs = np.linspace(0.0, lx, nx + 1)
    ys = np.linspace(0.0, ly, ny + 1)
    zs = np.linspace(0.0, lz, nz + 1)
    coords = np.array(
        [(x, y, z) for z in zs for y in ys for x in xs], dtype=float
    )

    def nid(i, j, k):
        return (k * (ny + 1) + j) * (nx + 1) + i

    elems = np.empty((nx * ny * nz, 8), dtype=np.int64)
    e = 0
    for k in range(nz):
        for j in range(ny):
            for i in range(nx):
                elems[e] = (
                    nid(i, j, k),
                    nid(i + 1, j, k),
                    nid(i + 1, j + 1, k),
                    nid(i, j + 1, k),
                    nid(i, j, k + 1),
                    nid(i + 1, j, k + 1),
                    nid(i + 1, j + 1, k + 1),
                    nid(i, j + 1, k + 1),
                )
                e += 1

    tol = _TOL * max(lx, ly, lz)
    sets = {
        "bottom": np.flatnonzero(np.abs(coords[:, 2]) < tol).astype(np.int64),
        "top": np.flatnonzero(np.abs(coords[:, 2] - lz) < tol).astype(np.int64),
    }
    info = {
        "h_min": float(min(lx / nx, ly / ny, lz / nz)),
        "cell": (lx / nx, ly / ny, lz / nz),
        "size": (lx, ly, lz),
    }
    return Mesh("hex8", coords, elems, sets, info)


def generate_bar_1d(n, half_length):
    """Uniform 1D bar on [-L, L] with a node exactly at the center."""
    if n % 2 != 0:
        raise ValueError("n must be even so a node sits at x = 0")
    xs = np.linspace(-half_length, half_length, n + 1)
    coords = xs[:, None].copy()
    elems = np.column_stack(
        [np.arange(n, dtype=np.int64), np.arange(1, n + 1, dtype=np.int64)]
    )
    sets = {
        "center": np.array([n // 2], dtype=np.int64),
        "ends": np.array([0, n], dtype=np.int64),
    }
    info = {"h_min": float(2.0 * half_length / n), "half_length": half_length}
    return Mesh("line2", coords, elems, sets, info)
